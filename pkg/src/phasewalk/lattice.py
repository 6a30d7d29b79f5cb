"""Indexed lattice geometry for fast walk propagation.

Enumerates the L1 ball of radius ``n_max`` in Z^d once, split by site parity
(sum of coordinates mod 2), and precomputes neighbor index tables.  A walk
step maps the even sublattice onto the odd one and vice versa, so states are
stored as dense (sites, 2d) arrays over one parity class and propagated with
gather operations.  Sites are ordered by L1 radius, so the set reachable
after k steps is a prefix of the site array.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import GuardError
from .state import Distribution

DEFAULT_SITE_GUARD = 200_000_000


@lru_cache(maxsize=None)
def _l1_ball(dim: int, radius: int) -> np.ndarray:
    """Lex-ordered integer points with |x|_1 <= radius, shape (P, dim)."""
    if radius < 0:
        return np.empty((0, dim), dtype=np.int32)
    if dim == 1:
        return np.arange(-radius, radius + 1, dtype=np.int32).reshape(-1, 1)
    blocks = []
    for x0 in range(-radius, radius + 1):
        tail = _l1_ball(dim - 1, radius - abs(x0))
        head = np.full((tail.shape[0], 1), x0, dtype=np.int32)
        blocks.append(np.hstack([head, tail]))
    return np.vstack(blocks)


class LatticeIndex:
    """Site enumeration and neighbor tables for walks of up to n_max steps."""

    def __init__(self, dim: int, n_max: int, site_guard: int = DEFAULT_SITE_GUARD):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        if n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {n_max}")
        self.dim = dim
        self.n_max = n_max
        self.coin_size = 2 * dim

        est = _l1_ball_size(dim, n_max)
        if est * self.coin_size > site_guard:
            raise GuardError(
                f"lattice of ~{est} sites x {self.coin_size} directions exceeds "
                f"the guard of {site_guard} cells"
            )

        pts = _l1_ball(dim, n_max)
        radius = np.abs(pts).sum(axis=1).astype(np.int64)
        parity = (radius & 1).astype(np.int64)

        # box ravel keys; side leaves headroom for a one-step overshoot
        side = 2 * n_max + 3
        shifted = pts.astype(np.int64) + (n_max + 1)
        strides = side ** np.arange(dim - 1, -1, -1, dtype=np.int64)
        keys = shifted @ strides

        self.points: list[np.ndarray] = []
        self.sqnorm: list[np.ndarray] = []
        self.prefix: list[np.ndarray] = []
        self._keys: list[np.ndarray] = []
        for par in (0, 1):
            sel = parity == par
            order = np.lexsort((keys[sel], radius[sel]))
            self.points.append(pts[sel][order])
            self._keys.append(keys[sel][order])
            rad = radius[sel][order]
            self.sqnorm.append((self.points[par].astype(np.float64) ** 2).sum(axis=1))
            # prefix[k] = number of sites of this parity with radius <= k
            self.prefix.append(np.searchsorted(rad, np.arange(n_max + 2), side="right"))

        # neighbor[par][a, i] = index (in the other parity class) of x_i + e_a, or -1
        self.neighbor: list[np.ndarray] = []
        step_keys = np.empty(self.coin_size, dtype=np.int64)
        for a in range(self.coin_size):
            step_keys[a] = (1 if a % 2 == 0 else -1) * strides[a >> 1]
        for par in (0, 1):
            other = 1 - par
            sort_perm = np.argsort(self._keys[other])
            sorted_keys = self._keys[other][sort_perm]
            nb = np.full((self.coin_size, len(self.points[par])), -1, dtype=np.int64)
            if len(sorted_keys) == 0:
                self.neighbor.append(nb)
                continue
            for a in range(self.coin_size):
                target = self._keys[par] + step_keys[a]
                pos = np.searchsorted(sorted_keys, target)
                pos_c = np.minimum(pos, len(sorted_keys) - 1)
                hit = sorted_keys[pos_c] == target
                nb[a, hit] = sort_perm[pos_c[hit]]
            self.neighbor.append(nb)

    def n_sites(self, parity: int) -> int:
        return len(self.points[parity])

    def origin_index(self) -> int:
        # radius-0 site is first in the even class
        return 0

    def distribution(self, probs: np.ndarray, parity: int, n_active: int) -> Distribution:
        """Turn a site-probability vector into a sparse Distribution."""
        mass = {}
        pts = self.points[parity]
        for i in np.nonzero(probs[:n_active])[0]:
            mass[tuple(int(c) for c in pts[i])] = float(probs[i])
        return Distribution(self.dim, mass)


@lru_cache(maxsize=None)
def _l1_ball_size(dim: int, radius: int) -> int:
    if radius < 0:
        return 0
    if dim == 1:
        return 2 * radius + 1
    return sum(_l1_ball_size(dim - 1, radius - abs(x0)) for x0 in range(-radius, radius + 1))

"""Classical baselines: the memoryless random walk (CRW) and the correlated
random walk with memory (CRW-M).

The CRW takes i.i.d. uniform unit steps on Z^d.  The CRW-M repeats its
previous direction with probability ``p_same`` and switches to any given
other direction with probability ``p_other = (1 - p_same)/(2d - 1)``; the
initial direction is drawn uniformly.  Both distributions are computed
exactly by dynamic programming on the indexed lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import state as st
from .kernels import step_numpy
from .lattice import LatticeIndex
from .state import Distribution


@dataclass(frozen=True)
class CRWMParams:
    dim: int
    p_same: float

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not 0.0 <= self.p_same <= 1.0:
            raise ValueError(f"p_same must lie in [0, 1], got {self.p_same}")

    @property
    def coin_size(self) -> int:
        return 2 * self.dim

    @property
    def p_other(self) -> float:
        return (1.0 - self.p_same) / (self.coin_size - 1)

    def transition_matrix(self) -> np.ndarray:
        d = self.coin_size
        mat = np.full((d, d), self.p_other)
        np.fill_diagonal(mat, self.p_same)
        return mat


def crw_distribution(d: int, n: int, index: LatticeIndex | None = None) -> Distribution:
    """Exact endpoint distribution of n i.i.d. uniform unit steps."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if index is None:
        index = LatticeIndex(d, n)
    size = 2 * d
    probs = [np.zeros(index.n_sites(0)), np.zeros(index.n_sites(1))]
    probs[0][index.origin_index()] = 1.0
    for k in range(1, n + 1):
        src, dst = (k - 1) & 1, k & 1
        n_src = int(index.prefix[src][k - 1])
        n_dst = int(index.prefix[dst][k])
        new = np.zeros(n_dst)
        for b in range(size):
            j = index.neighbor[dst][b ^ 1, :n_dst]
            ok = (j >= 0) & (j < n_src)
            new[ok] += probs[src][j[ok]]
        probs[dst][:n_dst] = new / size
    par = n & 1
    return index.distribution(probs[par], par, int(index.prefix[par][n]))


def _dp_endpoint(
    index: LatticeIndex,
    transition: np.ndarray,
    initial_weight: float,
    n: int,
) -> Distribution:
    """DP over (site, last direction): start with ``initial_weight`` on each
    (e_a, a) cell, propagate n - 1 transitions, return the site marginal."""
    size = index.coin_size
    weights = [
        np.zeros((index.n_sites(0), size)),
        np.zeros((index.n_sites(1), size)),
    ]
    for a in range(size):
        site = int(index.neighbor[0][a, index.origin_index()])  # index of e_a
        weights[1][site, a] = initial_weight
    for k in range(2, n + 1):
        src, dst = (k - 1) & 1, k & 1
        step_numpy(
            weights[src],
            weights[dst],
            transition,
            None,
            index.neighbor[dst],
            int(index.prefix[src][k - 1]),
            int(index.prefix[dst][k]),
        )
    par = n & 1
    n_act = int(index.prefix[par][n])
    return index.distribution(weights[par][:n_act].sum(axis=1), par, n_act)


def crwm_distribution(params: CRWMParams, n: int, index: LatticeIndex | None = None) -> Distribution:
    """Exact endpoint distribution of the walk with one-step memory."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if index is None:
        index = LatticeIndex(params.dim, n)
    return _dp_endpoint(index, params.transition_matrix(), 1.0 / params.coin_size, n)


def crw_dispersion(d: int, n: int) -> float:
    """E|x_n|^2 = n for i.i.d. unit steps, in any dimension."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return float(n)


def crwm_dispersion(params: CRWMParams, n: int, index: LatticeIndex | None = None) -> float:
    return st.second_moment(crwm_distribution(params, n, index=index))


def sample_crwm(params: CRWMParams, n: int, seed) -> st.Position:
    """Sample one endpoint of the memory walk."""
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.default_rng(seed)
    x = [0] * params.dim
    if n == 0:
        return tuple(x)
    size = params.coin_size
    a = int(rng.integers(size))
    others = {b: [c for c in range(size) if c != b] for b in range(size)}
    for k in range(n):
        if k > 0:
            if rng.random() >= params.p_same:
                a = others[a][int(rng.integers(size - 1))]
        x[a >> 1] += -1 if a & 1 else 1
    return tuple(x)

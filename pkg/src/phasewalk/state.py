"""Walk states on the integer lattice with a direction (coin) register.

A walk in d dimensions lives on Z^d x D where D is the set of 2d unit-step
directions.  Directions are indexed 0..2d-1 with the convention

    index 2j   -> +axis j
    index 2j+1 -> -axis j

so the opposite direction of ``a`` is ``a ^ 1``.

States are stored sparsely: a dict mapping a position tuple to the length-2d
complex vector of coin amplitudes at that site.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PRUNE_EPS = 1e-15

Position = tuple[int, ...]


def coin_size(dim: int) -> int:
    return 2 * dim


def direction_axis(a: int) -> int:
    return a >> 1


def direction_sign(a: int) -> int:
    return -1 if a & 1 else 1


def opposite(a: int) -> int:
    return a ^ 1


def direction_vector(dim: int, a: int) -> Position:
    """Unit step e_a as a position tuple."""
    if not 0 <= a < 2 * dim:
        raise ValueError(f"direction {a} out of range for dim {dim}")
    v = [0] * dim
    v[direction_axis(a)] = direction_sign(a)
    return tuple(v)


def translate(x: Position, dim: int, a: int) -> Position:
    axis = direction_axis(a)
    return x[:axis] + (x[axis] + direction_sign(a),) + x[axis + 1:]


def squared_norm(x: Position) -> int:
    return sum(c * c for c in x)


@dataclass
class WalkState:
    """Sparse amplitude map over (position, direction)."""

    dim: int
    amplitudes: dict[Position, np.ndarray] = field(default_factory=dict)

    @property
    def coin_size(self) -> int:
        return 2 * self.dim

    def amplitude(self, x: Position, a: int) -> complex:
        vec = self.amplitudes.get(tuple(x))
        return complex(vec[a]) if vec is not None else 0j

    def copy(self) -> "WalkState":
        return WalkState(self.dim, {x: v.copy() for x, v in self.amplitudes.items()})

    def prune(self, eps: float = PRUNE_EPS) -> "WalkState":
        """Drop sites whose amplitudes are all below accumulation noise."""
        dead = [x for x, v in self.amplitudes.items() if np.all(np.abs(v) < eps)]
        for x in dead:
            del self.amplitudes[x]
        return self


def new_initial_state(dim: int) -> WalkState:
    """Origin-localized state with the uniform coin vector (1/sqrt(2d), ...)."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    n = 2 * dim
    vec = np.full(n, 1.0 / np.sqrt(n), dtype=np.complex128)
    return WalkState(dim, {(0,) * dim: vec})


def new_initial_state_with_coin_state(dim: int, coin_amplitudes) -> WalkState:
    """Origin-localized state with an arbitrary unit-norm coin vector."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    vec = np.asarray(coin_amplitudes, dtype=np.complex128)
    if vec.shape != (2 * dim,):
        raise ValueError(f"coin state must have {2 * dim} components, got shape {vec.shape}")
    nrm = np.linalg.norm(vec)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"coin state must be normalized, |v| = {nrm!r}")
    return WalkState(dim, {(0,) * dim: vec.copy()})


def norm(state: WalkState) -> float:
    return float(np.sqrt(sum(np.vdot(v, v).real for v in state.amplitudes.values())))


@dataclass
class Distribution:
    """Sparse probability mass over lattice positions."""

    dim: int
    mass: dict[Position, float] = field(default_factory=dict)

    def prob(self, x) -> float:
        return self.mass.get(tuple(x), 0.0)

    def total(self) -> float:
        return float(sum(self.mass.values()))

    def support(self) -> list[Position]:
        return sorted(self.mass)


def position_distribution(state: WalkState) -> Distribution:
    """Trace out the coin register: mass(x) = sum_a |amp(x, a)|^2."""
    mass = {}
    for x, v in state.amplitudes.items():
        p = float(np.vdot(v, v).real)
        if p > 0.0:
            mass[x] = p
    return Distribution(state.dim, mass)


def second_moment(dist: Distribution) -> float:
    """Dispersion about the origin: sum_x mass(x) |x|^2."""
    return float(sum(p * squared_norm(x) for x, p in dist.mass.items()))


def total_variation(p: Distribution, q: Distribution) -> float:
    """0.5 * sum_x |p(x) - q(x)| over the union support."""
    keys = set(p.mass) | set(q.mass)
    return 0.5 * sum(abs(p.mass.get(x, 0.0) - q.mass.get(x, 0.0)) for x in keys)


def max_mass_deviation(p: Distribution, q: Distribution) -> float:
    keys = set(p.mass) | set(q.mass)
    return max((abs(p.mass.get(x, 0.0) - q.mass.get(x, 0.0)) for x in keys), default=0.0)

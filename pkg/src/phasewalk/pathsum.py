"""Exact small-instance oracles built from per-path weights.

For the permutation-symmetric coin, the amplitude a direction path
(a_1..a_n) contributes is proportional to

    Xi(a) = prod_j [t + (r - t) * delta(a_j, a_{j+1})]

and the phase-averaged (mean) probability of reaching x is the classical sum
K * sum_{paths to x} |Xi|^2.  These sums are evaluated two independent ways:
literal enumeration over all |D|^n paths, and a transfer-matrix DP over
(site, last direction).  The momentum-space route provides one more
independent reconstruction of the pure walk.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import coins as cn
from . import state as st
from .classical import _dp_endpoint
from .errors import GuardError
from .lattice import LatticeIndex
from .state import Distribution

ENUM_GUARD = 10_000_000

# the coin basis state F|s> concentrates on; see fourier_coin and xi_fourier
DISTINGUISHED_DIRECTION = 0


def _check_enum(size: int, n: int) -> None:
    if size**n > ENUM_GUARD:
        raise GuardError(f"{size}^{n} paths exceed the enumeration guard of {ENUM_GUARD}")


def endpoint(dim: int, path: tuple[int, ...]) -> st.Position:
    x = [0] * dim
    for a in path:
        x[a >> 1] += -1 if a & 1 else 1
    return tuple(x)


def xi_grover(path, r: complex, t: complex) -> complex:
    """Per-path weight for the generalized permutation-symmetric coin."""
    if len(path) < 1:
        raise ValueError("path must have length >= 1")
    w = complex(1.0)
    for a, b in zip(path, path[1:]):
        w *= r if a == b else t
    return w


def xi0_grover(path, size: int) -> int:
    """Integer-valued Grover path weight: prod (|D| delta(a_j, a_{j+1}) - 2).

    Relates to xi_grover at the Grover point by
    xi = (-1)^(n-1) * xi0 / |D|^(n-1).
    """
    if len(path) < 1:
        raise ValueError("path must have length >= 1")
    w = 1
    for a, b in zip(path, path[1:]):
        w *= (size - 2) if a == b else -2
    return w


def pure_qw_amplitudes(d: int, n: int) -> dict[tuple[st.Position, int], complex]:
    """Pure Grover-walk state after n steps, by explicit path enumeration.

    Returns the amplitude of |x> (x) |a1> as a map keyed by (position, first
    direction).  Equals n applications of the coin-then-shift step to the
    uniform initial state.
    """
    size = 2 * d
    if size < 4:
        raise ValueError("the Grover path sum is degenerate for |D| = 2; use d >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_enum(size, n)
    coeff = (-1) ** (n + 1) / size ** ((2 * n - 1) / 2)
    acc: dict[tuple[st.Position, int], complex] = {}
    for path in itertools.product(range(size), repeat=n):
        key = (endpoint(d, path), path[0])
        acc[key] = acc.get(key, 0) + xi0_grover(path, size)
    return {k: coeff * v for k, v in acc.items() if v != 0}


def momentum_matrix(k: np.ndarray, coin: np.ndarray) -> np.ndarray:
    """Lambda_k C: the walk step restricted to one momentum sector.

    Lambda_k is diagonal with entries exp(-i k . e_a).
    """
    k = np.asarray(k, dtype=np.float64)
    size = coin.shape[0]
    if size != 2 * len(k):
        raise ValueError(f"coin size {size} does not match momentum dimension {len(k)}")
    dots = np.empty(size)
    for a in range(size):
        dots[a] = (-1.0 if a & 1 else 1.0) * k[a >> 1]
    return np.exp(-1j * dots)[:, None] * coin


def momentum_space_state(
    d: int, n: int, coin: np.ndarray, grid: int | None = None
) -> dict[tuple[st.Position, int], complex]:
    """Reconstruct the pure-walk state by discretizing the momentum integral.

    A uniform grid with at least 2n + 1 points per axis integrates the
    trigonometric-polynomial integrand exactly.
    """
    size = 2 * d
    if grid is None:
        grid = 2 * n + 1
    if grid < 2 * n + 1:
        raise ValueError(f"grid must have >= 2n + 1 = {2 * n + 1} points per axis")
    ks = 2.0 * np.pi * np.arange(grid) / grid - np.pi
    s_vec = np.full(size, 1.0 / math.sqrt(size), dtype=np.complex128)

    acc: dict[tuple[st.Position, int], complex] = {}
    positions = [p for p in itertools.product(range(-n, n + 1), repeat=d) if sum(map(abs, p)) <= n]
    for kidx in itertools.product(range(grid), repeat=d):
        k = ks[list(kidx)]
        mat = momentum_matrix(k, coin)
        vec = np.linalg.matrix_power(mat, n) @ s_vec
        for x in positions:
            phase = np.exp(1j * float(np.dot(k, x)))
            for a in range(size):
                val = phase * vec[a] / grid**d
                if val != 0:
                    key = (x, a)
                    acc[key] = acc.get(key, 0) + val
    return {k2: v for k2, v in acc.items() if abs(v) > 1e-12}


def projector_coin_power(n: int, size: int) -> tuple[float, float]:
    """(p_n, q_n) with (P_a C_G)^n = p_n |a><s| + q_n P_a."""
    if n < 1:
        raise ValueError("n must be >= 1")
    base = (2.0 / size - 1.0) ** (n - 1)
    return 2.0 / math.sqrt(size) * base, -base


def mean_dist_grover(
    d: int, r: complex, t: complex, n: int, index: LatticeIndex | None = None
) -> Distribution:
    """Phase-averaged distribution of the dephased walk, by transfer-matrix DP.

    The DP weight is |r|^2 on a direction repeat and |t|^2 otherwise, with
    initial weight K per starting direction.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    size = 2 * d
    params = cn.GroverParams(complex(r), complex(t), size)
    if index is None:
        index = LatticeIndex(d, n)
    p_same = abs(params.r) ** 2
    p_other = abs(params.t) ** 2
    transition = np.full((size, size), p_other)
    np.fill_diagonal(transition, p_same)
    return _dp_endpoint(index, transition, cn.initial_weight(params), n)


def mean_dist_grover_bruteforce(d: int, r: complex, t: complex, n: int) -> Distribution:
    """Same quantity by literal enumeration over all |D|^n paths."""
    if n < 1:
        raise ValueError("n must be >= 1")
    size = 2 * d
    params = cn.GroverParams(complex(r), complex(t), size)
    _check_enum(size, n)
    k_weight = cn.initial_weight(params)
    mass: dict[st.Position, float] = {}
    for path in itertools.product(range(size), repeat=n):
        x = endpoint(d, path)
        w = k_weight * abs(xi_grover(path, params.r, params.t)) ** 2
        mass[x] = mass.get(x, 0.0) + w
    return Distribution(d, mass)


def per_realization_distribution(
    d: int, r: complex, t: complex, phase_vectors: np.ndarray
) -> Distribution:
    """Exact single-realization distribution for a fixed phase sequence,
    by path enumeration (n = number of phase vectors)."""
    phase_vectors = np.asarray(phase_vectors, dtype=np.float64)
    n, size = phase_vectors.shape
    if size != 2 * d:
        raise ValueError(f"phase vectors must have {2 * d} angles")
    params = cn.GroverParams(complex(r), complex(t), size)
    _check_enum(size, n)
    scale = (params.r - params.t) / math.sqrt(size) + math.sqrt(size) * params.t
    amps: dict[tuple[st.Position, int], complex] = {}
    for path in itertools.product(range(size), repeat=n):
        # paths are stored last-direction-first, so step j's phase vector
        # attaches to path[n - 1 - j]
        theta = sum(phase_vectors[n - 1 - j, a] for j, a in enumerate(path))
        contrib = np.exp(1j * theta) * xi_grover(path, params.r, params.t) * scale
        key = (endpoint(d, path), path[0])
        amps[key] = amps.get(key, 0) + contrib
    mass: dict[st.Position, float] = {}
    for (x, _a1), amp in amps.items():
        mass[x] = mass.get(x, 0.0) + abs(amp) ** 2
    return Distribution(d, mass)


def per_realization_prob(
    d: int, r: complex, t: complex, n: int, phase_vectors: np.ndarray, x
) -> float:
    phase_vectors = np.asarray(phase_vectors, dtype=np.float64)
    if phase_vectors.shape[0] != n:
        raise ValueError(f"expected {n} phase vectors, got {phase_vectors.shape[0]}")
    return per_realization_distribution(d, r, t, phase_vectors).prob(x)


def xi_fourier(path, size: int, symmetrized: bool) -> complex:
    """Per-path weight for the Fourier coin.

    Plain walks (initial coin |s>) only support paths whose final direction
    is the distinguished index 0; symmetrized walks (initial coin F^dag |s>)
    weight every path with magnitude |D|^(-n/2).
    """
    n = len(path)
    if n < 1:
        raise ValueError("path must have length >= 1")
    phase = np.exp(2j * np.pi * sum(a * b for a, b in zip(path, path[1:])) / size)
    if symmetrized:
        return phase / size ** (n / 2)
    if path[-1] != DISTINGUISHED_DIRECTION:
        return 0j
    return phase / size ** ((n - 1) / 2)


def mean_dist_fourier(
    d: int, n: int, symmetrized: bool, index: LatticeIndex | None = None
) -> Distribution:
    """Phase-averaged distribution of the dephased Fourier walk, by DP.

    The symmetrized walk averages to the memoryless classical walk; the
    plain walk constrains the final step to the distinguished direction.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    size = 2 * d
    if index is None:
        index = LatticeIndex(d, n)
    uniform = np.full((size, size), 1.0 / size)
    if symmetrized:
        return _dp_endpoint(index, uniform, 1.0 / size, n)
    # plain case: each of the n - 1 free transitions contributes 1/|D| and the
    # final direction is pinned, so run the uniform DP from unit first-step
    # weights and read off the pinned column
    from .kernels import step_numpy

    weights = [
        np.zeros((index.n_sites(0), size)),
        np.zeros((index.n_sites(1), size)),
    ]
    for a in range(size):
        site = int(index.neighbor[0][a, index.origin_index()])
        weights[1][site, a] = 1.0
    for k in range(2, n + 1):
        src, dst = (k - 1) & 1, k & 1
        step_numpy(
            weights[src],
            weights[dst],
            uniform,
            None,
            index.neighbor[dst],
            int(index.prefix[src][k - 1]),
            int(index.prefix[dst][k]),
        )
    par = n & 1
    n_act = int(index.prefix[par][n])
    probs = weights[par][:n_act, DISTINGUISHED_DIRECTION]
    return index.distribution(probs, par, n_act)

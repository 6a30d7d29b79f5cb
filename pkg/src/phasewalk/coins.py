"""Coin unitaries acting on the direction register.

Supported coins: the Grover diffusion coin 2|s><s| - I, the generalized
permutation-symmetric coin with diagonal entry r and off-diagonal entry t
(unitary only for constrained (r, t) pairs), and the discrete Fourier coin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

UNITARITY_TOL = 1e-12


def is_unitary(matrix: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    matrix = np.asarray(matrix)
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {matrix.shape}")
    return bool(np.max(np.abs(matrix.conj().T @ matrix - np.eye(n))) < tol)


def unitarity_residuals(r: complex, t: complex, size: int) -> tuple[float, float]:
    """Residuals of the two constraints a permutation-symmetric coin must satisfy:

        |r|^2 + (|D|-1)|t|^2 = 1
        (|D|-2)|t|^2 + r* t + r t* = 0
    """
    c1 = abs(r) ** 2 + (size - 1) * abs(t) ** 2 - 1.0
    c2 = (size - 2) * abs(t) ** 2 + 2.0 * (r.conjugate() * t).real
    return abs(c1), abs(c2)


@dataclass(frozen=True)
class GroverParams:
    """A validated (r, t) pair for the permutation-symmetric coin."""

    r: complex
    t: complex
    coin_size: int

    def __post_init__(self):
        res1, res2 = unitarity_residuals(self.r, self.t, self.coin_size)
        if res1 > UNITARITY_TOL or res2 > UNITARITY_TOL:
            raise ValueError(
                f"(r, t) = ({self.r}, {self.t}) is not unitary for |D| = {self.coin_size}: "
                f"normalization residual {res1:.3e}, cross-term residual {res2:.3e}"
            )


def grover_coin(size: int) -> np.ndarray:
    """Grover coin: diagonal 2/|D| - 1, off-diagonal 2/|D|."""
    if size < 2 or size % 2:
        raise ValueError(f"coin size must be even and >= 2, got {size}")
    m = 2.0 / size
    return np.full((size, size), m, dtype=np.complex128) - np.eye(size, dtype=np.complex128)


def generalized_grover(r: complex, t: complex, size: int) -> np.ndarray:
    """Permutation-symmetric coin with r on the diagonal, t elsewhere."""
    params = GroverParams(complex(r), complex(t), size)
    mat = np.full((size, size), params.t, dtype=np.complex128)
    np.fill_diagonal(mat, params.r)
    return mat


def grover_from_r(r: float, size: int, sign: int = 1) -> GroverParams:
    """Canonical real-r family: |t| = sqrt((1 - r^2)/(|D|-1)) and the phase of t
    chosen so the unitarity constraints hold.  Defined for |D| >= 4 and
    (|D|-2)/|D| <= r < 1.
    """
    if size < 4 or size % 2:
        raise ValueError(f"coin size must be even and >= 4, got {size}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    lo = (size - 2) / size
    if not lo <= r < 1.0:
        raise ValueError(f"r = {r} outside the valid range [{lo}, 1) for |D| = {size}")
    t_mag = math.sqrt((1.0 - r * r) / (size - 1))
    arg = (2 - size) * t_mag / (2.0 * r)
    if abs(arg) > 1.0 + 1e-12:
        raise ValueError(f"no unitary phase exists for r = {r}, |D| = {size}")
    alpha = sign * math.acos(max(-1.0, min(1.0, arg)))
    return GroverParams(complex(r), t_mag * cmath.exp(1j * alpha), size)


def grover_params(size: int) -> GroverParams:
    """The (r, t) pair of the plain Grover coin."""
    return GroverParams(complex(2.0 / size - 1.0), complex(2.0 / size), size)


def fourier_coin(size: int) -> np.ndarray:
    """Discrete Fourier coin: entry (j, k) = exp(2 pi i j k / |D|) / sqrt(|D|)."""
    if size < 1:
        raise ValueError(f"coin size must be >= 1, got {size}")
    j, k = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    return np.exp(2j * np.pi * j * k / size) / np.sqrt(size)


def memory_bias(params: GroverParams) -> float:
    """|r|^2 - |t|^2: the repeat-versus-switch bias of the induced classical walk."""
    return abs(params.r) ** 2 - abs(params.t) ** 2


def initial_weight(params: GroverParams) -> float:
    """K = |(r - t)/sqrt(|D|) + sqrt(|D|) t|^2, the per-path starting weight.

    Equals 1/|D| for every valid (r, t); asserted numerically in the tests.
    """
    s = math.sqrt(params.coin_size)
    return abs((params.r - params.t) / s + s * params.t) ** 2


def coin_from_spec(spec: str, size: int) -> np.ndarray:
    """Build a coin from a CLI name: 'grover', 'fourier', or 'grover-r:<real>'."""
    if spec == "grover":
        return grover_coin(size)
    if spec == "fourier":
        return fourier_coin(size)
    if spec.startswith("grover-r:"):
        r = float(spec.split(":", 1)[1])
        params = grover_from_r(r, size, sign=1)
        return generalized_grover(params.r, params.t, size)
    raise ValueError(f"unknown coin spec {spec!r}; expected grover, fourier, or grover-r:<real>")


def coin_params_from_spec(spec: str, size: int) -> GroverParams | None:
    """GroverParams for permutation-symmetric coin specs, None for others."""
    if spec == "grover":
        return grover_params(size)
    if spec.startswith("grover-r:"):
        return grover_from_r(float(spec.split(":", 1)[1]), size, sign=1)
    return None

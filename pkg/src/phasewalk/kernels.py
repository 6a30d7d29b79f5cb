"""The propagation kernel, with a compiled implementation when available.

One step maps a (sites, 2d) amplitude array on one parity class onto the
other class:

    out[i, b] = phases[b] * sum_a mat[b, a] * src[back(b, i), a]

where back(b, i) indexes the site x_i - e_b in the source class (or -1).
The same kernel propagates quantum amplitudes (complex, ``mat`` = coin,
``phases`` = unit-modulus factors) and classical path-weight DPs (real,
``mat`` = transition matrix, ``phases`` = None).

The Cython extension is preferred at import; the NumPy version is the
always-available fallback and the reference for equivalence tests.
"""

from __future__ import annotations

import numpy as np

try:
    from ._speedups import step_kernel as _step_compiled

    HAVE_COMPILED = True
except ImportError:
    _step_compiled = None
    HAVE_COMPILED = False


def step_numpy(src, out, mat, phases, neighbor, n_src, n_dst):
    """Reference NumPy implementation of the propagation kernel.

    src:      (P_src, D) amplitudes; rows >= n_src are ignored
    out:      (P_dst, D) output buffer; rows [0, n_dst) are fully overwritten
    mat:      (D, D) coin or transition matrix
    phases:   (D,) per-direction factors, or None
    neighbor: (D, P_dst) table of the *destination* class: neighbor[a, i] is
              the source-class index of x_i + e_a, so the back-neighbor of
              destination site i along b is neighbor[b ^ 1, i]
    """
    g = src[:n_src] @ mat.T
    if phases is not None:
        g = g * phases
    for b in range(mat.shape[0]):
        j = neighbor[b ^ 1, :n_dst]
        ok = (j >= 0) & (j < n_src)
        col = np.zeros(n_dst, dtype=out.dtype)
        col[ok] = g[j[ok], b]
        out[:n_dst, b] = col


def step_kernel(src, out, mat, phases, neighbor, n_src, n_dst):
    """Dispatch to the compiled kernel when present, else NumPy."""
    if _step_compiled is not None and src.dtype == np.complex128:
        g = src[:n_src] @ mat.T
        if phases is not None:
            g *= phases
        _step_compiled(g, out, neighbor, n_src, n_dst)
    else:
        step_numpy(src, out, mat, phases, neighbor, n_src, n_dst)


def kernel_name() -> str:
    return "cython" if HAVE_COMPILED else "numpy"

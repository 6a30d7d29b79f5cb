# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gather stage of the walk propagation kernel."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def step_kernel(cnp.complex128_t[:, ::1] g,
                cnp.complex128_t[:, ::1] out,
                cnp.int64_t[:, ::1] neighbor,
                Py_ssize_t n_src,
                Py_ssize_t n_dst):
    """out[i, b] = g[neighbor[b ^ 1, i], b] for valid back-neighbors, else 0.

    ``g`` already contains the coin-and-phase transformed source amplitudes;
    ``neighbor`` is the destination-class neighbor table.
    """
    cdef Py_ssize_t D = out.shape[1]
    cdef Py_ssize_t i, b
    cdef cnp.int64_t j
    for i in range(n_dst):
        for b in range(D):
            j = neighbor[b ^ 1, i]
            if 0 <= j < n_src:
                out[i, b] = g[j, b]
            else:
                out[i, b] = 0

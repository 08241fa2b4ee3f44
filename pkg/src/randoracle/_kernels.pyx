# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled transcript accumulation (see randoracle._kernels_py for the contract)."""

import numpy as np
cimport cython


def accumulate_law(const int[:, :, :, ::1] act,
                   const int[:, ::1] seed_tuples,
                   const long long[:, ::1] weights,
                   const int[::1] probe_slots,
                   long long[:, ::1] out,
                   Py_ssize_t row_start=0,
                   Py_ssize_t row_stop=-1):
    cdef Py_ssize_t n_oracles = act.shape[0]
    cdef Py_ssize_t N = act.shape[2]
    cdef Py_ssize_t M = act.shape[3]
    cdef Py_ssize_t NM = N * M
    cdef Py_ssize_t n_tuples = seed_tuples.shape[0]
    cdef Py_ssize_t P = probe_slots.shape[0]
    cdef Py_ssize_t o, t, row, rest, p, d, col, mpow, s, r
    cdef long long w
    if row_stop < 0:
        row_stop = out.shape[0]
    cdef Py_ssize_t n_rows = row_stop - row_start
    if n_rows <= 0:
        return
    # digits[r, p]: probe p's (x*M + y) for row row_start + r
    digits_arr = np.empty((n_rows, P), dtype=np.intp)
    cdef Py_ssize_t[:, ::1] digits = digits_arr
    # lut[p, d]: probe p's answer to digit d, pre-scaled by its column weight
    lut_arr = np.empty((P, NM), dtype=np.intp)
    cdef Py_ssize_t[:, ::1] lut = lut_arr
    with nogil:
        for r in range(n_rows):
            rest = row_start + r
            for p in range(P - 1, -1, -1):
                digits[r, p] = rest % NM
                rest = rest // NM
        for o in range(n_oracles):
            for t in range(n_tuples):
                w = weights[o, t]
                if w == 0:
                    continue
                mpow = 1
                for p in range(P - 1, -1, -1):
                    s = seed_tuples[t, probe_slots[p]]
                    for d in range(NM):
                        lut[p, d] = act[o, s, d // M, d % M] * mpow
                    mpow = mpow * M
                for r in range(n_rows):
                    col = 0
                    for p in range(P):
                        col = col + lut[p, digits[r, p]]
                    out[row_start + r, col] += w

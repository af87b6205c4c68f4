# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled two-mode block kernel; contract matches `_fallback`.

Small groups are updated with a direct register-level loop; wide groups
gather into a contiguous buffer and go through one BLAS zgemm call, so
both the many-tiny-group and the few-large-group regimes stay fast.
"""
import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_blas cimport zgemm

DEF GEMM_THRESHOLD = 8


def apply_groups(cnp.complex128_t[::1] out, cnp.complex128_t[::1] psi,
                 cnp.int32_t[:, ::1] idx, cnp.complex128_t[:, ::1] d):
    cdef Py_ssize_t n_groups = idx.shape[0]
    cdef Py_ssize_t width = idx.shape[1]
    cdef Py_ssize_t g, i, j
    cdef cnp.complex128_t acc
    cdef cnp.complex128_t[:, ::1] gathered
    cdef cnp.complex128_t[:, ::1] mixed
    cdef int k, rows
    cdef char trans_a = b'T'
    cdef char trans_b = b'N'
    cdef cnp.complex128_t one = 1.0
    cdef cnp.complex128_t zero = 0.0

    if width < GEMM_THRESHOLD or n_groups == 0:
        for g in range(n_groups):
            for i in range(width):
                acc = 0
                for j in range(width):
                    acc = acc + d[i, j] * psi[idx[g, j]]
                out[idx[g, i]] = acc
        return

    # row g of `gathered` is the group's ladder; one zgemm computes
    # all rows times d transposed (beating per-group small products)
    gathered = np.empty((n_groups, width), dtype=np.complex128)
    mixed = np.empty((n_groups, width), dtype=np.complex128)
    for g in range(n_groups):
        for j in range(width):
            gathered[g, j] = psi[idx[g, j]]
    k = <int> width
    rows = <int> n_groups
    # C-order (rows, k) buffers are Fortran (k, rows); mixed^F = d^C @ gathered^F
    zgemm(&trans_a, &trans_b, &k, &rows, &k, &one,
          &d[0, 0], &k, &gathered[0, 0], &k, &zero, &mixed[0, 0], &k)
    for g in range(n_groups):
        for i in range(width):
            out[idx[g, i]] = mixed[g, i]

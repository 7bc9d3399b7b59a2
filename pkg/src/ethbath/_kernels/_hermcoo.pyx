# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Hot kernels for implicitly-Hermitian sparse matrix-vector products.

Operators store only the upper triangle (row <= col); the conjugate
transpose is applied on the fly. This is the inner loop of Krylov time
propagation, so it is kept allocation-free.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def hermitian_matvec_complex(const long long[::1] rows,
                             const long long[::1] cols,
                             const double complex[::1] vals,
                             const double complex[::1] x,
                             double complex[::1] y):
    """y += A x for an upper-triangle COO A with implicit conjugate lower part."""
    cdef Py_ssize_t i, n = vals.shape[0]
    cdef long long r, c
    cdef double complex v
    for i in range(n):
        r = rows[i]
        c = cols[i]
        v = vals[i]
        y[r] = y[r] + v * x[c]
        if r != c:
            y[c] = y[c] + v.conjugate() * x[r]


def hermitian_matvec_real(const long long[::1] rows,
                          const long long[::1] cols,
                          const double[::1] vals,
                          const double complex[::1] x,
                          double complex[::1] y):
    """Same as hermitian_matvec_complex for purely real stored values.

    Real-valued entries (the common case for these Hamiltonians) avoid the
    complex multiply, roughly halving the arithmetic per entry.
    """
    cdef Py_ssize_t i, n = vals.shape[0]
    cdef long long r, c
    cdef double v
    for i in range(n):
        r = rows[i]
        c = cols[i]
        v = vals[i]
        y[r] = y[r] + v * x[c]
        if r != c:
            y[c] = y[c] + v * x[r]

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: F_p polynomial products and symmetric Jacobi sweeps."""
from libc.math cimport sqrt, fabs
from libc.stdlib cimport malloc, free

from cartan_lab import _kernels_py

ctypedef unsigned long long u64


def poly_mul_mod(tuple a, tuple b, p):
    """Product of two dense coefficient tuples over F_p (lowest degree first)."""
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0 or lb == 0:
        return ()
    if p >= 2147483648:
        return _kernels_py.poly_mul_mod(a, b, p)
    cdef u64 q = p
    cdef Py_ssize_t n_out = la + lb - 1, i, j
    cdef u64 *xa = <u64 *> malloc(la * sizeof(u64))
    cdef u64 *xb = <u64 *> malloc(lb * sizeof(u64))
    cdef u64 *acc = <u64 *> malloc(n_out * sizeof(u64))
    cdef u64 x, shortest
    cdef bint lazy
    if xa == NULL or xb == NULL or acc == NULL:
        free(xa); free(xb); free(acc)
        raise MemoryError()
    try:
        for i in range(la):
            xa[i] = a[i]
        for i in range(lb):
            xb[i] = b[i]
        for i in range(n_out):
            acc[i] = 0
        shortest = la if la < lb else lb
        # free accumulation is safe while the worst-case column sum fits
        lazy = (q - 1) * (q - 1) <= (<u64> 0xFFFFFFFFFFFFFFFF) // shortest
        for i in range(la):
            x = xa[i]
            if x == 0:
                continue
            if lazy:
                for j in range(lb):
                    acc[i + j] += x * xb[j]
            else:
                for j in range(lb):
                    acc[i + j] = (acc[i + j] + x * xb[j]) % q
        return tuple([acc[i] % q for i in range(n_out)])
    finally:
        free(xa); free(xb); free(acc)


def jacobi_eigvalsh(rows, double tol, int max_sweeps):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, sweeps)``; ``sweeps == -1`` on non-convergence.
    """
    cdef Py_ssize_t n = len(rows), i, j, k, pp, qq
    cdef double *a = <double *> malloc(n * n * sizeof(double))
    cdef double off, diag, apq, theta, t, c, s, akp, akq
    cdef int sweep
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            r = rows[i]
            for j in range(n):
                a[i * n + j] = r[j]
        for sweep in range(max_sweeps + 1):
            off = 0.0
            diag = 0.0
            for i in range(n):
                for j in range(n):
                    if i == j:
                        diag += a[i * n + i] * a[i * n + i]
                    else:
                        off += a[i * n + j] * a[i * n + j]
            if off == 0.0 or sqrt(off) < tol * sqrt(diag):
                return [a[i * n + i] for i in range(n)], sweep
            if sweep == max_sweeps:
                break
            for pp in range(n - 1):
                for qq in range(pp + 1, n):
                    apq = a[pp * n + qq]
                    if apq == 0.0:
                        continue
                    theta = (a[qq * n + qq] - a[pp * n + pp]) / (2.0 * apq)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = (1.0 if theta >= 0 else -1.0) / (fabs(theta) + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        akp = a[k * n + pp]
                        akq = a[k * n + qq]
                        a[k * n + pp] = c * akp - s * akq
                        a[k * n + qq] = s * akp + c * akq
                    for k in range(n):
                        akp = a[pp * n + k]
                        akq = a[qq * n + k]
                        a[pp * n + k] = c * akp - s * akq
                        a[qq * n + k] = s * akp + c * akq
                    a[pp * n + qq] = 0.0
                    a[qq * n + pp] = 0.0
        return [a[i * n + i] for i in range(n)], -1
    finally:
        free(a)

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: truncated q-Pochhammer and theta products."""


cpdef double complex qpoch(double complex x, double complex a, double complex t, int budget):
    """Product of (1 - a t^n x) for n = 0 .. budget-1."""
    cdef double complex acc = 1.0
    cdef double complex fac = a * x
    cdef int n
    for n in range(budget):
        acc *= 1.0 - fac
        fac *= t
    return acc


cpdef double complex theta(double complex x, double complex t, int budget):
    """(x; t)(t/x; t) truncated at ``budget`` factors each."""
    return qpoch(x, 1.0, t, budget) * qpoch(t / x, 1.0, t, budget)


cpdef double complex product_form(double complex x, list factors, int budget):
    """Evaluate prod (x | u, t)^k over ``factors`` of (u, t, k); t == 0 means (1 - u x)^k."""
    cdef double complex acc = 1.0
    cdef double complex u, t, val
    cdef int k
    for u, t, k in factors:
        if t == 0:
            val = 1.0 - u * x
        else:
            val = qpoch(x, u, t, budget)
        acc *= val ** k
    return acc


cpdef double complex horner(list coeffs, double complex x):
    """Evaluate sum coeffs[k] x^k."""
    cdef double complex acc = 0.0
    cdef Py_ssize_t k
    for k in range(len(coeffs) - 1, -1, -1):
        acc = acc * x + <double complex>coeffs[k]
    return acc

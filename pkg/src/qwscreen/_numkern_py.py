"""Pure-Python twins of the compiled numeric kernels in ``_numkern.pyx``."""

from __future__ import annotations


def qpoch(x: complex, a: complex, t: complex, budget: int) -> complex:
    acc = 1.0 + 0j
    fac = a * x
    for _ in range(budget):
        acc *= 1.0 - fac
        fac *= t
    return acc


def theta(x: complex, t: complex, budget: int) -> complex:
    return qpoch(x, 1.0, t, budget) * qpoch(t / x, 1.0, t, budget)


def product_form(x: complex, factors: list, budget: int) -> complex:
    acc = 1.0 + 0j
    for u, t, k in factors:
        val = 1.0 - u * x if t == 0 else qpoch(x, u, t, budget)
        acc *= val**k
    return acc


def horner(coeffs: list, x: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc

"""Bivariate polynomial backends over QQ in the variables Q = q^(1/2), P = p^(1/2).

Two interchangeable implementations are provided:

``flint``
    python-flint's ``fmpq_mpoly`` (compiled FLINT core). Used when importable.
``pure``
    sympy's sparse ``PolyElement`` ring, whose gcd and division are Python code.

Selection happens once at import. Setting ``QWSCREEN_BACKEND=pure`` forces the
fallback. Everything above this module only calls the functions defined on a
:class:`Backend` instance, so the rest of the package is backend-agnostic.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Any, Callable


class Backend:
    """Uniform facade over a concrete polynomial implementation."""

    name: str
    zero: Any
    one: Any
    Q: Any
    P: Any

    def from_dict(self, terms: dict[tuple[int, int], Fraction]) -> Any:
        raise NotImplementedError

    def to_dict(self, poly: Any) -> dict[tuple[int, int], Fraction]:
        raise NotImplementedError

    def gcd(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def exquo(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def lc(self, a: Any) -> Fraction:
        raise NotImplementedError

    def monoms(self, a: Any) -> list[tuple[int, int]]:
        raise NotImplementedError

    def scale(self, a: Any, c: Fraction) -> Any:
        raise NotImplementedError

    def inflate(self, a: Any, n: int) -> Any:
        raise NotImplementedError

    def monomial(self, i: int, j: int) -> Any:
        return self.Q**i * self.P**j


def _frac(c: Any) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class _FlintBackend(Backend):
    name = "flint"

    def __init__(self) -> None:
        import flint

        self._flint = flint
        self._ctx = flint.fmpq_mpoly_ctx.get(("Q", "P"), "deglex")
        self.Q, self.P = self._ctx.gens()
        self.zero = self._ctx.from_dict({})
        self.one = self._ctx.from_dict({(0, 0): 1})

    def from_dict(self, terms):
        fmpq = self._flint.fmpq
        return self._ctx.from_dict(
            {k: fmpq(v.numerator, v.denominator) for k, v in terms.items() if v}
        )

    def to_dict(self, poly):
        return {
            (int(i), int(j)): Fraction(int(c.p), int(c.q))
            for (i, j), c in zip(poly.monoms(), poly.coeffs())
        }

    def gcd(self, a, b):
        return a.gcd(b)

    def exquo(self, a, b):
        return a / b

    def lc(self, a):
        c = a.leading_coefficient()
        return Fraction(int(c.p), int(c.q))

    def monoms(self, a):
        return [(int(i), int(j)) for i, j in a.monoms()]

    def scale(self, a, c):
        return a * self._flint.fmpq(c.numerator, c.denominator)

    def inflate(self, a, n):
        return a.inflate([n, n])


class _SympyBackend(Backend):
    name = "pure"

    def __init__(self) -> None:
        from sympy.polys.domains import QQ
        from sympy.polys.orderings import grlex
        from sympy.polys.rings import ring

        self._QQ = QQ
        self._ring, self.Q, self.P = ring("Q,P", QQ, grlex)
        self.zero = self._ring.zero
        self.one = self._ring.one

    def from_dict(self, terms):
        QQ = self._QQ
        return self._ring.from_dict(
            {k: QQ(v.numerator, v.denominator) for k, v in terms.items() if v}
        )

    def to_dict(self, poly):
        return {m: _frac(c) for m, c in poly.items()}

    def gcd(self, a, b):
        return a.gcd(b)

    def exquo(self, a, b):
        return a.exquo(b)

    def lc(self, a):
        return _frac(a.LC)

    def monoms(self, a):
        return list(a.keys())

    def scale(self, a, c):
        return a * self._QQ(c.numerator, c.denominator)

    def inflate(self, a, n):
        return self._ring.from_dict({(i * n, j * n): c for (i, j), c in a.items()})


_FACTORIES: dict[str, Callable[[], Backend]] = {
    "flint": _FlintBackend,
    "pure": _SympyBackend,
}


def load_backend(preferred: str | None = None) -> Backend:
    """Return the requested backend, falling back to ``pure`` when flint is missing."""
    choice = (preferred or os.environ.get("QWSCREEN_BACKEND") or "flint").lower()
    if choice not in _FACTORIES:
        raise ValueError(f"unknown polynomial backend {choice!r}")
    if choice == "flint":
        try:
            return _FlintBackend()
        except ImportError:
            return _SympyBackend()
    return _FACTORIES[choice]()


BACKEND = load_backend()

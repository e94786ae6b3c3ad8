"""Exact arithmetic in Q(q, p) on the half-integer exponent lattice.

``p`` stands for ``q**beta``; it is an independent transcendental until a
numeric evaluation fixes ``p = q_val**beta_val``.  Internally every element is
stored as

    Q**sq * P**sp * num(Q, P) / den(Q, P),      Q = q**(1/2), P = p**(1/2)

with ``num`` and ``den`` coprime polynomials, neither divisible by ``Q`` or
``P``, and ``den`` having leading coefficient +1 under the degree-lexicographic
order on ``(e_q, e_p)``.  That representation is unique, so structural equality
is field equality.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Union

from ._polybackend import BACKEND

__all__ = [
    "FieldError",
    "PoleError",
    "Monomial",
    "ParamElement",
    "NumericContext",
    "ONE",
    "ZERO",
    "Q",
    "P",
    "pe_arith",
    "pe_pow_n",
    "pe_eval",
    "parse_monomial",
]

Scalar = Union[int, Fraction]


class FieldError(ArithmeticError):
    """Raised for undefined field operations such as division by zero."""


class PoleError(FieldError):
    """Raised when a numeric evaluation hits a vanishing denominator."""


def _half(e: int) -> str:
    return str(Fraction(e, 2))


@total_ordering
@dataclass(frozen=True, slots=True)
class Monomial:
    """``q**(eq2/2) * p**(ep2/2)``; exponents are kept in half units."""

    eq2: int = 0
    ep2: int = 0

    @classmethod
    def of(cls, e_q: Scalar = 0, e_p: Scalar = 0) -> "Monomial":
        a, b = Fraction(e_q) * 2, Fraction(e_p) * 2
        if a.denominator != 1 or b.denominator != 1:
            raise FieldError(f"exponents ({e_q}, {e_p}) leave the half-integer lattice")
        return cls(int(a), int(b))

    @property
    def e_q(self) -> Fraction:
        return Fraction(self.eq2, 2)

    @property
    def e_p(self) -> Fraction:
        return Fraction(self.ep2, 2)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.eq2 + other.eq2, self.ep2 + other.ep2)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.eq2 - other.eq2, self.ep2 - other.ep2)

    def __pow__(self, n: int) -> "Monomial":
        return Monomial(self.eq2 * n, self.ep2 * n)

    def inverse(self) -> "Monomial":
        return Monomial(-self.eq2, -self.ep2)

    def is_identity(self) -> bool:
        return self.eq2 == 0 and self.ep2 == 0

    def __lt__(self, other: "Monomial") -> bool:
        return _deglex_key((self.eq2, self.ep2)) < _deglex_key((other.eq2, other.ep2))

    def log_q(self) -> tuple[Fraction, Fraction]:
        """Exponent of ``q`` as ``a + b*beta`` returned as ``(a, b)``."""
        return self.e_q, self.e_p

    def to_pe(self) -> "ParamElement":
        return ParamElement.from_monomial(self)

    def evaluate(self, q_val: float, p_val: float) -> float:
        return q_val ** float(self.e_q) * p_val ** float(self.e_p)

    def __str__(self) -> str:
        return f"q^{_half(self.eq2)}*p^{_half(self.ep2)}"

    def __repr__(self) -> str:
        return f"Monomial({self})"


def parse_monomial(text: str) -> Monomial:
    """Parse ``q^a*p^b`` style text; factors may be omitted or repeated.

    Accepts forms such as ``p^3/2``, ``q*p^-2``, ``q^1*p^0`` and ``1``.
    """
    text = text.replace(" ", "")
    if text in ("", "1"):
        return Monomial()
    eq = Fraction(0)
    ep = Fraction(0)
    for factor in text.split("*"):
        base, _, exp = factor.partition("^")
        e = Fraction(exp.strip("()")) if exp else Fraction(1)
        if base == "q":
            eq += e
        elif base == "p":
            ep += e
        elif base == "1" and not exp:
            continue
        else:
            raise FieldError(f"cannot parse monomial factor {factor!r}")
    return Monomial.of(eq, ep)


def _deglex_key(m: tuple[int, int]) -> tuple[int, int, int]:
    return (m[0] + m[1], m[0], m[1])


def _strip_monomial(poly) -> tuple[object, int, int]:
    """Divide ``poly`` by its monomial content; return (poly, eQ, eP)."""
    ms = BACKEND.monoms(poly)
    a = min(m[0] for m in ms)
    b = min(m[1] for m in ms)
    if a or b:
        poly = BACKEND.exquo(poly, BACKEND.monomial(a, b))
    return poly, a, b


class ParamElement:
    """An element of Q(q, p) in canonical form.  Immutable."""

    __slots__ = ("_sq", "_sp", "_num", "_den", "_hash")

    def __init__(self, sq: int, sp: int, num, den, *, _canonical: bool = False):
        if not _canonical:
            sq, sp, num, den = _normalize(sq, sp, num, den)
        self._sq = sq
        self._sp = sp
        self._num = num
        self._den = den
        self._hash: int | None = None

    # construction ---------------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "ParamElement":
        c = Fraction(c)
        if c == 0:
            return ZERO
        return cls(0, 0, BACKEND.from_dict({(0, 0): c}), BACKEND.one, _canonical=True)

    @classmethod
    def from_monomial(cls, m: Monomial, c: Scalar = 1) -> "ParamElement":
        c = Fraction(c)
        if c == 0:
            return ZERO
        return cls(m.eq2, m.ep2, BACKEND.from_dict({(0, 0): c}), BACKEND.one, _canonical=True)

    @classmethod
    def from_terms(
        cls,
        num: dict[tuple[int, int], Fraction],
        den: dict[tuple[int, int], Fraction] | None = None,
    ) -> "ParamElement":
        """Build from half-unit exponent maps (exponents may be negative)."""
        den = den or {(0, 0): Fraction(1)}
        return _from_laurent(num) / _from_laurent(den)

    @classmethod
    def coerce(cls, x: "ParamElement | Scalar | Monomial") -> "ParamElement":
        if isinstance(x, ParamElement):
            return x
        if isinstance(x, Monomial):
            return x.to_pe()
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to ParamElement")

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return self._num == BACKEND.zero

    def is_one(self) -> bool:
        return self._sq == 0 and self._sp == 0 and self._num == BACKEND.one and self._den == BACKEND.one

    def as_monomial(self) -> tuple[Fraction, Monomial] | None:
        """Return ``(c, m)`` when the element is ``c * m``, else ``None``."""
        if self.is_zero() or self._den != BACKEND.one:
            return None
        terms = BACKEND.to_dict(self._num)
        if len(terms) != 1:
            return None
        ((i, j), c), = terms.items()
        return c, Monomial(self._sq + i, self._sp + j)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        sq = min(self._sq, other._sq)
        sp = min(self._sp, other._sp)
        n1 = self._num * BACKEND.monomial(self._sq - sq, self._sp - sp)
        n2 = other._num * BACKEND.monomial(other._sq - sq, other._sp - sp)
        d1, d2 = self._den, other._den
        if d1 == d2:
            return ParamElement(sq, sp, n1 + n2, d1)
        g = BACKEND.gcd(d1, d2)
        if g == BACKEND.one:
            return _finish(sq, sp, n1 * d2 + n2 * d1, d1 * d2)
        d1g = BACKEND.exquo(d1, g)
        d2g = BACKEND.exquo(d2, g)
        t = n1 * d2g + n2 * d1g
        if t == BACKEND.zero:
            return ZERO
        g2 = BACKEND.gcd(t, g)
        if g2 != BACKEND.one:
            t = BACKEND.exquo(t, g2)
            den = d1g * BACKEND.exquo(d2, g2)
        else:
            den = d1g * d2
        return _finish(sq, sp, t, den)

    __radd__ = __add__

    def __neg__(self) -> "ParamElement":
        if self.is_zero():
            return self
        return ParamElement(self._sq, self._sp, -self._num, self._den, _canonical=True)

    def __sub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return ZERO
        n1, d1, n2, d2 = self._num, self._den, other._num, other._den
        if d2 != BACKEND.one:
            g = BACKEND.gcd(n1, d2)
            if g != BACKEND.one:
                n1, d2 = BACKEND.exquo(n1, g), BACKEND.exquo(d2, g)
        if d1 != BACKEND.one:
            g = BACKEND.gcd(n2, d1)
            if g != BACKEND.one:
                n2, d1 = BACKEND.exquo(n2, g), BACKEND.exquo(d1, g)
        return _finish(self._sq + other._sq, self._sp + other._sp, n1 * n2, d1 * d2, strip=False)

    __rmul__ = __mul__

    def inverse(self) -> "ParamElement":
        if self.is_zero():
            raise FieldError("division by zero in Q(q,p)")
        return _finish(-self._sq, -self._sp, self._den, self._num, strip=False)

    def __truediv__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int) -> "ParamElement":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return ONE
        num = self._num**n
        den = self._den**n
        lc = BACKEND.lc(den)
        if lc != 1:
            num, den = BACKEND.scale(num, 1 / lc), BACKEND.scale(den, 1 / lc)
        return ParamElement(self._sq * n, self._sp * n, num, den, _canonical=True)

    # structure ------------------------------------------------------------
    def inflate(self, n: int) -> "ParamElement":
        """Substitute ``q -> q**n`` and ``p -> p**n`` for ``n >= 1``.

        The substitution is an injective ring map that keeps coprimality and
        leading terms, so no renormalization is needed.
        """
        if n < 1:
            raise ValueError("inflation factor must be positive")
        if n == 1 or self.is_zero():
            return self
        return ParamElement(
            self._sq * n,
            self._sp * n,
            BACKEND.inflate(self._num, n),
            BACKEND.inflate(self._den, n),
            _canonical=True,
        )

    def numerator_terms(self) -> list[tuple[Monomial, Fraction]]:
        return _sorted_terms(BACKEND.to_dict(self._num), self._sq, self._sp)

    def denominator_terms(self) -> list[tuple[Monomial, Fraction]]:
        return _sorted_terms(BACKEND.to_dict(self._den), 0, 0)

    def key(self) -> tuple:
        return (
            self._sq,
            self._sp,
            tuple(sorted(BACKEND.to_dict(self._num).items())),
            tuple(sorted(BACKEND.to_dict(self._den).items())),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamElement):
            other = _maybe(other)
            if other is NotImplemented:
                return NotImplemented
        return (
            self._sq == other._sq
            and self._sp == other._sp
            and self._num == other._num
            and self._den == other._den
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    # numeric --------------------------------------------------------------
    def evaluate(self, q_val: complex, p_val: complex) -> complex:
        """Evaluate at concrete values of ``q`` and ``p`` (positive roots for halves)."""
        Qv = cmath.sqrt(q_val) if isinstance(q_val, complex) else math.sqrt(q_val)
        Pv = cmath.sqrt(p_val) if isinstance(p_val, complex) else math.sqrt(p_val)
        den = _eval_poly(BACKEND.to_dict(self._den), Qv, Pv)
        if abs(den) < 1e-14:
            raise PoleError("denominator vanishes at the evaluation point")
        num = _eval_poly(BACKEND.to_dict(self._num), Qv, Pv)
        return num * (Qv**self._sq) * (Pv**self._sp) / den

    # text -----------------------------------------------------------------
    def __str__(self) -> str:
        return f"({_fmt_terms(self.numerator_terms())})/({_fmt_terms(self.denominator_terms())})"

    def __repr__(self) -> str:
        return f"ParamElement({self})"

    @classmethod
    def parse(cls, text: str) -> "ParamElement":
        """Inverse of :meth:`__str__`; also accepts a bare polynomial without ``/``."""
        text = text.strip()
        if text.startswith("(") and ")/(" in text and text.endswith(")"):
            num_s, den_s = text[1:-1].split(")/(", 1)
        else:
            num_s, den_s = text, "1"
        return cls.from_terms(_parse_terms(num_s), _parse_terms(den_s))


def _maybe(x):
    if isinstance(x, ParamElement):
        return x
    if isinstance(x, (int, Fraction)):
        return ParamElement.const(x)
    if isinstance(x, Monomial):
        return x.to_pe()
    return NotImplemented


def _finish(sq, sp, num, den, strip=True) -> ParamElement:
    """Finish a result whose num/den are already coprime."""
    if num == BACKEND.zero:
        return ZERO
    if strip:
        num, a, b = _strip_monomial(num)
        sq, sp = sq + a, sp + b
        den, a, b = _strip_monomial(den)
        sq, sp = sq - a, sp - b
    lc = BACKEND.lc(den)
    if lc != 1:
        num, den = BACKEND.scale(num, 1 / lc), BACKEND.scale(den, 1 / lc)
    return ParamElement(sq, sp, num, den, _canonical=True)


def _normalize(sq, sp, num, den):
    if den == BACKEND.zero:
        raise FieldError("zero denominator")
    if num == BACKEND.zero:
        return 0, 0, BACKEND.zero, BACKEND.one
    g = BACKEND.gcd(num, den)
    if g != BACKEND.one:
        num, den = BACKEND.exquo(num, g), BACKEND.exquo(den, g)
    r = _finish(sq, sp, num, den)
    return r._sq, r._sp, r._num, r._den


def _from_laurent(terms: dict[tuple[int, int], Fraction]) -> ParamElement:
    terms = {k: Fraction(v) for k, v in terms.items() if v}
    if not terms:
        return ZERO
    a = min(k[0] for k in terms)
    b = min(k[1] for k in terms)
    poly = BACKEND.from_dict({(i - a, j - b): c for (i, j), c in terms.items()})
    return ParamElement(a, b, poly, BACKEND.one)


def _sorted_terms(d, sq, sp) -> list[tuple[Monomial, Fraction]]:
    items = sorted(d.items(), key=lambda kv: _deglex_key(kv[0]), reverse=True)
    return [(Monomial(i + sq, j + sp), c) for (i, j), c in items]


def _fmt_terms(terms: Iterable[tuple[Monomial, Fraction]]) -> str:
    parts = [f"{c}*{m}" for m, c in terms]
    return "+".join(parts) if parts else "0"


def _parse_terms(text: str) -> dict[tuple[int, int], Fraction]:
    out: dict[tuple[int, int], Fraction] = {}
    text = text.replace(" ", "")
    if text in ("", "0"):
        return out
    for chunk in text.split("+"):
        if not chunk:
            continue
        coeff_s, star, mono_s = chunk.partition("*")
        if coeff_s in ("q", "p") or coeff_s.startswith(("q^", "p^")):
            coeff_s, mono_s = "1", chunk
        m = parse_monomial(mono_s) if star or mono_s else Monomial()
        key = (m.eq2, m.ep2)
        out[key] = out.get(key, Fraction(0)) + Fraction(coeff_s)
    return out


def _eval_poly(d, Qv, Pv) -> complex:
    return sum(float(c) * (Qv**i) * (Pv**j) for (i, j), c in d.items())


ZERO = ParamElement(0, 0, BACKEND.zero, BACKEND.one, _canonical=True)
ONE = ParamElement(0, 0, BACKEND.one, BACKEND.one, _canonical=True)
Q = ParamElement(2, 0, BACKEND.one, BACKEND.one, _canonical=True)
P = ParamElement(0, 2, BACKEND.one, BACKEND.one, _canonical=True)


@dataclass(frozen=True)
class NumericContext:
    """Concrete specialization ``q = q_val``, ``p = q_val**beta_val``."""

    q_val: float
    beta_val: float
    budget: int = 80

    def __post_init__(self) -> None:
        if not 0.0 < self.q_val < 1.0:
            raise ValueError("q_val must lie strictly between 0 and 1")
        if self.budget < 1:
            raise ValueError("product budget must be positive")

    @property
    def p_val(self) -> float:
        return self.q_val**self.beta_val

    def monomial(self, m: Monomial) -> float:
        return m.evaluate(self.q_val, self.p_val)


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def pe_arith(a: ParamElement, b: ParamElement, op: str) -> ParamElement:
    """Field operation by name; raises :class:`FieldError` on division by zero."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}") from None
    return fn(ParamElement.coerce(a), ParamElement.coerce(b))


def pe_pow_n(m: Monomial, n: int) -> Monomial:
    return m**n


def pe_eval(a: ParamElement, ctx: NumericContext) -> float:
    value = a.evaluate(ctx.q_val, ctx.p_val)
    return value.real if isinstance(value, complex) and value.imag == 0 else value

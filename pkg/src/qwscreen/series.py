"""Truncated Laurent series in ``x = w/z`` over Q(q, p).

Infinite products never appear as factor lists in exact mode: every
``(x | a, t)`` is produced from its closed-form logarithm

    log (x | a, t) = - sum_{m >= 1} a^m x^m / (m (1 - t^m))

so a coefficient at degree ``N`` costs ``O(N^2)`` field operations.  Numeric
evaluation of products (including outside ``|x| < 1``) goes through
:class:`ProductForm`, which keeps the factors and evaluates them with the
kernels from :mod:`qwscreen.numeric`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import numeric
from .field import ONE, ZERO, Monomial, NumericContext, ParamElement

__all__ = [
    "SeriesError",
    "TruncSeries",
    "QProductSpec",
    "ProductForm",
    "series_mul_inv",
    "series_exp_log",
    "pole_zero_series",
    "qpochhammer_series",
    "theta_eval_numeric",
    "series_from_kernel",
    "product_form_of_kernel",
]


class SeriesError(ValueError):
    """Precondition failure for a series operation."""


@dataclass(frozen=True)
class TruncSeries:
    """``sum_{k=min_degree}^{order} coeffs[k - min_degree] x^k``; higher terms unknown."""

    coeffs: tuple[ParamElement, ...]
    order: int
    min_degree: int = 0

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.order - self.min_degree + 1:
            raise SeriesError("coefficient count does not match the degree window")

    @classmethod
    def from_list(cls, coeffs: Sequence, order: int, min_degree: int = 0) -> "TruncSeries":
        cs = [ParamElement.coerce(c) for c in coeffs]
        width = order - min_degree + 1
        cs = (cs + [ZERO] * width)[:width]
        return cls(tuple(cs), order, min_degree)

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls.from_list([ONE], order)

    def __getitem__(self, k: int) -> ParamElement:
        if k > self.order:
            raise IndexError(f"degree {k} beyond truncation order {self.order}")
        if k < self.min_degree:
            return ZERO
        return self.coeffs[k - self.min_degree]

    def truncate(self, order: int) -> "TruncSeries":
        order = min(order, self.order)
        return TruncSeries(self.coeffs[: order - self.min_degree + 1], order, self.min_degree)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        return series_mul_inv(self, other, "mul")

    def inverse(self) -> "TruncSeries":
        return series_mul_inv(self, None, "inv")

    def exp(self) -> "TruncSeries":
        return series_exp_log(self, "exp")

    def log(self) -> "TruncSeries":
        return series_exp_log(self, "log")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        top = min(self.order, other.order)
        lo = min(self.min_degree, other.min_degree)
        return all(self[k] == other[k] for k in range(lo, top + 1))

    def __hash__(self) -> int:
        return hash((self.order, self.min_degree, self.coeffs))

    def scale_argument(self, c: ParamElement) -> "TruncSeries":
        """Series of ``f(c x)``."""
        c = ParamElement.coerce(c)
        return TruncSeries(
            tuple(self[k] * c**k for k in range(self.min_degree, self.order + 1)),
            self.order,
            self.min_degree,
        )

    def to_json(self) -> list[dict]:
        return [
            {"k": k, "c": str(self[k])} for k in range(self.min_degree, self.order + 1)
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: list[dict]) -> "TruncSeries":
        ks = [d["k"] for d in data]
        lo, hi = min(ks), max(ks)
        by_k = {d["k"]: ParamElement.parse(d["c"]) for d in data}
        return cls(tuple(by_k.get(k, ZERO) for k in range(lo, hi + 1)), hi, lo)

    def evaluate(self, x: complex, ctx: NumericContext) -> complex:
        """Numeric value of the truncated polynomial (no tail estimate)."""
        vals = [complex(self[k].evaluate(ctx.q_val, ctx.p_val)) for k in range(self.min_degree, self.order + 1)]
        return numeric.horner(vals, complex(x)) * complex(x) ** self.min_degree


def series_mul_inv(a: TruncSeries, b: TruncSeries | None, op: str) -> TruncSeries:
    """Truncated product (``op="mul"``) or reciprocal (``op="inv"``)."""
    if op == "mul":
        if b is None:
            raise SeriesError("multiplication needs two series")
        lo = a.min_degree + b.min_degree
        order = min(a.order + b.min_degree, b.order + a.min_degree)
        out = []
        for k in range(lo, order + 1):
            acc = ZERO
            for i in range(a.min_degree, k - b.min_degree + 1):
                ai = a[i]
                if ai.is_zero():
                    continue
                bj = b[k - i]
                if not bj.is_zero():
                    acc = acc + ai * bj
            out.append(acc)
        return TruncSeries(tuple(out), order, lo)
    if op == "inv":
        lead = a[a.min_degree]
        if lead.is_zero():
            raise SeriesError("lowest coefficient is not a unit")
        m = a.min_degree
        order = a.order - 2 * m
        width = a.order - m
        inv0 = lead.inverse()
        out = [inv0]
        for k in range(1, width + 1):
            acc = ZERO
            for i in range(1, k + 1):
                ai = a[m + i]
                if not ai.is_zero():
                    acc = acc + ai * out[k - i]
            out.append(-acc * inv0)
        return TruncSeries(tuple(out), order, -m)
    raise SeriesError(f"unknown series operation {op!r}")


def series_exp_log(a: TruncSeries, op: str) -> TruncSeries:
    """Formal exp / log through the recurrence ``f' = g' f``."""
    N = a.order
    if op == "exp":
        if a.min_degree < 1 and any(not a[k].is_zero() for k in range(a.min_degree, 1)):
            raise SeriesError("exp needs a series without constant or negative terms")
        g = [ZERO] + [a[k] * k for k in range(1, N + 1)]  # k g_k
        f = [ONE]
        for n in range(1, N + 1):
            acc = ZERO
            for k in range(1, n + 1):
                if not g[k].is_zero() and not f[n - k].is_zero():
                    acc = acc + g[k] * f[n - k]
            f.append(acc / n if not acc.is_zero() else ZERO)
        return TruncSeries(tuple(f), N, 0)
    if op == "log":
        if a.min_degree < 0 and any(not a[k].is_zero() for k in range(a.min_degree, 0)):
            raise SeriesError("log needs a power series")
        if not a[0].is_one():
            raise SeriesError("log needs constant term 1")
        kg = [ZERO] * (N + 1)  # k g_k
        for n in range(1, N + 1):
            acc = a[n] * n
            for k in range(1, n):
                if not kg[k].is_zero() and not a[n - k].is_zero():
                    acc = acc - kg[k] * a[n - k]
            kg[n] = acc
        return TruncSeries(tuple([ZERO] + [kg[k] / k for k in range(1, N + 1)]), N, 0)
    raise SeriesError(f"unknown series operation {op!r}")


def pole_zero_series(u: Monomial, v: Monomial, N: int) -> TruncSeries:
    """Expansion of ``(1 - u x)/(1 - v x)``: coefficient ``v^k - u v^(k-1)`` at ``k >= 1``."""
    U, V = u.to_pe(), v.to_pe()
    out = [ONE]
    for k in range(1, N + 1):
        out.append(V**k - U * V ** (k - 1))
    return TruncSeries(tuple(out), N, 0)


def series_from_kernel(kernel: ParamElement, N: int) -> TruncSeries:
    """``exp(sum_{n=1..N} K(n)/n x^n)`` where ``K`` is a mode form in ``(q^n, p^n)``."""
    if N < 1:
        raise SeriesError("truncation order must be at least 1")
    logs = [ZERO] + [kernel.inflate(n) / n for n in range(1, N + 1)]
    return series_exp_log(TruncSeries(tuple(logs), N, 0), "exp")


@dataclass(frozen=True)
class QProductSpec:
    """``(x | a, t) = prod_{n>=0} (1 - a t^n x)``; ``a=None`` is the empty product."""

    a: Monomial | None
    t: Monomial

    def log_coefficient(self, m: int) -> ParamElement:
        if self.a is None:
            return ZERO
        if self.t.is_identity():
            raise SeriesError("degenerate ratio t = 1 in q-Pochhammer symbol")
        A, T = self.a.to_pe(), self.t.to_pe()
        return -(A**m) / ((1 - T**m) * m)


def qpochhammer_series(spec: QProductSpec, N: int) -> TruncSeries:
    logs = [ZERO] + [spec.log_coefficient(m) for m in range(1, N + 1)]
    return series_exp_log(TruncSeries(tuple(logs), N, 0), "exp")


def theta_eval_numeric(t: Monomial, arg: complex, ctx: NumericContext) -> complex:
    """``theta_t(x) = (x; t)(t/x; t)`` with ``ctx.budget`` factors in each product."""
    tv = ctx.monomial(t)
    if abs(tv) >= 1:
        raise SeriesError(f"theta ratio |t| = {abs(tv)} does not converge")
    return numeric.theta(complex(arg), complex(tv), ctx.budget)


@dataclass(frozen=True)
class ProductForm:
    """``prod (x | u, t)^k``; entries with ``t=None`` stand for ``(1 - u x)^k``."""

    factors: tuple[tuple[Monomial, Monomial | None, int], ...] = field(default_factory=tuple)

    def __mul__(self, other: "ProductForm") -> "ProductForm":
        return ProductForm(self.factors + other.factors)

    def inverse(self) -> "ProductForm":
        return ProductForm(tuple((u, t, -k) for u, t, k in self.factors))

    def evaluate(self, x: complex, ctx: NumericContext) -> complex:
        facs = []
        for u, t, k in self.factors:
            tv = 0.0 if t is None else ctx.monomial(t)
            if t is not None and abs(tv) >= 1:
                raise SeriesError("product ratio outside the unit disc")
            facs.append((complex(ctx.monomial(u)), complex(tv), k))
        return numeric.product_form(complex(x), facs, ctx.budget)

    def series(self, N: int) -> TruncSeries:
        """Exact expansion of the product to order ``N``."""
        logs = [ZERO] * (N + 1)
        for u, t, k in self.factors:
            U = u.to_pe()
            for m in range(1, N + 1):
                if t is None:
                    c = -(U**m) / m
                else:
                    c = QProductSpec(u, t).log_coefficient(m)
                logs[m] = logs[m] + c * k
        return series_exp_log(TruncSeries(tuple(logs), N, 0), "exp")


def product_form_of_kernel(kernel: ParamElement, ctx: NumericContext | None = None) -> ProductForm | None:
    """Factor ``exp(sum K(n)/n x^n)`` into q-Pochhammer symbols when possible.

    ``kernel`` is a mode form: a rational function of ``(q^n, p^n)``.  Two
    shapes are recognized: a signed sum of monomials with integer coefficients
    (a finite product of linear factors), and such a sum divided by
    ``c m (1 -/+ t)`` for monomials ``m``, ``t``.  With ``ctx`` the ratio is
    oriented so that ``|t| < 1`` at that specialization.
    """
    den = kernel.denominator_terms()
    num = kernel.numerator_terms()
    if len(den) == 1:
        (m0, c0), = den
        factors = []
        for m, c in num:
            k = -c / c0
            if k.denominator != 1:
                return None
            factors.append((m / m0, None, int(k)))
        return ProductForm(tuple(_merge(factors)))
    if len(den) != 2:
        return None
    (m0, c0), (m1, c1) = den
    sign = c1 / c0
    if sign not in (Fraction(1), Fraction(-1)):
        return None
    # den = c0 m0 (1 + sign t)
    t = m1 / m0
    terms = [(m / m0, c / c0) for m, c in num]
    if _needs_flip(t, ctx):
        # 1/(1 + s t) = s t^-1 / (1 + s t^-1)
        terms = [(m / t, c * sign) for m, c in terms]
        t = t.inverse()
    if sign == 1:
        # 1/(1 + t) = (1 - t)/(1 - t^2)
        terms = terms + [(m * t, -c) for m, c in terms]
        t = t * t
    factors = []
    for m, c in terms:
        if c.denominator != 1:
            return None
        factors.append((m, t, -int(c)))
    return ProductForm(tuple(_merge(factors)))


def _needs_flip(t: Monomial, ctx: NumericContext | None) -> bool:
    if ctx is not None:
        return abs(ctx.monomial(t)) >= 1
    # without a specialization assume 0 < q < 1 and beta > 0
    total = t.e_q + t.e_p
    return total < 0 or (total == 0 and t.e_q < 0)


def _merge(factors):
    acc: dict = {}
    for u, t, k in factors:
        acc[(u, t)] = acc.get((u, t), 0) + k
    return [(u, t, k) for (u, t), k in sorted(acc.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))) if k]

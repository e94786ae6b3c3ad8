"""Vertex operators over a rank-r Heisenberg algebra with parameterized pairing.

Conventions
-----------
* Oscillators satisfy ``[a_i[n], a_j[-n]] = A_ij(n)/n`` and
  ``[a_i[0], Q_j] = B0_ij``.  ``A_ij(-n) = A_ji(n)`` follows from antisymmetry.
* A vertex operator is

      V(z) = g e^{gamma.Q} z^{e.a[0]} q^{ell.a[0]} :exp(sum_{m != 0} c_l(m) a_l[m] z^{-m}):

  with the exponentials of ``Q`` kept left of every ``a[0]`` factor.
* Mode laws are *mode forms*: a rational function of ``(X, Y) = (q^n, p^n)``
  for ``n > 0`` (``pos``) and one for the law at ``-n`` (``neg``).  Evaluating
  at ``n`` is the ring map ``q -> q^n, p -> p^n``.  Two mode forms agree for
  every ``n >= 1`` exactly when they agree as rational functions, so
  all-``n`` identities are decided symbolically and spot-checked per ``n``.
* Zero-mode exponents ``ell``, ``e`` and ``B0`` live in Q(beta) where
  ``beta = log_q p``; they are sympy expressions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import sympy

from .field import ONE, ZERO, FieldError, Monomial, ParamElement
from .series import ProductForm, TruncSeries, product_form_of_kernel, series_from_kernel

__all__ = [
    "BETA",
    "ModeLaw",
    "ZERO_LAW",
    "HeisenbergSpec",
    "VertexOp",
    "Contraction",
    "OperatorSum",
    "PoleZero",
    "CheckResult",
    "CommutantReport",
    "log_q",
    "q_power",
    "mode_law_eval",
    "contract",
    "vo_shift",
    "vo_normal_product",
    "vo_inverse",
    "trivial_operator",
    "screen_commutant_check",
    "exchange_ratio",
    "pair_ratio",
    "ExchangeEntry",
    "ExchangeReport",
    "pole_zero_of_kernel",
    "residue_coefficient",
    "model_json",
    "ModelError",
]

BETA = sympy.Symbol("beta")


class ModelError(ValueError):
    """Structural failure in an operator computation."""


def log_q(m: Monomial) -> sympy.Expr:
    """Exponent ``a + b*beta`` with ``m = q^a p^b``."""
    return sympy.Rational(m.eq2, 2) + sympy.Rational(m.ep2, 2) * BETA


def q_power(expr: sympy.Expr) -> Monomial | None:
    """Monomial ``q^expr`` when ``expr`` is affine in beta with half-integer coefficients."""
    expr = sympy.cancel(sympy.sympify(expr))
    if not expr.is_polynomial(BETA):
        return None
    poly = sympy.Poly(expr, BETA)
    if poly.degree() > 1:
        return None
    b = poly.coeff_monomial(BETA)
    a = poly.coeff_monomial(1)
    try:
        return Monomial.of(Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)))
    except (FieldError, AttributeError):
        return None


def _sym_equal(a: sympy.Expr, b: sympy.Expr) -> bool:
    return sympy.cancel(sympy.sympify(a) - sympy.sympify(b)) == 0


def _sym_str(e: sympy.Expr) -> str:
    return str(sympy.cancel(sympy.sympify(e)))


@dataclass(frozen=True)
class ModeLaw:
    """``c(n) = pos(q^n, p^n)`` for ``n > 0`` and ``c(-n) = neg(q^n, p^n)``."""

    pos: ParamElement = ZERO
    neg: ParamElement = ZERO

    def eval(self, n: int) -> ParamElement:
        return mode_law_eval(self, n)

    def __add__(self, other: "ModeLaw") -> "ModeLaw":
        return ModeLaw(self.pos + other.pos, self.neg + other.neg)

    def __neg__(self) -> "ModeLaw":
        return ModeLaw(-self.pos, -self.neg)

    def __sub__(self, other: "ModeLaw") -> "ModeLaw":
        return self + (-other)

    def scale(self, c: ParamElement) -> "ModeLaw":
        """Multiply the law by a constant (independent of ``n``)."""
        return ModeLaw(self.pos * c, self.neg * c)

    def is_zero(self) -> bool:
        return self.pos.is_zero() and self.neg.is_zero()

    def to_json(self) -> dict:
        return {"pos": str(self.pos), "neg": str(self.neg)}

    @classmethod
    def from_json(cls, d: dict) -> "ModeLaw":
        return cls(ParamElement.parse(d["pos"]), ParamElement.parse(d["neg"]))


ZERO_LAW = ModeLaw()


def mode_law_eval(law: ModeLaw, n: int) -> ParamElement:
    if n == 0:
        raise ModelError("zero modes are carried by the zero-mode data, not by mode laws")
    return law.pos.inflate(n) if n > 0 else law.neg.inflate(-n)


@dataclass(frozen=True)
class HeisenbergSpec:
    """Pairing data ``A_ij(n)`` (``n > 0`` mode forms) and zero-mode pairing ``B0``."""

    rank: int
    pairing: tuple[tuple[ParamElement, ...], ...]
    zero_pairing: tuple[tuple[sympy.Expr, ...], ...]

    def __post_init__(self) -> None:
        if len(self.pairing) != self.rank or any(len(r) != self.rank for r in self.pairing):
            raise ModelError("pairing matrix has the wrong shape")
        for i in range(self.rank):
            if not self.pairing[i][i].is_one():
                raise ModelError("diagonal pairing must be the constant 1")

    def A(self, i: int, j: int, n: int) -> ParamElement:
        """``A_ij(n)`` for any nonzero ``n`` using ``A_ij(-n) = A_ji(n)``."""
        if n > 0:
            return self.pairing[i][j].inflate(n)
        return self.pairing[j][i].inflate(-n)

    def check_bracket_symmetry(self, N: int) -> bool:
        """``A_ji(-n)/(-n) == -A_ij(n)/n`` for ``n = 1..N``."""
        for n in range(1, N + 1):
            for i in range(self.rank):
                for j in range(self.rank):
                    if self.A(j, i, -n) / (-n) != -(self.A(i, j, n) / n):
                        return False
        return True

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "pairing": [[str(a) for a in row] for row in self.pairing],
            "zero_pairing": [[_sym_str(b) for b in row] for row in self.zero_pairing],
        }

    @classmethod
    def from_json(cls, d: dict) -> "HeisenbergSpec":
        return cls(
            d["rank"],
            tuple(tuple(ParamElement.parse(a) for a in row) for row in d["pairing"]),
            tuple(tuple(sympy.sympify(b, locals={"beta": BETA}) for b in row) for row in d["zero_pairing"]),
        )


@dataclass(frozen=True)
class VertexOp:
    """A normal-ordered exponential with zero-mode and charge data."""

    name: str
    prefactor: ParamElement
    charges: tuple[int, ...]
    zflags: tuple[sympy.Expr, ...]
    zero_modes: tuple[sympy.Expr, ...]
    laws: tuple[ModeLaw, ...]

    @property
    def rank(self) -> int:
        return len(self.laws)

    def renamed(self, name: str) -> "VertexOp":
        return replace(self, name=name)

    def with_prefactor(self, g: ParamElement) -> "VertexOp":
        return replace(self, prefactor=g)

    def same_operator(self, other: "VertexOp", ignore_prefactor: bool = True) -> bool:
        """Equality of laws, charges and zero-mode data (prefactor optional)."""
        if self.charges != other.charges or self.rank != other.rank:
            return False
        if not ignore_prefactor and self.prefactor != other.prefactor:
            return False
        if any(not _sym_equal(a, b) for a, b in zip(self.zflags, other.zflags)):
            return False
        if any(not _sym_equal(a, b) for a, b in zip(self.zero_modes, other.zero_modes)):
            return False
        return all(a == b for a, b in zip(self.laws, other.laws))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "prefactor": str(self.prefactor),
            "charges": list(self.charges),
            "zflags": [_sym_str(e) for e in self.zflags],
            "zero_modes": [_sym_str(e) for e in self.zero_modes],
            "laws": [law.to_json() for law in self.laws],
        }

    @classmethod
    def from_json(cls, d: dict) -> "VertexOp":
        sym = lambda s: sympy.sympify(s, locals={"beta": BETA})  # noqa: E731
        return cls(
            d["name"],
            ParamElement.parse(d["prefactor"]),
            tuple(d["charges"]),
            tuple(sym(s) for s in d["zflags"]),
            tuple(sym(s) for s in d["zero_modes"]),
            tuple(ModeLaw.from_json(x) for x in d["laws"]),
        )


def trivial_operator(rank: int, name: str = "1") -> VertexOp:
    zero = sympy.Integer(0)
    return VertexOp(name, ONE, (0,) * rank, (zero,) * rank, (zero,) * rank, (ZERO_LAW,) * rank)


@dataclass(frozen=True)
class OperatorSum:
    summands: tuple[VertexOp, ...]

    def __post_init__(self) -> None:
        if not self.summands:
            raise ModelError("an operator sum needs at least one summand")

    def __iter__(self):
        return iter(self.summands)

    def __len__(self) -> int:
        return len(self.summands)

    def __getitem__(self, i: int) -> VertexOp:
        return self.summands[i]


# ---------------------------------------------------------------------------
# contraction


@dataclass(frozen=True)
class Contraction:
    """``V1(z) V2(w) = constant * z^z_exponent * series(w/z) * :V1(z) V2(w):``.

    ``kernel`` is the mode form of ``n K(n) = sum_ij c1_i(n) A_ij(n) c2_j(-n)``.
    The series is computed lazily.
    """

    kernel: ParamElement
    const_exponent: sympy.Expr
    z_exponent: sympy.Expr
    order: int
    w_exponent: sympy.Expr = sympy.Integer(0)

    @property
    def constant(self) -> ParamElement | None:
        m = q_power(self.const_exponent)
        return None if m is None else m.to_pe()

    @cached_property
    def series(self) -> TruncSeries:
        return series_from_kernel(self.kernel, self.order)

    def log_coefficient(self, n: int) -> ParamElement:
        """``K(n)``, the coefficient of ``x^n`` in the log of the series."""
        return self.kernel.inflate(n) / n

    def product_form(self, ctx=None) -> ProductForm | None:
        return product_form_of_kernel(self.kernel, ctx)


def contract(V1: VertexOp, V2: VertexOp, spec: HeisenbergSpec, N: int) -> Contraction:
    if N < 1:
        raise ModelError("truncation order must be at least 1")
    kernel = ZERO
    for i in range(spec.rank):
        c1 = V1.laws[i].pos
        if c1.is_zero():
            continue
        for j in range(spec.rank):
            c2 = V2.laws[j].neg
            if c2.is_zero():
                continue
            kernel = kernel + c1 * spec.pairing[i][j] * c2
    const = sympy.Integer(0)
    zexp = sympy.Integer(0)
    for l in range(spec.rank):
        for j in range(spec.rank):
            if V2.charges[j] == 0:
                continue
            b = spec.zero_pairing[l][j] * V2.charges[j]
            const += V1.zero_modes[l] * b
            zexp += V1.zflags[l] * b
    return Contraction(kernel, sympy.cancel(const), sympy.cancel(zexp), N)


def vo_shift(V: VertexOp, c: Monomial) -> VertexOp:
    """``V(c z)``: ``c(m) -> c(m) c^{-m}`` and ``ell += e log_q c``."""
    if c.is_identity():
        return V
    C = c.to_pe()
    laws = tuple(ModeLaw(law.pos / C, law.neg * C) for law in V.laws)
    lc = log_q(c)
    zero_modes = tuple(sympy.cancel(ell + e * lc) for ell, e in zip(V.zero_modes, V.zflags))
    return replace(V, laws=laws, zero_modes=zero_modes)


def vo_normal_product(V1: VertexOp, c: Monomial, V2: VertexOp, name: str | None = None) -> VertexOp:
    """The single operator ``:V1(z) V2(c z):``."""
    W = vo_shift(V2, c)
    return VertexOp(
        name or f":{V1.name}{W.name}:",
        V1.prefactor * W.prefactor,
        tuple(a + b for a, b in zip(V1.charges, W.charges)),
        tuple(sympy.cancel(a + b) for a, b in zip(V1.zflags, W.zflags)),
        tuple(sympy.cancel(a + b) for a, b in zip(V1.zero_modes, W.zero_modes)),
        tuple(a + b for a, b in zip(V1.laws, W.laws)),
    )


def vo_inverse(V: VertexOp) -> VertexOp:
    if V.prefactor.is_zero():
        raise ModelError("cannot invert an operator with zero prefactor")
    return VertexOp(
        f"{V.name}^-1",
        V.prefactor.inverse(),
        tuple(-c for c in V.charges),
        tuple(-e for e in V.zflags),
        tuple(-e for e in V.zero_modes),
        tuple(-law for law in V.laws),
    )


# ---------------------------------------------------------------------------
# commutant check


@dataclass(frozen=True)
class PoleZero:
    """Contraction ``C (1 - u x)/(1 - v x)``; ``trivial`` when ``u == v``."""

    u: Monomial
    v: Monomial
    trivial: bool = False


def pole_zero_of_kernel(kernel: ParamElement) -> PoleZero | None:
    """Recognize ``n K(n) = v^n - u^n``; ``None`` if the kernel has another shape."""
    if kernel.is_zero():
        return PoleZero(Monomial(), Monomial(), trivial=True)
    if kernel.denominator_terms() != [(Monomial(), Fraction(1))]:
        return None
    terms = kernel.numerator_terms()
    if len(terms) != 2:
        return None
    plus = [m for m, c in terms if c == 1]
    minus = [m for m, c in terms if c == -1]
    if len(plus) != 1 or len(minus) != 1:
        return None
    return PoleZero(minus[0], plus[0])


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    order: int = 0


@dataclass
class CommutantReport:
    screen: str
    checks: list[CheckResult] = field(default_factory=list)
    pole_zero: list[PoleZero | None] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def residue_coefficient(g: ParamElement, C: ParamElement, pz: PoleZero, measure_power: int = 0) -> ParamElement:
    """Scalar multiplying ``:Lambda(z) S(z/v):`` in the residue of ``oint S(w) w^-k dw``.

    With ``measure_power = k`` the coefficient is ``g C (1 - u/v) v^(k-1)``
    (an overall ``-z^(1-k)`` common to every summand is dropped).
    """
    U, V = pz.u.to_pe(), pz.v.to_pe()
    return g * C * (1 - U / V) * V ** (measure_power - 1)


def screen_commutant_check(
    l: OperatorSum,
    S: VertexOp,
    spec: HeisenbergSpec,
    N: int,
    measure_power: int = 0,
) -> CommutantReport:
    """Decide whether ``oint S(w) w^-measure_power dw`` commutes with ``l(z)``.

    For each summand the left and right correlations with ``S`` must be of
    one-pole/one-zero shape and describe the same rational function (a).  The
    non-trivial summands must then telescope: their residue operators
    ``:Lambda_i(z) S(z/v_i):`` coincide (b) and the residue scalars sum to
    zero (c).  Mode-law identities are decided as rational functions of
    ``(q^n, p^n)`` and confirmed at each ``n = 1..N``.
    """
    report = CommutantReport(S.name)
    chain: list[tuple[int, PoleZero, ParamElement]] = []
    for idx, Lam in enumerate(l):
        left = contract(Lam, S, spec, N)
        right = contract(S, Lam, spec, N)
        pz = pole_zero_of_kernel(left.kernel)
        report.pole_zero.append(pz)
        if pz is None:
            raise ModelError(
                f"correlation of {Lam.name} with {S.name} is not of one-pole/one-zero form"
            )
        CL, CR = left.constant, right.constant
        if CL is None or CR is None:
            report.checks.append(
                CheckResult(f"{S.name}/{Lam.name}/a-constant", False, "symbolic constant not a monomial", N)
            )
            continue
        U, V = pz.u.to_pe(), pz.v.to_pe()
        mirror = V.inverse() - U.inverse()
        ok_kernel = right.kernel == mirror and all(
            right.kernel.inflate(n) == mirror.inflate(n) for n in range(1, N + 1)
        )
        ok_const = (CL * U / V).is_one() and CR.is_one() and _sym_equal(right.z_exponent, left.z_exponent)
        report.checks.append(
            CheckResult(
                f"{S.name}/{Lam.name}/a-left-right",
                ok_kernel and ok_const,
                f"u={pz.u} v={pz.v} C_left={CL} C_right={CR}",
                N,
            )
        )
        if not pz.trivial:
            chain.append((idx, pz, CL))
    if len(chain) == 0:
        report.checks.append(CheckResult(f"{S.name}/telescoping", True, "no residues", N))
        return report
    if len(chain) == 1:
        idx, pz, CL = chain[0]
        report.checks.append(
            CheckResult(f"{S.name}/c-prefactor", False, f"unbalanced residue from {l[idx].name}", N)
        )
        return report
    residues = [vo_normal_product(l[idx], pz.v.inverse(), S) for idx, pz, _ in chain]
    for (ia, _, _), (ib, _, _), Ra, Rb in zip(chain, chain[1:], residues, residues[1:]):
        tag = f"{S.name}/{l[ia].name}~{l[ib].name}"
        bad_n = _first_law_mismatch(Ra, Rb, N)
        structural = Ra.same_operator(Rb)
        report.checks.append(
            CheckResult(
                f"{tag}/b-residue-operator",
                structural and bad_n is None,
                "identical" if structural and bad_n is None else f"first mismatch at n={bad_n}",
                N,
            )
        )
    total = ZERO
    for idx, pz, CL in chain:
        total = total + residue_coefficient(l[idx].prefactor, CL, pz, measure_power)
    report.checks.append(
        CheckResult(f"{S.name}/c-prefactor", total.is_zero(), f"residue sum = {total}", N)
    )
    return report


def _first_law_mismatch(A: VertexOp, B: VertexOp, N: int) -> int | None:
    for n in range(1, N + 1):
        for la, lb in zip(A.laws, B.laws):
            if la.eval(n) != lb.eval(n) or la.eval(-n) != lb.eval(-n):
                return n
    if A.charges != B.charges or any(not _sym_equal(a, b) for a, b in zip(A.zero_modes, B.zero_modes)):
        return 0
    return None


# ---------------------------------------------------------------------------
# exchange ratio


@dataclass
class ExchangeEntry:
    i: int
    j: int
    forward: Contraction  # Lambda_i(z) Lambda_j(w), variable w/z
    backward: Contraction  # Lambda_j(w) Lambda_i(z), variable z/w


@dataclass
class ExchangeReport:
    entries: list[ExchangeEntry]
    samples: list[dict] = field(default_factory=list)


def exchange_ratio(
    l: OperatorSum,
    spec: HeisenbergSpec,
    N: int,
    samples: Sequence = (),
    target=None,
) -> ExchangeReport:
    """Pairwise contractions plus numeric ratios ``F_ij(x)/F_ji(1/x)``.

    ``samples`` are ``(NumericContext, x)`` pairs.  For every pair the ratio of
    the forward contraction at ``x`` to the backward one at ``1/x`` is
    evaluated through the q-Pochhammer product form of the kernel; the sample
    record lists all ratios and, with ``target(ctx, x)``, the target value.
    """
    entries = []
    for i, Li in enumerate(l):
        for j, Lj in enumerate(l):
            entries.append(ExchangeEntry(i, j, contract(Li, Lj, spec, N), contract(Lj, Li, spec, N)))
    report = ExchangeReport(entries)
    for ctx, x in samples:
        ratios = {}
        for e in entries:
            ratios[(e.i, e.j)] = pair_ratio(e, ctx, x)
        rec = {"q": ctx.q_val, "beta": ctx.beta_val, "x": complex(x), "ratios": ratios}
        if target is not None:
            rec["target"] = target(ctx, x)
        report.samples.append(rec)
    return report


def pair_ratio(entry: ExchangeEntry, ctx, x: complex, reference: Contraction | None = None) -> complex:
    """``F_ij(x) / F_ji(1/x)`` including the scalar constants of both orderings."""
    fwd = _numeric_contraction(entry.forward, ctx, x, reference)
    bwd = _numeric_contraction(entry.backward, ctx, 1 / complex(x), reference)
    return fwd / bwd


def _numeric_contraction(c: Contraction, ctx, x: complex, reference: Contraction | None) -> complex:
    const = c.constant
    if const is None:
        raise ModelError("contraction constant is not a monomial; cannot evaluate numerically")
    scale = complex(const.evaluate(ctx.q_val, ctx.p_val))
    pf = c.product_form(ctx)
    if pf is None and reference is not None:
        corr = product_form_of_kernel(c.kernel - reference.kernel, ctx)
        base = reference.product_form(ctx)
        if corr is not None and base is not None:
            pf = base * corr
    if pf is None:
        raise ModelError("kernel has no recognized q-Pochhammer product form")
    return scale * pf.evaluate(x, ctx)


def model_json(spec: HeisenbergSpec, ops: Iterable[VertexOp], constants: dict[str, ParamElement], **extra) -> str:
    doc = {
        "heisenberg": spec.to_json(),
        "operators": [op.to_json() for op in ops],
        "constants": {k: str(v) for k, v in sorted(constants.items())},
    }
    doc.update(extra)
    return json.dumps(doc, indent=1, sort_keys=True)

"""Truncated Fock modules and matrix coefficients of vertex operators.

Basis vectors are multi-partitions: one partition per field, the part ``k``
standing for a creation mode ``a_i[-k]``.  Creation modes commute, so a
multi-partition names the vector ``prod a_i[-k] v_mu`` and the coefficient of
it in a state is a linear functional; that functional is the dual basis used
for matrix coefficients.

A vertex operator acts as ``g e^{gamma Q} z^{e.a[0]} q^{ell.a[0]} E-(z) E+(z)``.
The sector (eigenvalue vector of ``a[0]``) moves by ``B0 gamma``.  States above
the level cutoff are dropped, and a coefficient is reported only when every
intermediate level it passes through is within the cutoff, so reported
coefficients are exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Sequence

import sympy

from .field import ONE, ZERO, ParamElement
from .voa import HeisenbergSpec, OperatorSum, VertexOp, q_power

__all__ = [
    "FockError",
    "FockModule",
    "FockState",
    "GradedOperatorBlock",
    "MatrixCoefficients",
    "apply_mode",
    "apply_vertex",
    "vo_matrix_blocks",
    "product_matrix_coeff",
    "residue_commutator_check",
    "ResidueReport",
    "vacuum",
]

Basis = tuple[tuple[int, ...], ...]


class FockError(ValueError):
    """Level overflow, sector mismatch or a non-integral exponent."""


def _level(b: Basis) -> int:
    return sum(sum(part) for part in b)


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int | None = None) -> tuple[tuple[int, ...], ...]:
    largest = n if largest is None else largest
    if n == 0:
        return ((),)
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            out.append((k, *rest))
    return tuple(out)


@dataclass(frozen=True)
class FockModule:
    """Fock module over ``spec`` with level cutoff and sector ``mu``."""

    spec: HeisenbergSpec
    cutoff: int = 4
    mu: tuple[sympy.Expr, ...] | None = None

    def __post_init__(self) -> None:
        if self.cutoff < 0:
            raise FockError("level cutoff must be non-negative")
        if self.mu is None:
            object.__setattr__(self, "mu", (sympy.Integer(0),) * self.spec.rank)

    @property
    def rank(self) -> int:
        return self.spec.rank

    def basis(self, level: int) -> list[Basis]:
        """Multi-partitions of total size ``level`` in a fixed order."""
        out: list[Basis] = []
        for split in _compositions(level, self.rank):
            for parts in iproduct(*(_partitions(k) for k in split)):
                out.append(tuple(parts))
        return out

    def all_basis(self) -> list[Basis]:
        return [b for lv in range(self.cutoff + 1) for b in self.basis(lv)]

    def shifted(self, sector: Sequence[sympy.Expr], charges: Sequence[int]) -> tuple[sympy.Expr, ...]:
        return tuple(
            sympy.cancel(sector[l] + sum(self.spec.zero_pairing[l][j] * charges[j] for j in range(self.rank)))
            for l in range(self.rank)
        )


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for k in range(n + 1):
        for rest in _compositions(n - k, parts - 1):
            yield (k, *rest)


@dataclass
class FockState:
    """Finite linear combination of basis multi-partitions."""

    terms: dict[Basis, ParamElement] = field(default_factory=dict)

    def add(self, b: Basis, c: ParamElement) -> None:
        if c.is_zero():
            return
        new = self.terms.get(b, ZERO) + c
        if new.is_zero():
            self.terms.pop(b, None)
        else:
            self.terms[b] = new

    def __add__(self, other: "FockState") -> "FockState":
        out = FockState(dict(self.terms))
        for b, c in other.terms.items():
            out.add(b, c)
        return out

    def scale(self, c: ParamElement) -> "FockState":
        if c.is_zero():
            return FockState()
        return FockState({b: v * c for b, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def levels(self) -> set[int]:
        return {_level(b) for b in self.terms}

    def coefficient(self, b: Basis) -> ParamElement:
        return self.terms.get(b, ZERO)

    def pair(self, bra: "FockState") -> ParamElement:
        """Dual pairing: ``sum bra_b * self_b``."""
        acc = ZERO
        for b, c in bra.terms.items():
            if b in self.terms:
                acc = acc + c * self.terms[b]
        return acc

    @classmethod
    def basis_vector(cls, b: Basis) -> "FockState":
        return cls({b: ONE})


def vacuum(rank: int) -> FockState:
    return FockState.basis_vector(((),) * rank)


def _add_part(b: Basis, i: int, k: int) -> Basis:
    parts = tuple(sorted((*b[i], k), reverse=True))
    return (*b[:i], parts, *b[i + 1 :])


def _remove_part(b: Basis, j: int, k: int) -> Basis:
    parts = list(b[j])
    parts.remove(k)
    return (*b[:j], tuple(parts), *b[j + 1 :])


def apply_mode(M: FockModule, i: int, n: int, s: FockState, truncate: bool = False) -> FockState:
    """``a_i[n] s``: creation for ``n < 0``, Leibniz rule for ``n > 0``.

    With ``truncate`` creation beyond the cutoff is dropped instead of raising.
    """
    if n == 0:
        raise FockError("zero modes act through the sector, not as oscillators")
    out = FockState()
    if n < 0:
        for b, c in s.terms.items():
            if _level(b) - n > M.cutoff:
                if truncate:
                    continue
                raise FockError(f"creation a_{i}[{n}] exceeds level cutoff {M.cutoff}")
            out.add(_add_part(b, i, -n), c)
        return out
    for j in range(M.rank):
        bracket = M.spec.A(i, j, n) / n
        if bracket.is_zero():
            continue
        for b, c in s.terms.items():
            mult = b[j].count(n)
            if mult:
                out.add(_remove_part(b, j, n), c * bracket * mult)
    return out


def _exp_mode(M: FockModule, i: int, n: int, coeff: ParamElement, graded: dict[int, FockState], step: int) -> dict[int, FockState]:
    """Apply ``exp(coeff a_i[n] z^step)`` to a z-graded state."""
    if coeff.is_zero():
        return graded
    out: dict[int, FockState] = {}
    for zoff, st in graded.items():
        term = st
        k = 0
        power_coeff = ONE
        while not term.is_zero():
            if k:
                term = apply_mode(M, i, n, term, truncate=True)
                if term.is_zero():
                    break
                power_coeff = power_coeff * coeff / k
            key = zoff + k * step
            out[key] = out.get(key, FockState()) + term.scale(power_coeff)
            k += 1
    return {k: v for k, v in out.items() if not v.is_zero()}


@dataclass
class Applied:
    """``V(z) |ket>`` graded by the oscillator z-power offset."""

    graded: dict[int, FockState]
    z_base: sympy.Expr
    sector: tuple[sympy.Expr, ...]


def apply_vertex(V: VertexOp, M: FockModule, ket: FockState, sector: Sequence[sympy.Expr]) -> Applied:
    """Act with ``V(z)`` on ``ket`` in ``sector``; zero-mode factors are included."""
    levels = ket.levels() or {0}
    top = max(levels)
    graded = {0: ket}
    for i, law in enumerate(V.laws):
        for n in range(1, top + 1):
            graded = _exp_mode(M, i, n, law.eval(n), graded, -n)
    for i, law in enumerate(V.laws):
        for n in range(1, M.cutoff + 1):
            graded = _exp_mode(M, i, -n, law.eval(-n), graded, n)
    q_exp = sum((ell * mu for ell, mu in zip(V.zero_modes, sector)), sympy.Integer(0))
    factor_m = q_power(q_exp)
    if factor_m is None:
        raise FockError(f"zero-mode factor q^({q_exp}) is not a monomial in this sector")
    factor = V.prefactor * factor_m.to_pe()
    z_base = sympy.cancel(sum((e * mu for e, mu in zip(V.zflags, sector)), sympy.Integer(0)))
    graded = {k: v.scale(factor) for k, v in graded.items()}
    return Applied(graded, z_base, M.shifted(sector, V.charges))


@dataclass
class GradedOperatorBlock:
    """Matrix blocks keyed by ``(bra level, ket level)``; z-power is ``z_base + bra - ket``."""

    z_base: sympy.Expr
    blocks: dict[tuple[int, int], dict[tuple[Basis, Basis], ParamElement]]

    def z_power(self, bra_level: int, ket_level: int) -> sympy.Expr:
        return sympy.cancel(self.z_base + bra_level - ket_level)

    def entry(self, bra: Basis, ket: Basis) -> ParamElement:
        return self.blocks.get((_level(bra), _level(ket)), {}).get((bra, ket), ZERO)


def vo_matrix_blocks(V: VertexOp, M: FockModule, sector: Sequence[sympy.Expr] | None = None) -> GradedOperatorBlock:
    sector = tuple(M.mu if sector is None else sector)
    blocks: dict[tuple[int, int], dict[tuple[Basis, Basis], ParamElement]] = {}
    z_base = None
    for ket in M.all_basis():
        res = apply_vertex(V, M, FockState.basis_vector(ket), sector)
        z_base = res.z_base
        k_level = _level(ket)
        for zoff, st in res.graded.items():
            for bra, c in st.terms.items():
                b_level = _level(bra)
                if b_level - k_level != zoff:
                    raise FockError("z-power bookkeeping violated")
                blocks.setdefault((b_level, k_level), {})[(bra, ket)] = c
    return GradedOperatorBlock(z_base if z_base is not None else sympy.Integer(0), blocks)


@dataclass
class MatrixCoefficients:
    """Exact Laurent coefficients of ``<bra, V_1(x_1) ... V_k(x_k) ket>``.

    ``powers`` maps integer offsets to values; the full exponent of ``x_i`` is
    ``base[i] + offset[i]``.  Only offsets whose intermediate levels all lie in
    ``[0, cutoff]`` are present, including exact zeros.
    """

    variables: tuple[str, ...]
    base: tuple[sympy.Expr, ...]
    powers: dict[tuple[int, ...], ParamElement]

    def get(self, offsets: tuple[int, ...]) -> ParamElement | None:
        return self.powers.get(offsets)

    def dumps(self) -> str:
        rows = [
            {"powers": [str(sympy.cancel(b + o)) for b, o in zip(self.base, k)], "value": str(v)}
            for k, v in sorted(self.powers.items())
        ]
        return json.dumps(rows, indent=1, sort_keys=True)


def _apply_linear(V: VertexOp, M: FockModule, st: FockState, sector, cache: dict | None) -> Applied:
    """``apply_vertex`` by linearity over basis vectors, memoized in ``cache``."""
    if cache is None:
        return apply_vertex(V, M, st, sector)
    graded: dict[int, FockState] = {}
    z_base, new_sector = None, None
    for b, c in st.terms.items():
        key = (id(V), b, tuple(sector))
        if key not in cache:
            cache[key] = (V, apply_vertex(V, M, FockState.basis_vector(b), sector))
        res = cache[key][1]
        z_base, new_sector = res.z_base, res.sector
        for zoff, piece in res.graded.items():
            graded[zoff] = graded.get(zoff, FockState()) + piece.scale(c)
    if z_base is None:
        return apply_vertex(V, M, FockState(), sector)
    return Applied(graded, z_base, new_sector)


def _single_level(s: FockState, what: str) -> int:
    lv = s.levels() or {0}
    if len(lv) != 1:
        raise FockError(f"{what} must be homogeneous in level")
    return lv.pop()


def product_matrix_coeff(
    ops: Sequence[tuple[VertexOp, str]],
    M: FockModule,
    bra: FockState,
    ket: FockState,
    sector: Sequence[sympy.Expr] | None = None,
    bra_sector: Sequence[sympy.Expr] | None = None,
    cache: dict | None = None,
) -> MatrixCoefficients:
    """Coefficients of ``<bra, V_1(x_1) ... V_k(x_k) ket>`` (rightmost acts first)."""
    sector = tuple(M.mu if sector is None else sector)
    ket_level = _single_level(ket, "ket")
    bra_level = _single_level(bra, "bra")
    # keyed by offsets of the operators applied so far (rightmost first)
    current: dict[tuple[int, ...], FockState] = {(): ket}
    bases: list[sympy.Expr] = []
    for V, _ in reversed(ops):
        nxt: dict[tuple[int, ...], FockState] = {}
        z_base = None
        new_sector = None
        for key, st in current.items():
            res = _apply_linear(V, M, st, sector, cache)
            z_base, new_sector = res.z_base, res.sector
            for zoff, piece in res.graded.items():
                nxt[(zoff, *key)] = nxt.get((zoff, *key), FockState()) + piece
        if z_base is None:
            z_base = sympy.Integer(0)
            new_sector = M.shifted(sector, V.charges)
        bases.insert(0, z_base)
        sector = new_sector
        current = nxt
    if bra_sector is not None and any(sympy.cancel(a - b) != 0 for a, b in zip(sector, bra_sector)):
        raise FockError(f"charge shift maps the ket sector to {sector}, not the bra sector {bra_sector}")
    valid = _valid_offsets(len(ops), ket_level, bra_level, M.cutoff)
    powers: dict[tuple[int, ...], ParamElement] = {}
    for key in valid:
        st = current.get(key)
        powers[key] = ZERO if st is None else st.pair(bra)
    return MatrixCoefficients(tuple(v for _, v in ops), tuple(bases), powers)


def _valid_offsets(k: int, ket_level: int, bra_level: int, cutoff: int) -> list[tuple[int, ...]]:
    """Offsets (leftmost first) whose partial levels stay in ``[0, cutoff]``."""
    out = []

    def walk(level: int, remaining: int, acc: tuple[int, ...]) -> None:
        if remaining == 1:
            out.append((bra_level - level, *acc))
            return
        for nxt in range(cutoff + 1):
            walk(nxt, remaining - 1, (nxt - level, *acc))

    if k == 0:
        return [()]
    walk(ket_level, k, ())
    return sorted(out)


# ---------------------------------------------------------------------------
# residue commutator check


@dataclass
class ResidueReport:
    passed: bool
    checked: int
    nonzero: list[tuple[str, str, str]]
    sector: tuple[str, ...]


def residue_commutator_check(
    l: OperatorSum,
    S: VertexOp,
    M: FockModule,
    states: Iterable[tuple[FockState, FockState]] | None = None,
    measure_power: int = 0,
) -> ResidueReport:
    """``<bra, [l(z), oint S(w) w^-measure_power dw] ket> = 0`` at every z-power within cutoff.

    The ``w`` exponent of every term must be an integer in the chosen sector;
    otherwise the contour integral is not single valued and this raises.
    """
    sector = tuple(M.mu)
    if states is None:
        vac = vacuum(M.rank)
        states = [(FockState.basis_vector(b), vac) for b in M.all_basis()] + [
            (vac, FockState.basis_vector(b)) for b in M.all_basis() if _level(b) > 0
        ]
    target = measure_power - 1  # coefficient of w^target is the residue
    nonzero = []
    checked = 0
    cache: dict = {}
    for bra, ket in states:
        if not _residue_levels_ok(l, S, M, bra, ket, sector, target):
            continue
        totals: dict[sympy.Expr, ParamElement] = {}
        for Lam in l:
            for order in ("lS", "Sl"):
                ops = [(Lam, "z"), (S, "w")] if order == "lS" else [(S, "w"), (Lam, "z")]
                mc = product_matrix_coeff(ops, M, bra, ket, sector, cache=cache)
                zi = 0 if order == "lS" else 1
                wi = 1 - zi
                w_base = mc.base[wi]
                if not _is_integer(w_base):
                    raise FockError(f"w exponent {w_base} is not an integer in sector {sector}")
                sign = ONE if order == "lS" else -ONE
                for offs, val in mc.powers.items():
                    if sympy.cancel(w_base + offs[wi] - target) != 0:
                        continue
                    zp = sympy.cancel(mc.base[zi] + offs[zi])
                    totals[zp] = totals.get(zp, ZERO) + sign * val
        for zp, val in sorted(totals.items(), key=lambda kv: str(kv[0])):
            checked += 1
            if not val.is_zero():
                nonzero.append((_label(bra), str(zp), str(val)))
    return ResidueReport(not nonzero, checked, nonzero, tuple(str(m) for m in sector))


def _residue_levels_ok(l, S, M, bra, ket, sector, target) -> bool:
    """Both orderings need an intermediate level inside ``[0, cutoff]`` or a provably empty one."""
    w_first = sympy.cancel(sum((e * mu for e, mu in zip(S.zflags, sector)), sympy.Integer(0)))
    if not _is_integer(w_first):
        raise FockError(f"w exponent {w_first} is not an integer in sector {sector}")
    ket_level = _single_level(ket, "ket")
    bra_level = _single_level(bra, "bra")
    for Lam in l:
        w_after = sympy.cancel(sum((e * mu for e, mu in zip(S.zflags, M.shifted(sector, Lam.charges))), sympy.Integer(0)))
        if not _is_integer(w_after):
            raise FockError(f"w exponent {w_after} is not an integer in sector {sector}")
        m_ls = ket_level + target - int(w_first)
        m_sl = bra_level - target + int(w_after)
        if m_ls > M.cutoff or m_sl > M.cutoff:
            return False
    return True


def _is_integer(e: sympy.Expr) -> bool:
    e = sympy.cancel(e)
    return e.is_Integer or (e.is_number and sympy.Integer(e) == e)


def _label(s: FockState) -> str:
    return ";".join(str(b) for b in sorted(s.terms))

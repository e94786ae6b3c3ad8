import json

import pytest
import sympy

from qwscreen.field import ONE, P, Q, ZERO
from qwscreen.fock import (
    FockError,
    FockModule,
    FockState,
    apply_mode,
    product_matrix_coeff,
    residue_commutator_check,
    vacuum,
    vo_matrix_blocks,
)
from qwscreen.solver import SOLVERS, solve_one_boson
from qwscreen.suites import fock_oracle_checks
from qwscreen.voa import BETA, HeisenbergSpec, OperatorSum, contract, trivial_operator

RANK1 = HeisenbergSpec(1, ((ONE,),), ((2 * BETA,),))
RANK2 = HeisenbergSpec(2, ((ONE, Q), (P, ONE)), ((sympy.Integer(2), sympy.Integer(-1)), (sympy.Integer(-1), sympy.Integer(2))))


@pytest.fixture(scope="module")
def virasoro():
    return solve_one_boson(8)


def test_basis_sizes():
    M = FockModule(RANK1, 4)
    assert [len(M.basis(k)) for k in range(5)] == [1, 1, 2, 3, 5]
    M2 = FockModule(RANK2, 3)
    assert [len(M2.basis(k)) for k in range(4)] == [1, 2, 5, 10]


def test_annihilator_kills_vacuum():
    M = FockModule(RANK1, 4)
    for n in range(1, 4):
        assert apply_mode(M, 0, n, vacuum(1)).is_zero()


def test_bracket_on_vacuum():
    M = FockModule(RANK1, 4)
    st = apply_mode(M, 0, 1, apply_mode(M, 0, -1, vacuum(1)))
    assert st.terms == vacuum(1).terms


def test_leibniz_with_cross_pairing():
    # a_1[2] a_2[-2]^2 v = 2 (1/2) A_12(2) a_2[-2] v
    M = FockModule(RANK2, 4)
    v = vacuum(2)
    st = apply_mode(M, 1, -2, apply_mode(M, 1, -2, v))
    out = apply_mode(M, 0, 2, st)
    assert out.terms == {((), (2,)): Q * Q}


def test_level_overflow_raises():
    M = FockModule(RANK1, 1)
    with pytest.raises(FockError):
        apply_mode(M, 0, -2, vacuum(1))
    with pytest.raises(FockError):
        apply_mode(M, 0, 0, vacuum(1))


def test_vacuum_block_and_first_order(virasoro):
    L2 = virasoro.l[1]
    M = FockModule(virasoro.spec, 2)
    blocks = vo_matrix_blocks(L2, M)
    vac = ((),)
    assert blocks.entry(vac, vac) == L2.prefactor
    assert blocks.z_power(0, 0) == 0
    # <a[-1] v, V v> = g c(-1) A(1), dual pairing is coefficient extraction
    assert blocks.entry(((1,),), vac) == L2.prefactor * L2.laws[0].eval(-1)
    assert blocks.z_power(1, 0) == 1


def test_trivial_operator_is_identity():
    M = FockModule(RANK2, 2)
    blocks = vo_matrix_blocks(trivial_operator(2), M)
    for b in M.all_basis():
        for c in M.all_basis():
            assert blocks.entry(b, c) == (ONE if b == c else ZERO)


def test_single_operator_matches_blocks(virasoro):
    S = virasoro.screens[0]
    M = FockModule(virasoro.spec, 3)
    blocks = vo_matrix_blocks(S, M)
    ket = FockState.basis_vector(((2,),))
    bra = FockState.basis_vector(((1,),))
    mc = product_matrix_coeff([(S, "z")], M, bra, ket)
    assert mc.get((-1,)) == blocks.entry(((1,),), ((2,),))


def test_vacuum_coefficients_equal_contraction_series(virasoro):
    M = FockModule(virasoro.spec, 4)
    vac = vacuum(1)
    L1, S = virasoro.l[0], virasoro.screens[0]
    mc = product_matrix_coeff([(L1, "z"), (S, "w")], M, vac, vac)
    c = contract(L1, S, virasoro.spec, 8)
    scale = L1.prefactor * S.prefactor * c.constant
    for k in range(5):
        assert mc.get((-k, k)) == scale * c.series[k]


@pytest.mark.parametrize("kind", sorted(SOLVERS))
def test_oracle_every_model(kind):
    model = SOLVERS[kind](N=6)
    level = 4 if model.spec.rank == 1 else 3
    (check,) = fock_oracle_checks(model, level, 6)
    assert check.status == "pass", check.detail


def test_sector_mismatch_raises(virasoro):
    M = FockModule(virasoro.spec, 2)
    with pytest.raises(FockError):
        product_matrix_coeff([(virasoro.screens[0], "z")], M, vacuum(1), vacuum(1), bra_sector=(sympy.Integer(0),))


def test_residue_check_passes_and_single_summand_fails(virasoro):
    M = FockModule(virasoro.spec, 3)
    assert residue_commutator_check(virasoro.l, virasoro.screens[0], M).passed
    assert not residue_commutator_check(OperatorSum((virasoro.l[0],)), virasoro.screens[0], M).passed


def test_residue_check_fermion_family():
    model = SOLVERS["fermion-family"](N=6)
    M = FockModule(model.spec, 3)
    assert residue_commutator_check(model.l, model.screens[0], M).passed


def test_non_integral_sector_is_rejected(virasoro):
    M = FockModule(virasoro.spec, 2, (sympy.Rational(1, 2),))
    with pytest.raises(FockError, match="not an integer"):
        residue_commutator_check(virasoro.l, virasoro.screens[0], M)


def test_dump_format(virasoro):
    M = FockModule(virasoro.spec, 2)
    mc = product_matrix_coeff([(virasoro.l[0], "z"), (virasoro.screens[0], "w")], M, vacuum(1), vacuum(1))
    rows = json.loads(mc.dumps())
    assert set(rows[0]) == {"powers", "value"}
    assert len(rows[0]["powers"]) == 2

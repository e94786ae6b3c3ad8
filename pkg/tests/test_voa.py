import json

import pytest
import sympy

from qwscreen.field import ONE, P, Q, ZERO, Monomial
from qwscreen.series import pole_zero_series
from qwscreen.solver import make_screen, mono, solve_one_boson, virasoro_screen_law
from qwscreen.voa import (
    BETA,
    HeisenbergSpec,
    ModeLaw,
    ModelError,
    OperatorSum,
    VertexOp,
    contract,
    log_q,
    pole_zero_of_kernel,
    q_power,
    screen_commutant_check,
    trivial_operator,
    vo_inverse,
    vo_normal_product,
    vo_shift,
)


@pytest.fixture(scope="module")
def model():
    return solve_one_boson(8)


def test_heisenberg_spec_validation():
    with pytest.raises(ModelError):
        HeisenbergSpec(1, ((Q,),), ((BETA,),))
    spec = HeisenbergSpec(2, ((ONE, Q), (P, ONE)), ((2, 1), (1, 2)))
    assert spec.A(0, 1, 2) == Q * Q
    assert spec.A(0, 1, -2) == P * P
    assert spec.check_bracket_symmetry(5)
    assert HeisenbergSpec.from_json(spec.to_json()) == spec


def test_q_power_and_log_q():
    assert q_power(1 + 2 * BETA) == Monomial.of(1, 2)
    assert q_power(BETA**2) is None
    assert log_q(Monomial.of(1, -1)) == 1 - BETA


def test_mode_law_json_and_zero_mode():
    law = virasoro_screen_law()
    assert ModeLaw.from_json(law.to_json()) == law
    with pytest.raises(ModelError):
        law.eval(0)
    assert law.eval(-2) == law.neg.inflate(2)


def test_trivial_pair_contracts_to_one(model):
    one = trivial_operator(1)
    c = contract(one, model.screens[0], model.spec, 6)
    assert c.kernel.is_zero() and c.constant.is_one()
    assert all(c.series[k].is_zero() for k in range(1, 7))


def test_lambda_screen_contraction_is_pole_zero(model):
    c = contract(model.l[0], model.screens[0], model.spec, 10)
    pz = pole_zero_of_kernel(c.kernel)
    assert (pz.u, pz.v) == (mono(), mono(0, -1))
    assert c.series == pole_zero_series(pz.u, pz.v, 10)


def test_normal_product_with_inverse_is_trivial(model):
    L1 = model.l[0]
    prod = vo_normal_product(L1, Monomial(), vo_inverse(L1))
    assert prod.same_operator(trivial_operator(1), ignore_prefactor=False)


def test_shift_composition(model):
    S = model.screens[0]
    a, b = mono(1, 0), mono(0, 1)
    assert vo_shift(vo_shift(S, a), b).same_operator(vo_shift(S, a * b))


def test_vertex_json_roundtrip(model):
    L2 = model.l[1]
    back = VertexOp.from_json(json.loads(json.dumps(L2.to_json())))
    assert back.same_operator(L2, ignore_prefactor=False)


def test_commutant_passes_and_single_summand_fails(model):
    S = model.screens[0]
    assert screen_commutant_check(model.l, S, model.spec, 12).passed
    rep = screen_commutant_check(OperatorSum((model.l[0],)), S, model.spec, 12)
    assert not rep.passed
    assert rep.failures()[0].name.endswith("c-prefactor")


def test_wrong_prefactor_fails_only_residue_sum(model):
    S = model.screens[0]
    bad = OperatorSum((model.l[0], model.l[1].with_prefactor(model.l[1].prefactor * Q)))
    rep = screen_commutant_check(bad, S, model.spec, 8)
    assert [c.name.split("/")[-1] for c in rep.failures()] == ["c-prefactor"]


def test_non_pole_zero_kernel_is_an_error(model):
    spec = model.spec
    weird = make_screen("W", 0, 1, ModeLaw(ONE, Q + P + ONE))
    with pytest.raises(ModelError):
        screen_commutant_check(model.l, weird, spec, 4)


def test_operator_sum_requires_summands():
    with pytest.raises(ModelError):
        OperatorSum(())


def test_zero_mode_exponent_symbolic(model):
    c = contract(model.l[1], model.screens[0], model.spec, 2)
    assert sympy.simplify(c.const_exponent - log_q(mono(0, 1))) == 0
    assert ZERO.is_zero()

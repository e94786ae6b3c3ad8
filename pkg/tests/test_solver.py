"""Solved constants are frozen from independent hand derivations of the pole/zero chains."""

from fractions import Fraction

import pytest

from qwscreen.field import ONE, P, Q, FieldError, Monomial
from qwscreen.solver import (
    SOLVERS,
    branch_feasible,
    boson_screen_law,
    lambda33_two_routes,
    lambda_pair_product,
    mono,
    next_zero,
    partner_zero,
    self_kernel,
    solve_boson_fermion,
    solve_one_boson,
    solve_one_fermion,
    solve_two_boson,
    solve_two_fermion,
    virasoro_screen_law,
)
from qwscreen.voa import ModelError

half = Fraction(1, 2)


@pytest.fixture(scope="module")
def models():
    return {k: f(N=12) for k, f in SOLVERS.items()}


def test_every_model_commutes(models):
    for kind, model in models.items():
        assert model.passes(12), kind


def test_asserted_comparisons_hold(models):
    for kind, model in models.items():
        for c in model.comparisons:
            if c.asserted:
                assert c.agrees, (kind, c.name)


def test_one_boson_constants(models):
    c = models["q-virasoro"].constants
    assert c["P"] == Q / P
    assert c["p2"] == ONE / P
    assert c["p'1"] == Q / (P * P)
    assert c["p'2"] == Q / P
    assert c["g2"] == Q / P


def test_fermion_family_constants(models):
    c = models["fermion-family"].constants
    # (p1, p2) = (1, p): second summand (1, p q), g2 = -q (p - 1)/(p q - 1)
    assert c["p'1"] == ONE and c["p'2"] == P * Q
    assert c["g2"] == -Q * (P - 1) / (P * Q - 1)


def test_sl3_constants(models):
    c = models["sl3"].constants
    assert c["q'2"] == mono(0, Fraction(3, 2)).to_pe()
    assert c["q1"] == mono(-1, Fraction(5, 2)).to_pe()
    assert c["q2"] == mono(-1, Fraction(3, 2)).to_pe()
    assert c["q'1"] == mono(0, half).to_pe()
    assert c["g3"] == Q * Q / (P * P)


def test_boson_fermion_zero_matches(models):
    c = models["sl21-boson-fermion"].constants
    assert c["q'1"] == c["q1"]


def test_two_fermion_relations(models):
    model = models["sl21-two-fermion"]
    c = model.constants
    assert c["q2"] == c["q1"] / c["P"]
    assert model.spec.zero_pairing[0][1] == model.spec.zero_pairing[1][0]


def test_next_zero_matches_virasoro_chain():
    law = virasoro_screen_law()
    Pm = mono(1, -1)
    assert next_zero(mono(), Pm / mono(1, 0), Pm, self_kernel(law)) == mono(1, -2)


def test_partner_zero_infeasible_branch():
    chain = (mono(), mono(0, -1), mono(1, -2), mono(1, -1))
    q2p = mono(0, Fraction(3, 2))
    assert not branch_feasible(chain, boson_screen_law(), q2p, mono(-1, 0))
    assert branch_feasible(chain, boson_screen_law(), q2p, mono(1, 0))
    assert partner_zero(mono(1, -2), mono(0, -1), mono(1, -1), q2p / mono(1, 0), q2p) is not None


@pytest.mark.parametrize("name", ["P", "p1", "p'1", "g2"])
def test_one_boson_perturbations_fail(name):
    assert not solve_one_boson(8, perturb=name).passes(8)


def test_fermion_family_requires_distinct_pole_zero():
    with pytest.raises(ModelError):
        solve_one_fermion(mono(), mono(), 4)


def test_fermion_family_other_parameters():
    model = solve_one_fermion(mono(0, 1), mono(1, 2), 8)
    assert model.passes(8)
    assert next(c for c in model.comparisons if c.name == "structural second summand").agrees


def test_unknown_perturbation_is_an_error():
    with pytest.raises(ModelError):
        solve_two_boson(N=4, perturb="nope")


def test_singular_perturbation_raises_field_error():
    with pytest.raises(FieldError):
        solve_two_boson(N=4, perturb="p2")


def test_q2p_override_keeps_commutant():
    q2p = mono(1, half)
    for solve in (solve_two_boson, solve_boson_fermion, solve_two_fermion):
        assert solve(q2p, N=8).passes(8)


def test_lambda33_routes_and_difference(models):
    model = models["sl21-boson-fermion"]
    a, b = lambda33_two_routes(model)
    assert a == b
    diff = lambda_pair_product(model, 2, 2) - lambda_pair_product(model, 0, 0)
    assert diff == P / Q + Q / P - P - ONE / P


def test_model_json_is_stable(models):
    for model in models.values():
        assert model.to_json() == model.to_json()
        assert isinstance(model.constants_table(), str)
    assert isinstance(Monomial(), Monomial)

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qwscreen.field import ONE, P, Q, ZERO, Monomial, NumericContext, ParamElement
from qwscreen.series import (
    ProductForm,
    QProductSpec,
    SeriesError,
    TruncSeries,
    pole_zero_series,
    product_form_of_kernel,
    qpochhammer_series,
    series_from_kernel,
    theta_eval_numeric,
)

qs, ps, xs = sympy.symbols("qs ps xs")
m = Monomial.of


def to_sympy(pe: ParamElement):
    f = lambda ts: sum(sympy.Rational(c.numerator, c.denominator) * qs ** sympy.Rational(t.eq2, 2) * ps ** sympy.Rational(t.ep2, 2) for t, c in ts)  # noqa: E731
    return f(pe.numerator_terms()) / f(pe.denominator_terms())


def sympy_coeffs(expr, N):
    poly = sympy.series(expr, xs, 0, N + 1).removeO()
    return [sympy.cancel(poly.coeff(xs, k)) for k in range(N + 1)]


def assert_series_matches(series: TruncSeries, expected):
    for k, e in enumerate(expected):
        assert sympy.cancel(to_sympy(series[k]) - e) == 0, k


small = st.integers(min_value=-2, max_value=2)
monos = st.builds(Monomial, small, small)
consts = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def unit_series(draw, order=5):
    coeffs = [ONE] + [draw(consts) * draw(monos).to_pe() for _ in range(order)]
    return TruncSeries.from_list(coeffs, order)


@settings(max_examples=25, deadline=None)
@given(unit_series(), unit_series())
def test_mul_inverse_roundtrip(a, b):
    assert (a * b) * b.inverse() == a
    assert (a * a.inverse()) == TruncSeries.one(5)


@settings(max_examples=20, deadline=None)
@given(unit_series())
def test_exp_log_roundtrip(a):
    assert a.log().exp() == a


def test_pole_zero_series_against_sympy():
    u, v = m(1, -2), m(1, -1)
    expected = sympy_coeffs((1 - qs * ps**-2 * xs) / (1 - qs * ps**-1 * xs), 6)
    assert_series_matches(pole_zero_series(u, v, 6), expected)


def test_qpochhammer_against_euler_expansion():
    # Euler: coefficient of x^k in (x | a, q) is (-a)^k q^(k(k-1)/2) / ((1-q)...(1-q^k))
    a, N = m(0, 1), 6
    got = qpochhammer_series(QProductSpec(a, m(1, 0)), N)
    for k in range(N + 1):
        expected = (-ps) ** k * qs ** (k * (k - 1) // 2) / sympy.prod([1 - qs**j for j in range(1, k + 1)])
        assert sympy.cancel(to_sympy(got[k]) - expected) == 0


def test_series_from_kernel_matches_log():
    kernel = (Q - P) / (1 - Q)
    s = series_from_kernel(kernel, 6)
    logs = s.log()
    for n in range(1, 7):
        assert logs[n] == kernel.inflate(n) / n


def test_product_form_recovers_kernel():
    kernel = (Q * Q / (P * P) - Q * Q / P) / (1 - Q)
    pf = product_form_of_kernel(kernel)
    assert pf is not None
    assert pf.series(6) == series_from_kernel(kernel, 6)
    ctx = NumericContext(0.3, 0.4)
    x = 0.2
    assert pf.evaluate(x, ctx) == pytest.approx(series_from_kernel(kernel, 30).evaluate(x, ctx), rel=1e-10)


def test_product_form_polynomial_kernel():
    kernel = P - ONE / Q
    pf = product_form_of_kernel(kernel)
    assert pf == ProductForm(tuple(sorted([(m(-1, 0), None, 1), (m(0, 1), None, -1)], key=lambda f: str(f[0]))))


def test_json_roundtrip():
    s = series_from_kernel((Q - P) / (1 - Q), 4)
    assert TruncSeries.from_json(s.to_json()) == s


def test_scale_argument():
    s = pole_zero_series(m(0, 0), m(1, 0), 4)
    assert s.scale_argument(P)[3] == s[3] * P**3


def test_preconditions():
    with pytest.raises(SeriesError):
        TruncSeries.from_list([ZERO, ONE], 3).inverse()
    with pytest.raises(SeriesError):
        series_from_kernel(Q, 0)
    with pytest.raises(SeriesError):
        QProductSpec(m(1, 0), Monomial()).log_coefficient(1)
    with pytest.raises(SeriesError):
        theta_eval_numeric(m(-1, 0), 0.5, NumericContext(0.3, 0.4))
    with pytest.raises(IndexError):
        pole_zero_series(m(0, 0), m(1, 0), 2)[3]


def test_theta_numeric_value():
    ctx = NumericContext(0.5, 0.0)
    # theta_q(-1) with q=1/2 against a direct product
    direct = 1.0
    for n in range(200):
        direct *= (1 + 0.5**n) * (1 + 0.5 ** (n + 1))
    assert theta_eval_numeric(m(1, 0), -1.0, NumericContext(0.5, 0.0, budget=200)).real == pytest.approx(direct)
    assert ctx.p_val == 1.0
    assert Fraction(1) == 1

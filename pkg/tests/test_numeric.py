import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwscreen import _numkern_py
from qwscreen.numeric import load_kernels

compiled = load_kernels("compiled")
needs_compiled = pytest.mark.skipif(compiled is _numkern_py, reason="Cython kernel not built")

unit = st.complex_numbers(max_magnitude=0.9, allow_nan=False, allow_infinity=False)


@needs_compiled
@settings(max_examples=50, deadline=None)
@given(unit, unit, st.floats(min_value=0.05, max_value=0.8))
def test_compiled_matches_pure(x, a, t):
    assert compiled.qpoch(x, a, t, 60) == pytest.approx(_numkern_py.qpoch(x, a, t, 60), rel=1e-12, abs=1e-14)
    if abs(x) > 0.1:
        assert compiled.theta(x, t, 60) == pytest.approx(_numkern_py.theta(x, t, 60), rel=1e-12)


def test_theta_quasi_periodicity():
    # theta_t(t x) = -x^-1 theta_t(x)
    t, x = 0.3, 0.7 + 0.1j
    lhs = _numkern_py.theta(t * x, t, 200)
    assert lhs == pytest.approx(-_numkern_py.theta(x, t, 200) / x, rel=1e-12)


def test_qpoch_euler_identity():
    # (x; t)_inf^-1 = sum x^k / (t; t)_k
    t, x = 0.4, 0.3
    lhs = 1 / _numkern_py.qpoch(x, 1.0, t, 200)
    rhs, den = 0.0, 1.0
    for k in range(80):
        rhs += x**k / den
        den *= 1 - t ** (k + 1)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    assert not cmath.isnan(lhs)


def test_product_form_signs():
    val = _numkern_py.product_form(0.5, [(2.0, 0.0, 1), (0.5, 0.0, -2)], 10)
    assert val == pytest.approx((1 - 1.0) * (1 - 0.25) ** -2)

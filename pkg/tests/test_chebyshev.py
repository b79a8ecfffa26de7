import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid_search.chebyshev import chebyshev_t, cosh_product_gap, inverse_t_fractional

# cosh(arcosh(1.76710)/3) at 40 digits; the 64-term Taylor series of cosh agrees to all digits
T_THIRD_176710 = 1.0771030969290571776
GAMMA_3_176710 = 0.92841623318242531053


def test_integer_order_inside():
    assert chebyshev_t(3, 0.5) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("L", [0, 1, 2, 7, 1001, 10**6])
def test_value_at_one(L):
    assert chebyshev_t(L, 1.0) == 1.0


def test_fractional_order_against_high_precision():
    assert chebyshev_t(1 / 3, 1.76710) == pytest.approx(T_THIRD_176710, rel=1e-14)


def test_negative_branch_parity():
    assert chebyshev_t(3, -2.0) == pytest.approx(-chebyshev_t(3, 2.0), rel=1e-14)
    assert chebyshev_t(4, -2.0) == pytest.approx(chebyshev_t(4, 2.0), rel=1e-14)
    # T_3(x) = 4x^3 - 3x
    assert chebyshev_t(3, -2.0) == pytest.approx(4 * (-8) - 3 * (-2), rel=1e-14)


def test_clamp_near_boundary():
    assert chebyshev_t(0.5, 1.0 - 5e-13) == 1.0
    assert chebyshev_t(5, -1.0 - 5e-13) == -1.0


@pytest.mark.parametrize("order,x", [(-1, 0.5), (0.5, 0.5), (1 / 3, -3.0)])
def test_domain_errors(order, x):
    with pytest.raises(ValueError):
        chebyshev_t(order, x)


def test_large_order_is_stable():
    # expanded coefficients would overflow long before this
    x = math.cos(math.pi / 7)
    assert chebyshev_t(10**6, x) == pytest.approx(math.cos(10**6 * math.pi / 7), abs=1e-8)


def test_inverse_fractional_examples():
    assert inverse_t_fractional(1, 2.0) == pytest.approx(0.5, rel=1e-15)
    assert inverse_t_fractional(3, 1.76710) == pytest.approx(GAMMA_3_176710, rel=1e-14)
    assert inverse_t_fractional(17, 1.0) == 1.0
    with pytest.raises(ValueError):
        inverse_t_fractional(3, 0.9)


@given(st.integers(1, 400), st.floats(1.0, 50.0))
def test_inverse_fractional_reciprocal(L, y):
    g = inverse_t_fractional(L, y)
    assert 0 < g <= 1
    assert abs(chebyshev_t(1 / L, y) * g - 1) < 1e-14


@given(st.integers(2, 200), st.floats(-1.0, 1.0))
def test_three_term_recurrence(L, x):
    lhs = chebyshev_t(L, x)
    rhs = 2 * x * chebyshev_t(L - 1, x) - chebyshev_t(L - 2, x)
    assert abs(lhs - rhs) < 1e-10


@given(st.integers(0, 500), st.floats(-1.0, 1.0))
def test_bounded_on_unit_interval(L, x):
    assert abs(chebyshev_t(L, x)) <= 1.0


@settings(max_examples=200)
@given(st.floats(0.05, 5.0), st.floats(0.05, 5.0), st.floats(1.0, 5.0))
def test_semigroup(a, b, x):
    inner = chebyshev_t(b, x)
    assert chebyshev_t(a, inner) == pytest.approx(chebyshev_t(a * b, x), rel=1e-10)


# composing the two loses ~L^2 ulps (the inner value sits near 1), so keep L moderate
@given(st.integers(1, 300), st.floats(1.0, 100.0))
def test_fractional_then_integer_is_identity(L, x):
    assert chebyshev_t(L, chebyshev_t(1 / L, x)) == pytest.approx(x, rel=1e-10)


@given(st.floats(1e-6, 50.0), st.floats(0.0, math.pi / 2))
def test_cosh_product_inequality(x, theta):
    assert cosh_product_gap(x, theta) >= -1e-12 * math.cosh(x)


def test_cosh_product_equality_at_zero_angle():
    for x in (0.1, 1.0, 10.0, 50.0):
        assert cosh_product_gap(x, 0.0) == pytest.approx(0.0, abs=1e-12 * math.cosh(x))

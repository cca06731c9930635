from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadlab.series import PowerSeries, compose_series

F_WLEI = PowerSeries([0, -1, 1, -1, Fraction(5, 6), Fraction(-37, 60)])


def test_compose_examples():
    neg = PowerSeries([0, -1, 0, 0])
    assert compose_series(neg, neg) == PowerSeries.x(3)
    assert compose_series(F_WLEI, F_WLEI) == PowerSeries([0, 1, 0, 0, 0, Fraction(7, 30)])
    assert F_WLEI(PowerSeries.x(5)) == F_WLEI


def test_inverse_of_geometric():
    # x/(1+x) and x/(1-x) are compositional inverses
    f = PowerSeries([0] + [(-1) ** (n - 1) for n in range(1, 8)])
    g = PowerSeries([0] + [1] * 7)
    assert f(g) == PowerSeries.x(7) == g(f)


def test_inner_constant_rejected():
    with pytest.raises(ValueError):
        F_WLEI.compose(PowerSeries([1, 1]))
    with pytest.raises(ValueError):
        PowerSeries([])


def test_truncation_to_common_order():
    short = PowerSeries([0, 1, 1])
    assert (F_WLEI + short).order == 2
    assert F_WLEI.compose(short).order == 2


def test_format():
    assert F_WLEI.format() == "-x + x^2 - x^3 + 5/6 x^4 - 37/60 x^5"
    assert PowerSeries([0, 0, 0]).format() == "0"
    assert str(PowerSeries([2, 0, Fraction(-1, 2)])) == "2 - 1/2 x^2"


def series(N=5, zero_constant=False):
    coeff = st.fractions(min_value=-4, max_value=4, max_denominator=5)
    head = st.just(Fraction(0)) if zero_constant else coeff
    return st.tuples(head, st.lists(coeff, min_size=N, max_size=N)).map(
        lambda t: PowerSeries([t[0], *t[1]]))


@settings(max_examples=100)
@given(series(zero_constant=True))
def test_identity_is_neutral(f):
    x = PowerSeries.x(5)
    assert f(x) == f and x(f) == f


@settings(max_examples=60, deadline=None)
@given(series(), series(zero_constant=True), series(zero_constant=True))
def test_composition_associative(f, g, h):
    assert f(g)(h) == f(g(h))


@settings(max_examples=60)
@given(series(), series(), series(zero_constant=True))
def test_composition_is_linear_in_outer(f, g, h):
    assert (f + g)(h) == f(h) + g(h)
    assert (3 * f)(h) == 3 * f(h)

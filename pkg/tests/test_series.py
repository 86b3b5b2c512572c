from fractions import Fraction
from math import factorial

import pytest

from rkttn.series import (MAX_SERIES_ORDER, exact_taylor_coeff, exact_terms, numerical_taylor_coeff,
                          numerical_terms, order_residual, residual_weights)
from rkttn.superconv import draw_samples
from rkttn.tableau_io import PolynomialMap

from oracles import tree_counts

SQUARE = PolynomialMap.from_terms(1, [[(1, (2,))]])
COUNTS = tree_counts(MAX_SERIES_ORDER)


def test_first_coefficient_is_field(generic2d, rk4):
    y = (Fraction(1, 2), Fraction(1, 3))
    assert exact_taylor_coeff(1, generic2d, y) == generic2d(y)
    assert numerical_taylor_coeff(1, rk4, generic2d, y) == generic2d(y)


@pytest.mark.parametrize("k", range(1, 8))
def test_square_flow_derivatives(k):
    q = Fraction(3, 7)
    assert exact_taylor_coeff(k, SQUARE, [q]) == (factorial(k) * q ** (k + 1),)


@pytest.mark.parametrize("k", range(1, 8))
def test_linear_flow_derivatives(k, linear):
    lam = [Fraction(x) for x in linear.params["lambda"]]
    y0 = (Fraction(5), Fraction(-2))
    assert exact_taylor_coeff(k, linear, y0) == tuple(l ** k * y for l, y in zip(lam, y0))


def test_euler_second_derivative_vanishes(euler, generic2d):
    assert numerical_taylor_coeff(2, euler, generic2d, [1, 2]) == (0, 0)
    assert exact_taylor_coeff(2, generic2d, [1, 2]) != (0, 0)


@pytest.mark.parametrize("k", range(1, 5))
def test_rk4_matches_through_order_four(k, rk4, generic2d, riccati):
    for f, y in ((generic2d, (Fraction(1, 2), Fraction(-1))), (riccati, (Fraction(2, 3),))):
        assert numerical_taylor_coeff(k, rk4, f, y) == exact_taylor_coeff(k, f, y)


def test_residual_is_difference(butcher6, generic2d):
    y = (Fraction(-1, 2), Fraction(2, 3))
    for j in range(1, 7):
        diff = tuple(a - b for a, b in zip(numerical_taylor_coeff(j, butcher6, generic2d, y),
                                           exact_taylor_coeff(j, generic2d, y)))
        assert order_residual(j, butcher6, generic2d, y) == diff


def test_residual_weights_vanish_below_classical_order(butcher6):
    for j in range(1, 5):
        assert all(w == 0 for _, w in residual_weights(j, butcher6))
    assert sum(1 for _, w in residual_weights(5, butcher6) if w) == 2


def test_butcher6_fifth_order_residual(butcher6, scalar_autonomized, generic2d):
    for y in draw_samples(scalar_autonomized, 10, 3):
        assert not any(order_residual(5, butcher6, scalar_autonomized, y))
    assert any(any(order_residual(5, butcher6, generic2d, y)) for y in draw_samples(generic2d, 5, 3))


@pytest.mark.parametrize("k", range(1, MAX_SERIES_ORDER + 1))
def test_term_counts(k, riccati, rk4):
    assert len(exact_terms(k, riccati, [1])) == COUNTS[k - 1]
    assert {t.side for t in numerical_terms(k, rk4, riccati, [1])} == {"numerical"}


def test_order_bounds(riccati):
    for k in (0, MAX_SERIES_ORDER + 1):
        with pytest.raises(ValueError):
            exact_terms(k, riccati, [1])

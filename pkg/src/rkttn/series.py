"""Taylor coefficients of the exact flow and of one Runge-Kutta step.

Coefficients are derivative values ``y^(k)(0)``, not divided by ``k!``::

    exact:      y^(k)   = sum_{|T|=k} alpha(T) T(f)(y0)
    numerical:  y1^(k)  = sum_{|T|=k} alpha(T) gamma(T) phi(T) T(f)(y0)
    residual:   r_k     = numerical - exact
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .elemdiff import elementary_differential
from .tableau_io import PolynomialMap, Tableau
from .trees import RootedTree, coefficients, trees_of_order
from .weights import phi

MAX_SERIES_ORDER = 9


@dataclass(frozen=True)
class SeriesTerm:
    tree: RootedTree
    weight: Fraction
    value: tuple[Fraction, ...]
    side: str  # "exact" or "numerical"


def _check_order(k: int) -> None:
    if not 1 <= k <= MAX_SERIES_ORDER:
        raise ValueError(f"order must be in 1..{MAX_SERIES_ORDER}, got {k}")


def _weighted_sum(terms, d: int) -> tuple[Fraction, ...]:
    acc = [Fraction(0)] * d
    for w, vec in terms:
        if w:
            for i, v in enumerate(vec):
                acc[i] += w * v
    return tuple(acc)


def exact_terms(k: int, f: PolynomialMap, y0: Sequence) -> list[SeriesTerm]:
    _check_order(k)
    return [SeriesTerm(t, Fraction(coefficients(t).alpha), elementary_differential(t, f, y0).value, "exact")
            for t in trees_of_order(k)]


def numerical_terms(k: int, tab: Tableau, f: PolynomialMap, y0: Sequence) -> list[SeriesTerm]:
    _check_order(k)
    out = []
    for t in trees_of_order(k):
        c = coefficients(t)
        out.append(SeriesTerm(t, c.alpha * c.gamma * phi(t, tab),
                              elementary_differential(t, f, y0).value, "numerical"))
    return out


def exact_taylor_coeff(k: int, f: PolynomialMap, y0: Sequence) -> tuple[Fraction, ...]:
    """k-th time derivative of the exact solution at the start point."""
    return _weighted_sum(((t.weight, t.value) for t in exact_terms(k, f, y0)), f.d)


def numerical_taylor_coeff(k: int, tab: Tableau, f: PolynomialMap, y0: Sequence) -> tuple[Fraction, ...]:
    """k-th derivative in ``h`` of one RK step, at ``h = 0``."""
    return _weighted_sum(((t.weight, t.value) for t in numerical_terms(k, tab, f, y0)), f.d)


def residual_weights(j: int, tab: Tableau) -> list[tuple[RootedTree, Fraction]]:
    """``alpha(T) (gamma(T) phi(T) - 1)`` for every tree of order ``j``."""
    _check_order(j)
    out = []
    for t in trees_of_order(j):
        c = coefficients(t)
        out.append((t, c.alpha * (c.gamma * phi(t, tab) - 1)))
    return out


def order_residual(j: int, tab: Tableau, f: PolynomialMap, y0: Sequence) -> tuple[Fraction, ...]:
    """Order-j gap between the RK step and the exact flow."""
    terms = [(w, elementary_differential(t, f, y0).value if w else None)
             for t, w in residual_weights(j, tab)]
    return _weighted_sum(((w, v) for w, v in terms if w), f.d)

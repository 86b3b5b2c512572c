"""Elementary weights of a Butcher tableau.

The stage vector of a tree is the tree contraction whose every vertex carries
``A`` glued to a diagonal core. A diagonal core contracted with ``l`` vectors
is their elementwise product, so the recursion is::

    Phi(leaf)          = A @ 1
    Phi([T1 ... Tl])   = A @ (Phi(T1) * ... * Phi(Tl))
    phi([T1 ... Tl])   = b @ (Phi(T1) * ... * Phi(Tl))
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .tableau_io import Tableau
from .trees import RootedTree, coefficients, enumerate_trees


@dataclass(frozen=True)
class WeightVector:
    tree: RootedTree
    values: tuple[Fraction, ...]


def _hadamard(vectors, s: int) -> list[Fraction]:
    out = [Fraction(1)] * s
    for v in vectors:
        out = [x * y for x, y in zip(out, v)]
    return out


def _matvec(M, v) -> tuple[Fraction, ...]:
    return tuple(sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in M)


@lru_cache(maxsize=None)
def _phi_vector(tree: RootedTree, tab: Tableau) -> tuple[Fraction, ...]:
    inner = _hadamard((_phi_vector(c, tab) for c in tree.children), tab.s)
    return _matvec(tab.A, inner)


def phi_vector(tree: RootedTree, tab: Tableau) -> WeightVector:
    """Stage weight vector ``Phi(T)`` in ``Q^s``."""
    return WeightVector(tree, _phi_vector(tree, tab))


@lru_cache(maxsize=None)
def phi(tree: RootedTree, tab: Tableau) -> Fraction:
    """Elementary weight ``phi(T)``: the root uses the ``b`` row instead of ``A``."""
    inner = _hadamard((_phi_vector(c, tab) for c in tree.children), tab.s)
    return sum((bi * x for bi, x in zip(tab.b, inner)), Fraction(0))


def gamma_phi(tree: RootedTree, tab: Tableau) -> Fraction:
    return coefficients(tree).gamma * phi(tree, tab)


@dataclass
class OrderReport:
    """Outcome of an order check.

    ``classical_order`` is the largest p with every condition through order p
    satisfied. ``saturated`` means no failure was found up to ``max_order``
    (so the true order is at least that). ``failing`` lists trees of order
    ``classical_order + 1`` with their ``gamma*phi`` values.
    """

    classical_order: int
    max_order: int
    saturated: bool
    failing: list[tuple[RootedTree, Fraction]] = field(default_factory=list)
    effective_order: int | None = None
    effective_saturated: bool = False
    statuses: dict[int, str] = field(default_factory=dict)
    residual_norms: dict[int, Fraction] = field(default_factory=dict)
    seed: int | None = None
    sample_count: int | None = None
    degree_bounds: dict[int, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def order_label(self) -> str:
        return f">= {self.max_order}" if self.saturated else str(self.classical_order)

    @property
    def effective_label(self) -> str:
        if self.effective_order is None:
            return "n/a"
        return f">= {self.max_order}" if self.effective_saturated else str(self.effective_order)


def classical_order(tab: Tableau, max_order: int) -> OrderReport:
    """Largest ``p <= max_order`` with ``gamma(T) phi(T) == 1`` for all ``|T| <= p``."""
    if max_order < 1:
        raise ValueError(f"max_order must be positive, got {max_order}")
    forest = enumerate_trees(max_order)
    for p in range(1, max_order + 1):
        failing = [(t, gamma_phi(t, tab)) for t in forest[p]]
        failing = [(t, v) for t, v in failing if v != 1]
        if failing:
            return OrderReport(p - 1, max_order, False, failing)
    return OrderReport(max_order, max_order, True, [])

"""Problem-specific order conditions.

For a fixed right-hand side the elementary differentials of one order may be
linearly dependent, and then the RK step only has to match the exact flow on
their span. Equivalently the order-j residual

    r_j(y0) = sum_{|T|=j} alpha(T) (gamma(T) phi(T) - 1) T(f)(y0)

must vanish identically in ``y0``. For polynomial ``f`` this is a polynomial
identity, checked here exactly at random rational points. A zero on every
sample is a probabilistic certificate, never a proof.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact_linalg
from .elemdiff import elementary_differential
from .series import residual_weights
from .tableau_io import PolynomialMap, Tableau
from .trees import RootedTree, trees_of_order
from .weights import OrderReport, classical_order

MAX_REFINED_ORDER = 8

EXACT_ZERO = "exact-zero"
NONZERO = "nonzero"
CERTIFIED = "certified-probabilistic"


@dataclass
class DependencyReport:
    """Linear relations among the order-j elementary differentials on the samples."""

    order: int
    trees: list[RootedTree]
    sample_count: int
    kernel_basis: list[list[Fraction]]
    matrix: list[list[Fraction]] = field(repr=False)

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    @property
    def rank(self) -> int:
        return self.n_trees - len(self.kernel_basis)

    def contains(self, v: Sequence[Fraction]) -> bool:
        """Whether ``v`` (indexed like ``trees``) annihilates every sample."""
        return not any(exact_linalg.matvec(self.matrix, v))


@dataclass
class RefinedCondition:
    order: int
    status: str  # EXACT_ZERO or NONZERO
    probabilistic: bool
    weights: list[tuple[RootedTree, Fraction]]
    residuals: list[tuple[Fraction, ...]]
    degree_bound: int
    sample_count: int

    @property
    def max_abs_residual(self) -> Fraction:
        return max((abs(x) for r in self.residuals for x in r), default=Fraction(0))


def _check(j: int, samples) -> None:
    if not 1 <= j <= MAX_REFINED_ORDER:
        raise ValueError(f"order must be in 1..{MAX_REFINED_ORDER}, got {j}")
    if not samples:
        raise ValueError("need at least one sample point")


def draw_samples(f: PolynomialMap, count: int, seed: int) -> list[tuple[Fraction, ...]]:
    """``count`` distinct points, numerators in [-9, 9], denominators in {1, 2, 3}."""
    if count < 1:
        raise ValueError("sample count must be positive")
    rng = random.Random(seed)
    seen: set[tuple[Fraction, ...]] = set()
    out = []
    space = 19 ** f.d * 3 ** f.d
    while len(out) < count:
        if len(seen) >= space:
            raise ValueError("sample space exhausted")
        y = tuple(Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3))) for _ in range(f.d))
        if y not in seen:
            seen.add(y)
            out.append(y)
    return out


def sample_matrix(j: int, f: PolynomialMap, samples: Sequence[Sequence[Fraction]]) -> tuple[list[RootedTree], list[list[Fraction]]]:
    """The ``(d*K) x N_j`` matrix whose column T stacks ``T(f)(y_k)`` over samples."""
    trees = trees_of_order(j)
    cols = [[x for y in samples for x in elementary_differential(t, f, y).value] for t in trees]
    rows = [list(r) for r in zip(*cols)]
    return trees, rows


def dependency_kernel(j: int, f: PolynomialMap, samples: Sequence[Sequence[Fraction]]) -> DependencyReport:
    _check(j, samples)
    if len(set(map(tuple, samples))) != len(samples):
        raise ValueError("sample points must be pairwise distinct")
    trees, M = sample_matrix(j, f, samples)
    kernel = exact_linalg.nullspace(M, len(trees))
    return DependencyReport(j, trees, len(samples), kernel, M)


def degree_bound(j: int, f: PolynomialMap) -> int:
    return j * max(f.degree, 1)


def refined_condition(j: int, tab: Tableau, f: PolynomialMap, samples: Sequence[Sequence[Fraction]]) -> RefinedCondition:
    """Evaluate the order-j residual exactly at every sample."""
    _check(j, samples)
    weights = residual_weights(j, tab)
    active = [(t, w) for t, w in weights if w]
    residuals = []
    for y in samples:
        acc = [Fraction(0)] * f.d
        for t, w in active:
            for i, v in enumerate(elementary_differential(t, f, y).value):
                acc[i] += w * v
        residuals.append(tuple(acc))
    zero = not any(x for r in residuals for x in r)
    return RefinedCondition(j, EXACT_ZERO if zero else NONZERO, bool(active), weights, residuals,
                            degree_bound(j, f), len(samples))


def effective_order(tab: Tableau, f: PolynomialMap, max_order: int, sample_count: int = 20,
                    seed: int = 0) -> OrderReport:
    """Classical and problem-specific order of ``tab`` on ``f``."""
    if not 1 <= max_order <= MAX_REFINED_ORDER:
        raise ValueError(f"max_order must be in 1..{MAX_REFINED_ORDER}, got {max_order}")
    report = classical_order(tab, max_order)
    samples = draw_samples(f, sample_count, seed)
    report.seed = seed
    report.sample_count = sample_count
    effective = None
    for j in range(1, max_order + 1):
        cond = refined_condition(j, tab, f, samples)
        report.degree_bounds[j] = cond.degree_bound
        report.residual_norms[j] = cond.max_abs_residual
        if cond.status == NONZERO:
            report.statuses[j] = NONZERO
            if effective is None:
                effective = j - 1
        else:
            report.statuses[j] = CERTIFIED if cond.probabilistic else EXACT_ZERO
    report.effective_order = max_order if effective is None else effective
    report.effective_saturated = effective is None
    if any(report.statuses[j] == CERTIFIED for j in range(1, report.effective_order + 1)):
        report.notes.append(
            "zero residual on random samples certifies the identity only with high probability; "
            "the identity is assumed to hold for all y0 (polynomial right-hand side)")
    return report

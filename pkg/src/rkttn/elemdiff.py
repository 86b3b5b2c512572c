"""Derivative tensors of polynomial maps and elementary differentials.

``f^(l)(y)`` is stored densely as a ``(d,) * (l + 1)`` numpy object array of
Fractions; entry ``[i, i1, ..., il]`` is ``d^l f_i / dy_i1 ... dy_il``. An
elementary differential contracts the root's derivative tensor with the
values of its subtrees, one trailing mode per child.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from typing import Sequence

import numpy as np

from .tableau_io import PolynomialMap, Tableau
from .trees import RootedTree
from .weights import phi_vector


@dataclass(frozen=True)
class DerivativeTensor:
    l: int
    d: int
    entries: np.ndarray

    def __getitem__(self, idx):
        return self.entries[idx]


@dataclass(frozen=True)
class ElementaryDifferential:
    tree: RootedTree
    value: tuple[Fraction, ...]


def _as_point(f: PolynomialMap, y0: Sequence) -> tuple[Fraction, ...]:
    if len(y0) != f.d:
        raise ValueError(f"point has length {len(y0)}, expected d={f.d}")
    return tuple(Fraction(x) for x in y0)


def _partial(comp, counts: tuple[int, ...], y: tuple[Fraction, ...]) -> Fraction:
    # d^{counts} of sum c * y^e, evaluated at y
    total = Fraction(0)
    for coeff, e in comp:
        term = coeff
        for ej, kj, yj in zip(e, counts, y):
            if kj > ej:
                term = 0
                break
            if kj:
                term *= math.perm(ej, kj)
            if ej - kj:
                term *= yj ** (ej - kj)
        total += term
    return total


@lru_cache(maxsize=4096)
def _derivative_array(f: PolynomialMap, l: int, y: tuple[Fraction, ...]) -> np.ndarray:
    d = f.d
    out = np.empty((d,) * (l + 1), dtype=object)
    if l > f.degree:
        out.fill(Fraction(0))
        out.setflags(write=False)
        return out
    for i, comp in enumerate(f.components):
        for multiset in combinations_with_replacement(range(d), l):
            counts = Counter(multiset)
            value = _partial(comp, tuple(counts.get(j, 0) for j in range(d)), y)
            for idx in set(permutations(multiset)):
                out[(i,) + idx] = value
    out.setflags(write=False)
    return out


def derivative_tensor(f: PolynomialMap, l: int, y0: Sequence) -> DerivativeTensor:
    """Exact ``l``-th derivative tensor of ``f`` at ``y0``; ``l = 0`` gives ``f(y0)``."""
    if l < 0:
        raise ValueError(f"derivative order must be non-negative, got {l}")
    y = _as_point(f, y0)
    return DerivativeTensor(l, f.d, _derivative_array(f, l, y))


def contract(tensor: np.ndarray, vectors: Sequence[Sequence[Fraction]]) -> np.ndarray:
    """Contract the trailing modes of ``tensor`` with ``vectors`` (last vector first)."""
    out = tensor
    for v in reversed(vectors):
        out = np.tensordot(out, np.asarray(v, dtype=object), axes=([out.ndim - 1], [0]))
    return out


@lru_cache(maxsize=None)
def _elementary(tree: RootedTree, f: PolynomialMap, y: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    l = len(tree.children)
    if l > f.degree:
        return (Fraction(0),) * f.d
    kids = [_elementary(c, f, y) for c in tree.children]
    vec = contract(_derivative_array(f, l, y), kids)
    return tuple(Fraction(x) for x in vec.reshape(f.d))


def elementary_differential(tree: RootedTree, f: PolynomialMap, y0: Sequence) -> ElementaryDifferential:
    """``T(f)(y0)``: leaf gives ``f(y0)``; ``[T1..Tl]`` gives ``f^(l)(y0) T1(f) ... Tl(f)``."""
    return ElementaryDifferential(tree, _elementary(tree, f, _as_point(f, y0)))


def elementary_differential_uncached(tree: RootedTree, f: PolynomialMap, y0: Sequence) -> tuple[Fraction, ...]:
    y = _as_point(f, y0)

    def rec(t: RootedTree):
        kids = [rec(c) for c in t.children]
        tensor = _derivative_array.__wrapped__(f, len(kids), y)
        return tuple(Fraction(x) for x in contract(tensor, kids).reshape(f.d))

    return rec(tree)


# -- Kronecker structure of the stage system ---------------------------------


def stacked_system(tab: Tableau, f: PolynomialMap) -> PolynomialMap:
    """The stage map ``F(Y) = (A kron I_d) (f(Y_1), ..., f(Y_s))`` on ``Q^(s*d)``.

    Stage ``j`` owns variables ``j*d .. j*d + d - 1``.
    """
    s, d = tab.s, f.d
    comps = []
    for i in range(s):
        for a in range(d):
            terms = []
            for j in range(s):
                if tab.A[i][j] == 0:
                    continue
                for coeff, e in f.components[a]:
                    big = [0] * (s * d)
                    big[j * d:(j + 1) * d] = e
                    terms.append((tab.A[i][j] * coeff, big))
            comps.append(terms)
    return PolynomialMap.from_terms(s * d, comps)


def kronecker_decomposition_check(tree: RootedTree, tab: Tableau, f: PolynomialMap, y0: Sequence) -> bool:
    """Whether ``T(F)(1_s kron y0) == Phi(T) kron T(f)(y0)`` holds entrywise."""
    if tab.s * f.d > 64 or tree.order > 5:
        raise ValueError("oracle scale exceeded: need s*d <= 64 and |T| <= 5")
    y = _as_point(f, y0)
    F = stacked_system(tab, f)
    lhs = elementary_differential_uncached(tree, F, y * tab.s)
    Phi = phi_vector(tree, tab).values
    small = elementary_differential(tree, f, y).value
    rhs = tuple(p * v for p in Phi for v in small)
    return lhs == rhs

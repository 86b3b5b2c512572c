"""Differentiation paths, valid labelled trees and Faa di Bruno multiplicities.

Differentiating ``f(y(t))`` k times, step ``i`` picks one of the ``i``
vertices grown so far and hangs a new leaf, labelled ``i + 1``, under it.
The path ``(a_1, ..., a_k)`` with ``a_i <= i`` records those choices, and the
labelled tree it produces satisfies: root labelled 1, every parent label
smaller than its child's, siblings read in increasing label order. Each
path gives a distinct labelled tree and every such tree arises once, so
grouping the ``k!`` paths by shape counts the labellings ``alpha(T)``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import InvalidPathError
from .trees import RootedTree

MAX_PATH_LENGTH = 8


@dataclass(frozen=True)
class DifferentiationPath:
    """Steps ``(a_1, ..., a_k)``; step ``i`` attaches vertex ``i + 1`` to vertex ``a_i``."""

    steps: tuple[int, ...]

    def __post_init__(self):
        for i, a in enumerate(self.steps, start=1):
            if not isinstance(a, int) or a < 1 or a > i:
                raise InvalidPathError(f"step {i} is {a!r}; need 1 <= a_{i} <= {i}")

    @classmethod
    def from_subscripts(cls, subscripts: Sequence[int]) -> "DifferentiationPath":
        """Build from the outermost-first subscript order ``(a_k, ..., a_1)``."""
        return cls(tuple(reversed(tuple(subscripts))))

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class LabelledTree:
    """Vertices ``1..n``; ``parent[j]`` is the parent of vertex ``j + 2``."""

    parent: tuple[int, ...]

    def __post_init__(self):
        for j, p in enumerate(self.parent):
            if not 1 <= p < j + 2:
                raise ValueError(f"vertex {j + 2} has parent {p}; labels must increase away from the root")

    @property
    def order(self) -> int:
        return len(self.parent) + 1

    def children(self, v: int) -> list[int]:
        """Children of ``v`` in left-to-right (increasing label) order."""
        return [j + 2 for j, p in enumerate(self.parent) if p == v]

    def edges(self) -> list[tuple[int, int]]:
        return [(p, j + 2) for j, p in enumerate(self.parent)]


def enumerate_paths(k: int) -> list[DifferentiationPath]:
    """All ``k!`` paths of length ``k`` in lexicographic order."""
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"path length must be a positive integer, got {k!r}")
    if k > MAX_PATH_LENGTH:
        raise ValueError(f"path length {k} exceeds the cap {MAX_PATH_LENGTH}")
    return [DifferentiationPath(steps) for steps in product(*(range(1, i + 1) for i in range(1, k + 1)))]


def path_to_tree(path: DifferentiationPath | Sequence[int]) -> LabelledTree:
    if not isinstance(path, DifferentiationPath):
        path = DifferentiationPath(tuple(path))
    return LabelledTree(path.steps)


def tree_to_path(lt: LabelledTree) -> DifferentiationPath:
    return DifferentiationPath(lt.parent)


def shape_of(lt: LabelledTree) -> RootedTree:
    """The unlabelled tree underneath ``lt``."""
    kids: dict[int, list[int]] = {v: [] for v in range(1, lt.order + 1)}
    for parent, child in lt.edges():
        kids[parent].append(child)

    # children always carry larger labels, so build from the top label down
    built: dict[int, RootedTree] = {}
    for v in range(lt.order, 0, -1):
        built[v] = RootedTree(built[c] for c in kids[v])
    return built[1]


def multiplicity_histogram(k: int) -> dict[RootedTree, int]:
    """How many length-k paths produce each shape of order ``k + 1``."""
    counts = Counter(shape_of(path_to_tree(p)) for p in enumerate_paths(k))
    return dict(sorted(counts.items(), key=lambda kv: kv[0].encoding))


# -- Faa di Bruno ------------------------------------------------------------


@dataclass(frozen=True)
class MultiIndex:
    """``m = (m_1, ..., m_k)``: ``m_i`` factors carry the i-th derivative."""

    m: tuple[int, ...]

    @property
    def k(self) -> int:
        return sum(i * mi for i, mi in enumerate(self.m, start=1))

    @property
    def l(self) -> int:
        return sum(self.m)


def enumerate_multiindices(k: int, l: int) -> list[MultiIndex]:
    """``S_{k,l}``: ``sum m_i = l`` and ``sum i m_i = k``, in descending lexicographic order."""
    if not (isinstance(k, int) and isinstance(l, int)) or k < 1 or not 1 <= l <= k:
        raise ValueError(f"need 1 <= l <= k, got k={k!r}, l={l!r}")
    out: list[MultiIndex] = []

    def rec(i: int, parts_left: int, weight_left: int, acc: list[int]):
        if i > k:
            if parts_left == 0 and weight_left == 0:
                out.append(MultiIndex(tuple(acc)))
            return
        for mi in range(min(parts_left, weight_left // i), -1, -1):
            acc.append(mi)
            rec(i + 1, parts_left - mi, weight_left - i * mi, acc)
            acc.pop()

    rec(1, l, k, [])
    return out


def eta(m: MultiIndex | Iterable[int]) -> Fraction:
    """``k! / (prod (i!)^m_i * prod m_i!)``: set partitions of k items into blocks of sizes ``m``."""
    if not isinstance(m, MultiIndex):
        m = MultiIndex(tuple(m))
    if not m.m or any(not isinstance(x, int) or x < 0 for x in m.m) or m.l == 0:
        raise ValueError(f"{m.m} is not in any S_(k,l)")
    if m.k != len(m.m):
        raise ValueError(f"{m.m} has weight {m.k} but length {len(m.m)}; not in S_(k,l)")
    denom = 1
    for i, mi in enumerate(m.m, start=1):
        denom *= math.factorial(i) ** mi * math.factorial(mi)
    return Fraction(math.factorial(m.k), denom)

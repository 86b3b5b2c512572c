"""Unlabelled rooted trees and their combinatorial coefficients.

Trees are kept in a canonical form: children sorted by descending bracket
encoding, where a leaf is ``[]`` and a node is ``[`` + children + ``]``.
Two trees are equal exactly when their encodings are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import groupby
from typing import Iterable


class RootedTree:
    """Immutable canonical rooted tree (a root plus a multiset of subtrees)."""

    __slots__ = ("children", "order", "encoding", "_hash")

    def __init__(self, children: Iterable["RootedTree"] = ()):
        kids = sorted(children, key=lambda t: t.encoding, reverse=True)
        self.children: tuple[RootedTree, ...] = tuple(kids)
        self.order: int = 1 + sum(c.order for c in kids)
        self.encoding: str = "[" + "".join(c.encoding for c in kids) + "]"
        self._hash = hash(self.encoding)

    def __setattr__(self, name, value):
        if hasattr(self, "_hash"):
            raise AttributeError("RootedTree is immutable")
        object.__setattr__(self, name, value)

    def __eq__(self, other):
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self.encoding == other.encoding

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "RootedTree") -> bool:
        return self.encoding < other.encoding

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"RootedTree({self.encoding!r})"

    def __str__(self) -> str:
        return self.encoding

    def __reduce__(self):
        return (parse_tree, (self.encoding,))

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def vertices(self) -> int:
        return self.order


LEAF = RootedTree()


def parse_tree(text: str) -> RootedTree:
    """Parse a bracket encoding; children may appear in any order."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty tree encoding")
    stack: list[list[RootedTree]] = []
    result: RootedTree | None = None
    for pos, ch in enumerate(s):
        if result is not None:
            raise ValueError(f"trailing characters after tree at position {pos}: {s!r}")
        if ch == "[":
            stack.append([])
        elif ch == "]":
            if not stack:
                raise ValueError(f"unbalanced ']' at position {pos}: {s!r}")
            node = RootedTree(stack.pop())
            if stack:
                stack[-1].append(node)
            else:
                result = node
        else:
            raise ValueError(f"unexpected character {ch!r} at position {pos}")
    if result is None:
        raise ValueError(f"unbalanced '[' in {s!r}")
    return result


def canonical(tree: RootedTree) -> RootedTree:
    """Rebuild ``tree`` bottom-up in canonical child order (idempotent)."""
    return RootedTree(canonical(c) for c in tree.children)


def butcher_product(t: RootedTree, u: RootedTree) -> RootedTree:
    """Graft ``u`` as an extra child of the root of ``t``."""
    return RootedTree(t.children + (u,))


def chain(n: int) -> RootedTree:
    """The tall tree with ``n`` vertices in a single path."""
    if n < 1:
        raise ValueError("chain needs at least one vertex")
    t = LEAF
    for _ in range(n - 1):
        t = RootedTree((t,))
    return t


def bushy(n: int) -> RootedTree:
    """The star ``[•^(n-1)]``: a root with ``n-1`` leaves."""
    if n < 1:
        raise ValueError("bushy tree needs at least one vertex")
    return RootedTree((LEAF,) * (n - 1))


# -- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def _trees_of_order(n: int) -> tuple[RootedTree, ...]:
    if n == 1:
        return (LEAF,)
    # the tree set of order n is {[forest] : forest of total order n-1}
    pool = [t for m in range(1, n) for t in _trees_of_order(m)]
    out = [RootedTree(f) for f in _forests(n - 1, len(pool) - 1, tuple(pool))]
    out.sort(key=lambda t: t.encoding)
    return tuple(out)


def _forests(total: int, max_idx: int, pool: tuple[RootedTree, ...]):
    # multisets from pool with non-increasing indices, so each appears once
    if total == 0:
        yield ()
        return
    for i in range(max_idx, -1, -1):
        t = pool[i]
        if t.order <= total:
            for rest in _forests(total - t.order, i, pool):
                yield (t,) + rest


def trees_of_order(n: int) -> list[RootedTree]:
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    return list(_trees_of_order(n))


def enumerate_trees(max_order: int) -> dict[int, list[RootedTree]]:
    """All canonical trees of order ``1..max_order``, each list sorted by encoding.

    Orders above 12 are accepted but grow quickly (4766 trees at order 12).
    """
    if not isinstance(max_order, int) or max_order < 1:
        raise ValueError(f"max_order must be a positive integer, got {max_order!r}")
    return {p: trees_of_order(p) for p in range(1, max_order + 1)}


# -- coefficients ------------------------------------------------------------


@dataclass(frozen=True)
class TreeCoefficients:
    order: int
    sigma: int
    gamma: int
    alpha: int


@lru_cache(maxsize=None)
def coefficients(tree: RootedTree) -> TreeCoefficients:
    """Order, symmetry, density (tree factorial) and labelling count of ``tree``.

    With ``tree = [T1^m1 ... Tk^mk]`` (distinct ``Ti``)::

        sigma = prod mi! * sigma(Ti)^mi
        gamma = |T| * prod gamma(Ti)^mi
        alpha = |T|! / (sigma * gamma)
    """
    sigma = 1
    gamma = tree.order
    # canonical order puts identical children next to each other
    for _, group in groupby(tree.children):
        members = list(group)
        sub = coefficients(members[0])
        m = len(members)
        sigma *= math.factorial(m) * sub.sigma**m
        gamma *= sub.gamma**m
    alpha, rem = divmod(math.factorial(tree.order), sigma * gamma)
    assert rem == 0
    return TreeCoefficients(tree.order, sigma, gamma, alpha)


def sigma(tree: RootedTree) -> int:
    return coefficients(tree).sigma


def gamma(tree: RootedTree) -> int:
    return coefficients(tree).gamma


def alpha(tree: RootedTree) -> int:
    return coefficients(tree).alpha

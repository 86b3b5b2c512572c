import math
from fractions import Fraction

import pytest

from rkttn.errors import InvalidPathError
from rkttn.labelling import (DifferentiationPath, LabelledTree, MultiIndex, enumerate_multiindices,
                             enumerate_paths, eta, multiplicity_histogram, path_to_tree, shape_of,
                             tree_to_path)
from rkttn.trees import chain, coefficients, parse_tree, trees_of_order

from oracles import stirling2


def test_paths_small():
    assert enumerate_paths(1) == [DifferentiationPath((1,))]
    assert len(enumerate_paths(3)) == 6


def test_paths_k6_exhaustive():
    paths = enumerate_paths(6)
    assert len(paths) == 720
    assert len({p.steps for p in paths}) == 720
    assert [p.steps for p in paths] == sorted(p.steps for p in paths)
    assert all(a <= i for p in paths for i, a in enumerate(p.steps, start=1))


@pytest.mark.parametrize("k", [0, -1])
def test_paths_reject_nonpositive(k):
    with pytest.raises(ValueError):
        enumerate_paths(k)


def test_paths_capped():
    with pytest.raises(ValueError):
        enumerate_paths(9)


def test_path_to_tree_examples():
    assert path_to_tree((1,)).parent == (1,)
    assert shape_of(path_to_tree((1,))) == parse_tree("[[]]")
    assert path_to_tree((1, 1)).children(1) == [2, 3]
    assert shape_of(path_to_tree((1, 1))) == parse_tree("[[][]]")
    lt = path_to_tree((1, 2))
    assert lt.edges() == [(1, 2), (2, 3)]
    assert shape_of(lt) == parse_tree("[[[]]]")


@pytest.mark.parametrize("steps", [(2,), (1, 3), (1, 1, 0)])
def test_invalid_path(steps):
    with pytest.raises(InvalidPathError):
        path_to_tree(steps)


def test_path_to_tree_injective_k5():
    trees = [path_to_tree(p) for p in enumerate_paths(5)]
    assert len(set(trees)) == math.factorial(5)


@pytest.mark.parametrize("k", range(1, 7))
def test_generated_trees_are_valid_and_invertible(k):
    for p in enumerate_paths(k):
        lt = path_to_tree(p)
        labels = {1} | {c for _, c in lt.edges()}
        assert labels == set(range(1, k + 2))  # each vertex one label
        assert all(i < j for i, j in lt.edges())  # parent label smaller
        for v in range(1, k + 2):
            kids = lt.children(v)
            assert kids == sorted(kids)  # siblings increase left to right
        assert tree_to_path(lt) == p


def test_labelled_tree_rejects_bad_parent():
    with pytest.raises(ValueError):
        LabelledTree((1, 3))


def test_shape_of_chain():
    lt = LabelledTree((1, 2))
    assert shape_of(lt) == chain(3)
    assert shape_of(lt).order == lt.order


def test_figure_pair_and_relabelled_swap():
    # subscripts are written outermost derivative first
    first = DifferentiationPath.from_subscripts((1, 5, 5, 3, 1, 2, 1, 1))
    assert first.steps == (1, 1, 2, 1, 3, 5, 5, 1)
    expected = parse_tree("[[][[]][[]][[][]]]")
    assert shape_of(path_to_tree(first)) == expected
    # swapping steps 2 and 3 moves vertex 3 to label 4, so later references follow it
    swapped = DifferentiationPath.from_subscripts((1, 5, 5, 4, 1, 1, 2, 1))
    assert shape_of(path_to_tree(swapped)) == expected
    # without the relabelling the fifth leaf lands on a different vertex
    literal = DifferentiationPath.from_subscripts((1, 5, 5, 3, 1, 1, 2, 1))
    assert shape_of(path_to_tree(literal)) != expected


def test_histogram_k2():
    assert multiplicity_histogram(2) == {parse_tree("[[[]]]"): 1, parse_tree("[[][]]"): 1}


def test_histogram_k4_equals_alpha():
    hist = multiplicity_histogram(4)
    assert set(hist) == set(trees_of_order(5))
    assert all(n == coefficients(t).alpha for t, n in hist.items())
    assert hist[parse_tree("[[[[]]][]]")] == 4
    assert hist[parse_tree("[[[[]][]]]")] == 3


@pytest.mark.parametrize("k", range(1, 8))
def test_histogram_sums_to_factorial(k):
    hist = multiplicity_histogram(k)
    assert sum(hist.values()) == math.factorial(k)
    assert all(n == coefficients(t).alpha for t, n in hist.items())


def test_multiindex_examples():
    assert enumerate_multiindices(3, 3) == [MultiIndex((3, 0, 0))]
    assert enumerate_multiindices(4, 2) == [MultiIndex((1, 0, 1, 0)), MultiIndex((0, 2, 0, 0))]
    for k in range(1, 9):
        only = enumerate_multiindices(k, 1)
        assert len(only) == 1 and only[0].m[-1] == 1


@pytest.mark.parametrize("k,l", [(0, 1), (2, 3), (3, 0)])
def test_multiindex_bad_args(k, l):
    with pytest.raises(ValueError):
        enumerate_multiindices(k, l)


def test_multiindex_membership():
    for k in range(1, 8):
        for l in range(1, k + 1):
            for m in enumerate_multiindices(k, l):
                assert m.l == l and m.k == k


def test_eta_examples():
    assert eta((4, 0, 0, 0)) == 1
    assert eta((1, 1, 0)) == 3
    assert isinstance(eta((1, 1, 0)), Fraction)


@pytest.mark.parametrize("k", range(1, 9))
def test_eta_sums_to_stirling(k):
    for l in range(1, k + 1):
        values = [eta(m) for m in enumerate_multiindices(k, l)]
        assert all(v.denominator == 1 and v > 0 for v in values)
        assert sum(values) == stirling2(k, l)


@pytest.mark.parametrize("m", [(0, 1, 0), (1, 1), (0, 0, 0), (), (-1, 1)])
def test_eta_rejects_non_members(m):
    with pytest.raises(ValueError):
        eta(m)

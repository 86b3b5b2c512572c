"""Acceptance criteria, one test per criterion.

Run under pytest for a PASS/FAIL summary section, or directly with
``python3 tests/test_acceptance.py`` for one line per criterion.
"""

import math
from collections import Counter
import random
import sys
from fractions import Fraction

from rkttn.elemdiff import elementary_differential, kronecker_decomposition_check
from rkttn.integrator import empirical_order
from rkttn.labelling import (enumerate_multiindices, enumerate_paths, eta, multiplicity_histogram,
                             path_to_tree, shape_of)
from rkttn.series import exact_taylor_coeff
from rkttn.superconv import effective_order
from rkttn.tableau_io import PolynomialMap
from rkttn.trees import chain, coefficients, parse_tree, trees_of_order
from rkttn.weights import classical_order, phi

from conftest import load_problem, load_tableau, random_tableau
from oracles import stirling2, tree_counts

T1 = parse_tree("[[][[[]]]]")
T2 = parse_tree("[[[][[]]]]")
STEPS = ["1/8", "1/16", "1/32", "1/64", "1/128"]


def test_criterion_1_tree_combinatorics():
    """tree counts, alpha sums and alpha*sigma*gamma = n! through order 8; exact"""
    assert tree_counts(8) == [1, 1, 2, 4, 9, 20, 48, 115]
    assert [len(trees_of_order(p)) for p in range(1, 9)] == [1, 1, 2, 4, 9, 20, 48, 115]
    for p in range(1, 9):
        assert sum(coefficients(t).alpha for t in trees_of_order(p)) == math.factorial(p - 1)
        for t in trees_of_order(p):
            c = coefficients(t)
            assert c.alpha * c.sigma * c.gamma == math.factorial(p)


def test_criterion_2_path_bijection():
    """k! paths map injectively onto labelled trees with histogram alpha, k <= 6; exact"""
    for k in range(1, 7):
        paths = enumerate_paths(k)
        assert len(paths) == math.factorial(k)
        labelled = [path_to_tree(p) for p in paths]
        assert len({lt.parent for lt in labelled}) == len(paths)
        for lt in labelled:
            assert all(p < child for p, child in lt.edges())
        assert Counter(shape_of(lt) for lt in labelled) == multiplicity_histogram(k)
        hist = multiplicity_histogram(k)
        assert set(hist) == set(trees_of_order(k + 1))
        for t, n in hist.items():
            assert n == coefficients(t).alpha


def test_criterion_3_faa_di_bruno():
    """sum of eta over S_(k,l) equals Stirling2(k,l) for k <= 8; exact"""
    for k in range(1, 9):
        for l in range(1, k + 1):
            assert sum(eta(m) for m in enumerate_multiindices(k, l)) == stirling2(k, l)


def test_criterion_4_worked_example():
    """six-stage weights 41/960 and 1/64, classical order 4, identity = 7; exact"""
    tab = load_tableau("butcher_s6.json")
    assert phi(T1, tab) == Fraction(41, 960) == Fraction(1, 30) + Fraction(3, 320)
    assert phi(T2, tab) == Fraction(1, 64) == Fraction(1, 40) - Fraction(3, 320)
    assert classical_order(tab, 6).classical_order == 4
    lhs = 4 * 30 * phi(T1, tab) + 3 * 40 * phi(T2, tab)
    assert lhs == 7 == coefficients(T1).alpha + coefficients(T2).alpha


def test_criterion_5_superconvergence_detection():
    """effective order 5 on the autonomized scalar, 4 on the 2-D fixture; exact verdict"""
    tab = load_tableau("butcher_s6.json")
    scalar = effective_order(tab, load_problem("scalar_riccati_autonomized.json"), 6, sample_count=20, seed=42)
    assert scalar.classical_order == 4 and scalar.effective_order == 5
    generic = effective_order(tab, load_problem("generic_2d.json"), 6, sample_count=20, seed=42)
    assert generic.effective_order == 4


def test_criterion_6_kronecker_decomposition():
    """T(F) = Phi(T) kron T(f) on 60 random cases; exact"""
    rng = random.Random(20240601)
    problems = [load_problem(n) for n in ("riccati.json", "linear.json", "generic_2d.json",
                                          "scalar_riccati_autonomized.json")]
    trees = [t for p in range(1, 5) for t in trees_of_order(p)]
    cases = 0
    for _ in range(60):
        tab = random_tableau(rng, rng.randint(1, 3))
        f = rng.choice(problems)
        y0 = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(f.d)]
        t = rng.choice(trees)
        assert kronecker_decomposition_check(t, tab, f, y0), (t, tab, f, y0)
        cases += 1
    assert cases >= 50


def test_criterion_7_taylor_oracles():
    """flow derivatives of y'=y^2 and y'=Ly through k = 6; exact"""
    square = PolynomialMap.from_terms(1, [[(1, (2,))]])
    for q in (Fraction(1, 2), Fraction(-3, 7), Fraction(5)):
        for k in range(1, 7):
            assert exact_taylor_coeff(k, square, [q]) == (math.factorial(k) * q ** (k + 1),)
    linear = load_problem("linear.json")
    lam = [Fraction(x) for x in linear.params["lambda"]]
    y0 = (Fraction(3, 2), Fraction(-2, 5))
    for k in range(1, 7):
        assert exact_taylor_coeff(k, linear, y0) == tuple(l ** k * y for l, y in zip(lam, y0))
        for t in trees_of_order(k):
            if t != chain(k):
                assert not any(elementary_differential(t, linear, y0).value)


def test_criterion_8_empirical_convergence():
    """slopes in [3.7, 4.3] / [4.7, 5.3] / [3.7, 4.3], h = 2^-3..2^-7"""
    bands = [
        ("rk4.json", "riccati.json", 3.7, 4.3),
        ("butcher_s6.json", "scalar_riccati_autonomized.json", 4.7, 5.3),
        ("butcher_s6.json", "generic_2d.json", 3.7, 4.3),
    ]
    for tab_name, prob, lo, hi in bands:
        f = load_problem(prob)
        est = empirical_order(load_tableau(tab_name), f, f.y0, f.t_end, STEPS)
        assert est.reference.startswith("closed form")
        assert est.order is not None and lo <= est.order <= hi, (tab_name, prob, est.order)


def main() -> int:
    failed = 0
    for name, fn in sorted((n, f) for n, f in globals().items() if n.startswith("test_criterion_")):
        try:
            fn()
            verdict = "PASS"
        except AssertionError as exc:
            verdict = f"FAIL ({exc})" if str(exc) else "FAIL"
            failed += 1
        print(f"{verdict[:4]}  {name}  [{fn.__doc__}]{verdict[4:]}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

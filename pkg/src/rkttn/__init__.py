"""Runge-Kutta order analysis built on tree contractions.

Exact rooted-tree combinatorics, elementary weights of Butcher tableaus,
elementary differentials of polynomial right-hand sides, classical and
problem-specific order conditions, plus a floating-point convergence check.
"""

from .elemdiff import derivative_tensor, elementary_differential, kronecker_decomposition_check
from .labelling import (DifferentiationPath, LabelledTree, MultiIndex, enumerate_multiindices,
                        enumerate_paths, eta, multiplicity_histogram, path_to_tree, shape_of)
from .series import exact_taylor_coeff, numerical_taylor_coeff, order_residual
from .superconv import dependency_kernel, effective_order, refined_condition
from .tableau_io import PolynomialMap, Tableau, parse_problem, parse_tableau
from .trees import (LEAF, RootedTree, TreeCoefficients, butcher_product, canonical, coefficients,
                    enumerate_trees, parse_tree)
from .weights import OrderReport, classical_order, phi, phi_vector

__version__ = "0.1.0"

__all__ = [
    "LEAF", "DifferentiationPath", "LabelledTree", "MultiIndex", "OrderReport", "PolynomialMap",
    "RootedTree", "Tableau", "TreeCoefficients", "butcher_product", "canonical", "classical_order",
    "coefficients", "dependency_kernel", "derivative_tensor", "effective_order",
    "elementary_differential", "enumerate_multiindices", "enumerate_paths", "enumerate_trees", "eta",
    "exact_taylor_coeff", "kronecker_decomposition_check", "multiplicity_histogram",
    "numerical_taylor_coeff", "order_residual", "parse_problem", "parse_tableau", "parse_tree",
    "path_to_tree", "phi", "phi_vector", "refined_condition", "shape_of",
]

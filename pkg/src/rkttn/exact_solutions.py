"""Closed-form solutions for the problems named by a problem file's ``exact`` key.

Each entry maps ``(f, y0, t) -> y(t)`` in floats, with the clock starting at 0.
Problems in autonomous form carry time as their last coordinate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

import numpy as np

from .tableau_io import PolynomialMap


def _riccati(f: PolynomialMap, y0, t):
    # y' = y^2; an extra coordinate with t' = 1 is allowed
    y = np.array(y0, dtype=float)
    y[0] = y0[0] / (1.0 - y0[0] * t)
    if len(y) == 2:
        y[1] = y0[1] + t
    return y


def _riccati_time(f: PolynomialMap, y0, t):
    # y' = t y^2, t' = 1:  1/y = 1/y0 - (t1^2 - t0^2) / 2
    y, s0 = float(y0[0]), float(y0[1])
    s1 = s0 + t
    return np.array([1.0 / (1.0 / y - (s1 * s1 - s0 * s0) / 2.0), s1])


def _lambdas(f: PolynomialMap, key: str = "lambda") -> np.ndarray:
    params = f.params or {}
    if key not in params:
        raise KeyError(f"problem params need '{key}'")
    return np.array([float(Fraction(str(x))) for x in params[key]])


def _linear(f: PolynomialMap, y0, t):
    # y' = diag(lambda) y
    return np.exp(_lambdas(f) * t) * np.asarray(y0, dtype=float)


def _shear_linear(f: PolynomialMap, y0, t):
    # z' = diag(lambda) z seen through y = S(z), S(z) = (z1 + (z2 + z1^2)^2, z2 + z1^2)
    lam = _lambdas(f)
    y1, y2 = float(y0[0]), float(y0[1])
    z1 = y1 - y2 * y2
    z2 = y2 - z1 * z1
    z1, z2 = np.exp(lam * t) * np.array([z1, z2])
    w2 = z2 + z1 * z1
    return np.array([z1 + w2 * w2, w2])


REGISTRY: dict[str, Callable] = {
    "riccati": _riccati,
    "riccati_time": _riccati_time,
    "linear": _linear,
    "shear_linear": _shear_linear,
}


def closed_form(name: str, f: PolynomialMap) -> Callable:
    """Return ``y(y0, t)`` for the registry entry ``name`` bound to ``f``."""
    try:
        fn = REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown closed-form solution {name!r}; known: {sorted(REGISTRY)}") from None
    return lambda y0, t: fn(f, y0, t)

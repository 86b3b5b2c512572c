"""Floating-point Runge-Kutta stepping and empirical order estimation."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceFailure, NumericalOverflow
from .exact_solutions import closed_form
from .tableau_io import PolynomialMap, Tableau

FIXED_POINT_RTOL = 1e-14
FIXED_POINT_MAXITER = 100
NOISE_FACTOR = 100.0


class FloatField:
    """Vectorised float evaluation of a :class:`PolynomialMap`."""

    def __init__(self, f: PolynomialMap):
        self.d = f.d
        self._terms = []
        for comp in f.components:
            if comp:
                coeffs = np.array([float(c) for c, _ in comp])
                exps = np.array([e for _, e in comp], dtype=np.int64)
            else:
                coeffs = np.zeros(0)
                exps = np.zeros((0, f.d), dtype=np.int64)
            self._terms.append((coeffs, exps))

    def __call__(self, y: np.ndarray) -> np.ndarray:
        out = np.empty(self.d)
        # overflow surfaces as inf and is reported by _finite
        with np.errstate(over="ignore", invalid="ignore"):
            for i, (coeffs, exps) in enumerate(self._terms):
                out[i] = np.dot(coeffs, np.prod(y ** exps, axis=1)) if coeffs.size else 0.0
        return out


@lru_cache(maxsize=64)
def _float_field(f: PolynomialMap) -> FloatField:
    return FloatField(f)


@lru_cache(maxsize=64)
def _float_tableau(tab: Tableau):
    A = np.array([[float(x) for x in row] for row in tab.A])
    b = np.array([float(x) for x in tab.b])
    return A, b


def _finite(y: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(y)):
        raise NumericalOverflow(f"non-finite {what}: {y}")
    return y


def rk_step(tab: Tableau, f: PolynomialMap, y: Sequence[float], h: float) -> np.ndarray:
    """One step of size ``h``.

    Explicit tableaus sweep the stages in order. Otherwise the stage
    derivatives ``K = f(y + h (A kron I) K)`` are found by fixed-point
    iteration, which suits small ``h`` on non-stiff problems only.
    """
    if not h > 0:
        raise ValueError(f"step size must be positive, got {h}")
    field_ = _float_field(f)
    A, b = _float_tableau(tab)
    y = _finite(np.asarray(y, dtype=float), "state")
    s = tab.s
    K = np.zeros((s, f.d))
    if tab.is_explicit:
        for i in range(s):
            K[i] = _finite(field_(y + h * (A[i, :i] @ K[:i])), "stage derivative")
    else:
        for i in range(s):
            K[i] = field_(y)
        trace = []
        for _ in range(FIXED_POINT_MAXITER):
            new = np.array([field_(y + h * (A[i] @ K)) for i in range(s)])
            _finite(new, "stage derivative")
            delta = np.max(np.abs(new - K))
            scale = max(np.max(np.abs(new)), 1.0)
            trace.append(float(delta / scale))
            K = new
            if delta <= FIXED_POINT_RTOL * scale:
                break
        else:
            raise ConvergenceFailure(
                f"stage fixed point did not converge in {FIXED_POINT_MAXITER} iterations "
                f"(last relative change {trace[-1]:.3e}); reduce h", trace)
    return _finite(y + h * (b @ K), "state")


def integrate(tab: Tableau, f: PolynomialMap, y0: Sequence[float], t_end: float, n_steps: int) -> np.ndarray:
    """``n_steps`` equal steps from 0 to ``t_end``."""
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    h = float(t_end) / n_steps
    y = np.asarray([float(x) for x in y0])
    for _ in range(n_steps):
        y = rk_step(tab, f, y, h)
    return y


@dataclass
class ConvergenceEstimate:
    h: list[float]
    errors: list[float]
    slopes: list[float | None]
    order: float | None
    reference: str
    degenerate: bool = False
    notes: list[str] = field(default_factory=list)


def empirical_order(tab: Tableau, f: PolynomialMap, y0: Sequence, t_end, h_list: Sequence,
                    reference: str | None = None) -> ConvergenceEstimate:
    """Observed convergence order from max-norm errors at ``t_end``.

    ``reference`` names a closed-form solution; ``None`` uses ``f.exact`` if
    set, otherwise integration at ``min(h) / 64``. Each ``h`` must divide
    ``t_end`` into a whole number of steps (within rounding).
    """
    hs = [float(Fraction(h)) if isinstance(h, (str, Fraction)) else float(h) for h in h_list]
    if len(hs) < 3:
        raise ValueError("need at least three step sizes")
    if any(b >= a for a, b in zip(hs, hs[1:])):
        raise ValueError("step sizes must be strictly decreasing")
    t_end = float(t_end)
    y0f = np.asarray([float(x) for x in y0])
    name = reference if reference is not None else f.exact
    if name:
        exact: Callable = closed_form(name, f)
        y_ref = np.asarray(exact(y0f, t_end))
        ref_label = f"closed form '{name}'"
    else:
        n_fine = round(t_end / (hs[-1] / 64))
        y_ref = integrate(tab, f, y0f, t_end, n_fine)
        ref_label = f"tiny step h={t_end / n_fine:.3e}"
    errors = []
    for h in hs:
        n = round(t_end / h)
        if n < 1 or not math.isclose(n * h, t_end, rel_tol=1e-12):
            raise ValueError(f"step {h} does not divide t_end={t_end}")
        errors.append(float(np.max(np.abs(integrate(tab, f, y0f, t_end, n) - y_ref))))
    floor = NOISE_FACTOR * np.finfo(float).eps * max(1.0, float(np.max(np.abs(y_ref))))
    slopes: list[float | None] = []
    for (h1, e1), (h2, e2) in zip(zip(hs, errors), zip(hs[1:], errors[1:])):
        if e1 > floor and e2 > floor:
            slopes.append(math.log(e1 / e2) / math.log(h1 / h2))
        else:
            slopes.append(None)
    valid = [s for s in slopes if s is not None]
    est = ConvergenceEstimate(hs, errors, slopes, statistics.median(valid) if valid else None, ref_label)
    if not valid:
        est.degenerate = True
        est.notes.append("all errors at or below the rounding floor; no slope available")
    return est

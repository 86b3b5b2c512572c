"""Reading and writing Butcher tableaus and polynomial ODE problems.

All numeric entries become :class:`fractions.Fraction`. Accepted spellings are
integers, ``"p/q"`` and finite decimals (``"0.125"``, ``"1e-3"``), each taken
literally.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import ParseError, ValidationError

Rational = Fraction


def to_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(where, f"expected a number, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ValidationError(where, f"zero denominator in {value!r}") from None
        except ValueError:
            raise ValidationError(where, f"not an exact rational: {value!r}") from None
    raise ValidationError(where, f"expected a string or integer, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    return str(q)


def _load_json(text: bytes | str) -> Any:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    try:
        # keep decimal literals as text so they are converted exactly
        return json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _as_list(obj: Any, where: str) -> list:
    if not isinstance(obj, list):
        raise ValidationError(where, "expected a list")
    return obj


# -- tableau -----------------------------------------------------------------


@dataclass(frozen=True)
class Tableau:
    """An s-stage Butcher tableau with exact entries (hashable)."""

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        s = len(self.b)
        if len(self.A) != s or any(len(row) != s for row in self.A):
            raise ValidationError("A", "A must be square with side len(b)")
        if len(self.c) != s:
            raise ValidationError("c", f"expected {s} entries, got {len(self.c)}")

    @property
    def s(self) -> int:
        return len(self.b)

    @property
    def is_explicit(self) -> bool:
        return all(self.A[i][j] == 0 for i in range(self.s) for j in range(i, self.s))

    @classmethod
    def from_entries(cls, A: Sequence[Sequence[Any]], b: Sequence[Any],
                     c: Sequence[Any] | None = None, name: str = "") -> "Tableau":
        """Build from anything ``to_rational`` accepts; ``c`` defaults to row sums."""
        A_ = tuple(tuple(to_rational(x, f"A[{i}][{j}]") for j, x in enumerate(row))
                   for i, row in enumerate(A))
        b_ = tuple(to_rational(x, f"b[{i}]") for i, x in enumerate(b))
        if c is None:
            c_ = tuple(sum(row, Fraction(0)) for row in A_)
        else:
            c_ = tuple(to_rational(x, f"c[{i}]") for i, x in enumerate(c))
        return cls(A_, b_, c_, name)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "A": [[str(x) for x in row] for row in self.A],
            "b": [str(x) for x in self.b],
            "c": [str(x) for x in self.c],
        }


def parse_tableau(text: bytes | str, name: str = "") -> Tableau:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise ValidationError("<root>", "expected a JSON object")
    for key in ("A", "b"):
        if key not in doc:
            raise ValidationError(key, "missing")
    A = _as_list(doc["A"], "A")
    b = _as_list(doc["b"], "b")
    s = doc.get("s", len(b))
    if not isinstance(s, int) or isinstance(s, bool) or s < 1:
        raise ValidationError("s", f"must be a positive integer, got {s!r}")
    if len(A) != s or any(not isinstance(row, list) or len(row) != len(A) for row in A):
        raise ValidationError("A", "A must be square")
    if len(A) != s:
        raise ValidationError("A", f"expected {s} rows, got {len(A)}")
    if len(b) != s:
        raise ValidationError("b", f"expected {s} entries, got {len(b)}")
    c = doc.get("c")
    if c is not None:
        c = _as_list(c, "c")
        if len(c) != s:
            raise ValidationError("c", f"expected {s} entries, got {len(c)}")
    tab = Tableau.from_entries(A, b, c, name=name)
    if c is not None:
        sums = [sum(row, Fraction(0)) for row in tab.A]
        bad = [i for i in range(s) if sums[i] != tab.c[i]]
        if bad:
            warnings.warn(f"c differs from the row sums of A at stages {bad}; keeping the given c",
                          stacklevel=2)
    return tab


def serialize_tableau(tab: Tableau) -> str:
    return json.dumps(tab.to_dict())


def format_butcher(tab: Tableau) -> str:
    """Human-readable ``c | A`` over ``| b`` layout (display only)."""
    cells = [[str(tab.c[i])] + [str(x) if (x != 0 or j < i) else "" for j, x in enumerate(tab.A[i])]
             for i in range(tab.s)]
    bottom = [""] + [str(x) for x in tab.b]
    width = max(len(x) for row in cells + [bottom] for x in row)
    lines = [" | ".join([row[0].rjust(width), " ".join(x.rjust(width) for x in row[1:])]).rstrip()
             for row in cells]
    lines.append("-" * max(len(x) for x in lines))
    lines.append(" | ".join([bottom[0].rjust(width), " ".join(x.rjust(width) for x in bottom[1:])]))
    return "\n".join(lines)


# -- polynomial problems -----------------------------------------------------


Monomial = tuple[Fraction, tuple[int, ...]]


@dataclass(frozen=True)
class PolynomialMap:
    """Right-hand side ``f: Q^d -> Q^d`` given as ``d`` polynomials.

    ``components[i]`` is a tuple of ``(coeff, exponents)`` with distinct
    exponent vectors, sorted. The optional problem metadata (``y0``,
    ``t_end``, ``exact``, ``params``) rides along but does not take part in
    equality, so caches keyed on the map are shared across start points.
    """

    d: int
    components: tuple[tuple[Monomial, ...], ...]
    y0: tuple[Fraction, ...] | None = field(default=None, compare=False)
    t_end: Fraction | None = field(default=None, compare=False)
    exact: str | None = field(default=None, compare=False)
    params: dict | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if len(self.components) != self.d:
            raise ValidationError("components", f"expected {self.d} components, got {len(self.components)}")
        for i, comp in enumerate(self.components):
            for _, e in comp:
                if len(e) != self.d:
                    raise ValidationError(f"components[{i}]", f"exponent vector {list(e)} has length != d={self.d}")

    @property
    def degree(self) -> int:
        return max((sum(e) for comp in self.components for c, e in comp if c != 0), default=0)

    @classmethod
    def from_terms(cls, d: int, components: Sequence[Sequence[tuple[Any, Sequence[int]]]], **meta) -> "PolynomialMap":
        """Merge duplicate exponents, drop zero terms, sort each component."""
        comps = []
        for i, comp in enumerate(components):
            merged: dict[tuple[int, ...], Fraction] = {}
            for k, (coeff, exps) in enumerate(comp):
                e = tuple(int(x) for x in exps)
                if any(x < 0 for x in e):
                    raise ValidationError(f"components[{i}][{k}].exponents", "exponents must be non-negative")
                merged[e] = merged.get(e, Fraction(0)) + to_rational(coeff, f"components[{i}][{k}].coeff")
            comps.append(tuple(sorted(((c, e) for e, c in merged.items() if c != 0),
                                      key=lambda m: m[1])))
        return cls(d, tuple(comps), **meta)

    def __call__(self, y: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Evaluate exactly (works for any numeric type supporting ``*`` and ``**``)."""
        if len(y) != self.d:
            raise ValueError(f"point has length {len(y)}, expected {self.d}")
        out = []
        for comp in self.components:
            acc = 0
            for coeff, e in comp:
                term = coeff
                for yj, k in zip(y, e):
                    if k:
                        term = term * yj**k
                acc = acc + term
            out.append(acc)
        return tuple(out)

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {
            "d": self.d,
            "components": [[{"coeff": str(c), "exponents": list(e)} for c, e in comp]
                           for comp in self.components],
        }
        if self.y0 is not None:
            doc["y0"] = [str(x) for x in self.y0]
        if self.t_end is not None:
            doc["t_end"] = str(self.t_end)
        if self.exact is not None:
            doc["exact"] = self.exact
        if self.params is not None:
            doc["params"] = self.params
        return doc


def parse_problem(text: bytes | str) -> PolynomialMap:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise ValidationError("<root>", "expected a JSON object")
    d = doc.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ValidationError("d", f"must be a positive integer, got {d!r}")
    comps = _as_list(doc.get("components"), "components")
    if len(comps) != d:
        raise ValidationError("components", f"expected {d} components, got {len(comps)}")
    terms = []
    for i, comp in enumerate(comps):
        comp = _as_list(comp, f"components[{i}]")
        if not comp:
            raise ValidationError(f"components[{i}]", "component is empty (write a zero monomial explicitly)")
        row = []
        for k, mono in enumerate(comp):
            if not isinstance(mono, dict) or "coeff" not in mono or "exponents" not in mono:
                raise ValidationError(f"components[{i}][{k}]", "monomial needs 'coeff' and 'exponents'")
            exps = _as_list(mono["exponents"], f"components[{i}][{k}].exponents")
            if len(exps) != d:
                raise ValidationError(f"components[{i}][{k}].exponents",
                                      f"length {len(exps)} != d={d}")
            if any(not isinstance(x, int) or isinstance(x, bool) for x in exps):
                raise ValidationError(f"components[{i}][{k}].exponents", "exponents must be integers")
            row.append((mono["coeff"], exps))
        terms.append(row)
    y0 = doc.get("y0")
    if y0 is not None:
        y0 = _as_list(y0, "y0")
        if len(y0) != d:
            raise ValidationError("y0", f"expected {d} entries, got {len(y0)}")
        y0 = tuple(to_rational(x, f"y0[{i}]") for i, x in enumerate(y0))
    t_end = doc.get("t_end")
    if t_end is not None:
        t_end = to_rational(t_end, "t_end")
    exact = doc.get("exact")
    if exact is not None and not isinstance(exact, str):
        raise ValidationError("exact", "must be a registry name")
    params = doc.get("params")
    if params is not None and not isinstance(params, dict):
        raise ValidationError("params", "must be an object")
    return PolynomialMap.from_terms(d, terms, y0=y0, t_end=t_end, exact=exact, params=params)


def serialize_problem(f: PolynomialMap) -> str:
    return json.dumps(f.to_dict())

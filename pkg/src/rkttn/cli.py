"""Command-line entry point: ``rkttn <command> [options]``.

Every command builds a JSON-able payload first and renders text from it, so
``--json`` and the text output always carry the same numbers. Exact values
are printed as ``p/q``; only ``converge`` prints floats.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import fixtures
from .elemdiff import elementary_differential
from .errors import ConvergenceFailure, NumericalOverflow, ParseError, ValidationError
from .integrator import empirical_order
from .labelling import MAX_PATH_LENGTH, multiplicity_histogram
from .series import MAX_SERIES_ORDER, exact_terms, numerical_taylor_coeff, order_residual
from .superconv import MAX_REFINED_ORDER, dependency_kernel, draw_samples, effective_order
from .tableau_io import PolynomialMap, Tableau, format_butcher, parse_problem, parse_tableau, to_rational
from .trees import coefficients, enumerate_trees, parse_tree
from .weights import classical_order, gamma_phi, phi, phi_vector

DEFAULT_H = "1/8,1/16,1/32,1/64,1/128"


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    exit_code: int
    text: str
    payload: dict | None = None


# -- helpers -----------------------------------------------------------------


def _q(x: Fraction) -> str:
    return str(x)


def _vec(v) -> str:
    return "[" + ", ".join(_q(x) for x in v) + "]"


def _resolve(name: str) -> Path:
    path = Path(name)
    if path.is_file():
        return path
    try:
        return fixtures.fixture_path(path.name)
    except FileNotFoundError:
        raise FileNotFoundError(f"{name}: no such file (bundled fixtures: {', '.join(fixtures.available())})") from None


def _load_tableau(name: str) -> Tableau:
    path = _resolve(name)
    return parse_tableau(path.read_bytes(), name=path.stem)


def _load_problem(name: str) -> PolynomialMap:
    return parse_problem(_resolve(name).read_bytes())


def _point(f: PolynomialMap, at: str | None) -> tuple[Fraction, ...]:
    if at is None:
        if f.y0 is None:
            raise UsageError("problem has no y0; pass --at")
        return f.y0
    parts = [p for p in at.split(",") if p.strip()]
    y = tuple(to_rational(p, f"--at[{i}]") for i, p in enumerate(parts))
    if len(y) != f.d:
        raise ValidationError("--at", f"{len(y)} entries, problem dimension is {f.d}")
    return y


def _tree_arg(text: str):
    try:
        return parse_tree(text)
    except ValueError as exc:
        raise ValidationError("--tree", str(exc)) from None


class _Style:
    def __init__(self, enabled: bool):
        self.enabled = enabled

    def bold(self, s: str) -> str:
        return f"\x1b[1m{s}\x1b[0m" if self.enabled else s


# -- commands ----------------------------------------------------------------


def cmd_trees(args, style: _Style) -> tuple[dict, str]:
    forest = enumerate_trees(args.max_order)
    rows = []
    for p, trees in forest.items():
        for t in trees:
            c = coefficients(t)
            rows.append({"tree": t.encoding, "order": c.order, "sigma": c.sigma,
                         "gamma": c.gamma, "alpha": c.alpha})
    width = max(len(r["tree"]) for r in rows)
    text = "\n".join(f"{r['tree']:<{width}}  order={r['order']} sigma={r['sigma']} "
                     f"gamma={r['gamma']} alpha={r['alpha']}" for r in rows)
    return {"command": "trees", "max_order": args.max_order, "trees": rows}, text


def cmd_paths(args, style: _Style) -> tuple[dict, str]:
    hist = multiplicity_histogram(args.k)
    rows = [{"tree": t.encoding, "count": n} for t, n in hist.items()]
    width = max(len(r["tree"]) for r in rows)
    total = sum(hist.values())
    text = "\n".join(f"{r['tree']:<{width}}  {r['count']}" for r in rows)
    text += f"\ntotal: {total} paths for k={args.k}"
    return {"command": "paths", "k": args.k, "total": total, "histogram": rows}, text


def cmd_weights(args, style: _Style) -> tuple[dict, str]:
    tab = _load_tableau(args.tableau)
    tree = _tree_arg(args.tree)
    c = coefficients(tree)
    payload = {
        "command": "weights",
        "tree": tree.encoding,
        "stage_weights": [_q(x) for x in phi_vector(tree, tab).values],
        "phi": _q(phi(tree, tab)),
        "gamma": c.gamma,
        "gamma_phi": _q(gamma_phi(tree, tab)),
    }
    text = "\n".join([
        f"tree: {payload['tree']}",
        f"Phi: [{', '.join(payload['stage_weights'])}]",
        f"phi: {payload['phi']}",
        f"gamma: {payload['gamma']}",
        f"gamma*phi: {payload['gamma_phi']}",
    ])
    return payload, text


def cmd_check_order(args, style: _Style) -> tuple[dict, str]:
    tab = _load_tableau(args.tableau)
    rep = classical_order(tab, args.max_order)
    payload = {
        "command": "check-order",
        "order": rep.order_label,
        "saturated": rep.saturated,
        "failing": [{"tree": t.encoding, "gamma_phi": _q(v)} for t, v in rep.failing],
    }
    lines = [style.bold(f"order: {payload['order']}")]
    if rep.failing:
        lines.append(f"failing trees at order {rep.classical_order + 1}:")
        lines += [f"  {r['tree']}  gamma*phi={r['gamma_phi']}" for r in payload["failing"]]
    return payload, "\n".join(lines)


def cmd_elemdiff(args, style: _Style) -> tuple[dict, str]:
    f = _load_problem(args.problem)
    tree = _tree_arg(args.tree)
    y = _point(f, args.at)
    value = elementary_differential(tree, f, y).value
    payload = {"command": "elemdiff", "tree": tree.encoding, "at": [_q(x) for x in y],
               "value": [_q(x) for x in value]}
    text = f"T(f)({', '.join(payload['at'])}) for {tree.encoding}:\n[{', '.join(payload['value'])}]"
    return payload, text


def cmd_expand(args, style: _Style) -> tuple[dict, str]:
    f = _load_problem(args.problem)
    tab = _load_tableau(args.tableau) if args.tableau else None
    y = _point(f, args.at)
    k = args.order
    rows = []
    for term in exact_terms(k, f, y):
        c = coefficients(term.tree)
        row: dict[str, Any] = {"tree": term.tree.encoding, "alpha": c.alpha, "gamma": c.gamma}
        if tab is not None:
            row["phi"] = _q(phi(term.tree, tab))
        row["value"] = [_q(x) for x in term.value]
        rows.append(row)
    exact = [sum((Fraction(r["alpha"]) * Fraction(v[i]) for r in rows for v in [r["value"]]), Fraction(0))
             for i in range(f.d)]
    kf = math.factorial(k)
    payload: dict[str, Any] = {
        "command": "expand", "order": k, "at": [_q(x) for x in y], "terms": rows,
        "exact_derivative": [_q(x) for x in exact],
        "exact_taylor_coefficient": [_q(x / kf) for x in exact],
    }
    width = max(len(r["tree"]) for r in rows)
    lines = []
    for r in rows:
        extra = f" phi={r['phi']}" if "phi" in r else ""
        lines.append(f"{r['tree']:<{width}}  alpha={r['alpha']} gamma={r['gamma']}{extra} "
                     f"value=[{', '.join(r['value'])}]")
    lines.append(f"y^({k}) = [{', '.join(payload['exact_derivative'])}]")
    lines.append(f"y^({k})/{k}! = [{', '.join(payload['exact_taylor_coefficient'])}]")
    if tab is not None:
        num = numerical_taylor_coeff(k, tab, f, y)
        res = order_residual(k, tab, f, y)
        payload["numerical_derivative"] = [_q(x) for x in num]
        payload["numerical_taylor_coefficient"] = [_q(x / kf) for x in num]
        payload["residual"] = [_q(x) for x in res]
        lines.append(f"y1^({k}) = [{', '.join(payload['numerical_derivative'])}]")
        lines.append(f"y1^({k})/{k}! = [{', '.join(payload['numerical_taylor_coefficient'])}]")
        lines.append(f"residual = [{', '.join(payload['residual'])}]")
    return payload, "\n".join(lines)


def cmd_superconv(args, style: _Style) -> tuple[dict, str]:
    tab = _load_tableau(args.tableau)
    f = _load_problem(args.problem)
    rep = effective_order(tab, f, args.max_order, args.samples, args.seed)
    payload: dict[str, Any] = {
        "command": "superconv",
        "classical": rep.order_label,
        "effective": rep.effective_label,
        "seed": rep.seed,
        "samples": rep.sample_count,
        "orders": [{"order": j, "status": rep.statuses[j], "max_abs_residual": _q(rep.residual_norms[j]),
                    "degree_bound": rep.degree_bounds[j]} for j in sorted(rep.statuses)],
        "failing_classical": [{"tree": t.encoding, "gamma_phi": _q(v)} for t, v in rep.failing],
        "notes": list(rep.notes),
    }
    lines = [style.bold(f"classical: {payload['classical']}, effective: {payload['effective']}"),
             f"seed: {rep.seed}, samples: {rep.sample_count}"]
    for o in payload["orders"]:
        lines.append(f"  order {o['order']}: {o['status']}  max|r|={o['max_abs_residual']}  "
                     f"degree<={o['degree_bound']}")
    if payload["failing_classical"]:
        lines.append(f"classical conditions failing at order {rep.classical_order + 1}:")
        lines += [f"  {r['tree']}  gamma*phi={r['gamma_phi']}" for r in payload["failing_classical"]]
    if args.kernel:
        samples = draw_samples(f, args.samples, args.seed)
        kernels = []
        for j in range(1, args.max_order + 1):
            dep = dependency_kernel(j, f, samples)
            basis = [{t.encoding: _q(x) for t, x in zip(dep.trees, v) if x} for v in dep.kernel_basis]
            kernels.append({"order": j, "n_trees": dep.n_trees, "rank": dep.rank, "basis": basis})
            lines.append(f"kernel order {j}: rank {dep.rank} of {dep.n_trees}, dimension {len(basis)}")
            for v in basis:
                lines.append("  " + " ".join(f"{x}*{t}" for t, x in v.items()))
        payload["kernels"] = kernels
    for note in rep.notes:
        lines.append(f"note: {note}")
    return payload, "\n".join(lines)


def cmd_converge(args, style: _Style) -> tuple[dict, str]:
    tab = _load_tableau(args.tableau)
    f = _load_problem(args.problem)
    y0 = _point(f, args.at)
    t_end = to_rational(args.t_end, "--t-end") if args.t_end is not None else f.t_end
    if t_end is None:
        raise UsageError("problem has no t_end; pass --t-end")
    hs = [to_rational(h, "--h") for h in args.h.split(",") if h.strip()]
    est = empirical_order(tab, f, y0, t_end, hs, reference=args.reference)
    payload = {
        "command": "converge",
        "reference": est.reference,
        "h": est.h,
        "errors": est.errors,
        "slopes": est.slopes,
        "order": est.order,
        "degenerate": est.degenerate,
        "notes": est.notes,
    }
    lines = [f"reference: {est.reference}", f"{'h':>24}  {'error':>24}  {'slope':>20}"]
    for i, (h, e) in enumerate(zip(est.h, est.errors)):
        s = "" if i == 0 else ("-" if est.slopes[i - 1] is None else repr(est.slopes[i - 1]))
        lines.append(f"{h!r:>24}  {e!r:>24}  {s:>20}")
    lines.append(style.bold(f"order: {'degenerate' if est.order is None else repr(est.order)}"))
    lines += [f"note: {n}" for n in est.notes]
    return payload, "\n".join(lines)


# -- parser ------------------------------------------------------------------


MAX_TREE_ORDER = 12


def _int_in(lo: int, hi: int | None = None) -> Callable[[str], int]:
    def convert(text: str) -> int:
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
        if n < lo or (hi is not None and n > hi):
            raise argparse.ArgumentTypeError(f"{n} is outside {lo}..{'' if hi is None else hi}")
        return n
    return convert


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit structured JSON instead of text")

    parser = argparse.ArgumentParser(prog="rkttn", description="Runge-Kutta order analysis with tree contractions.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    parser.set_defaults(by_name={})

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=fn)
        parser.get_default("by_name")[name] = p
        return p

    p = add("trees", cmd_trees, "list rooted trees with order, sigma, gamma and alpha")
    p.add_argument("--max-order", type=_int_in(1, MAX_TREE_ORDER), required=True)

    p = add("paths", cmd_paths, "histogram of differentiation paths by tree shape")
    p.add_argument("--k", type=_int_in(1, MAX_PATH_LENGTH), required=True)

    p = add("weights", cmd_weights, "elementary weight of one tree for a tableau")
    p.add_argument("--tableau", required=True)
    p.add_argument("--format", choices=["plain", "butcher"], default="plain",
                   help="butcher: also show the tableau as a c | A / b table")
    p.add_argument("--tree", required=True)

    p = add("check-order", cmd_check_order, "classical order of a tableau")
    p.add_argument("--tableau", required=True)
    p.add_argument("--format", choices=["plain", "butcher"], default="plain",
                   help="butcher: also show the tableau as a c | A / b table")
    p.add_argument("--max-order", type=_int_in(1, MAX_TREE_ORDER), default=6)

    p = add("elemdiff", cmd_elemdiff, "elementary differential of a tree for a problem")
    p.add_argument("--problem", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--at", help="comma-separated point, default: the problem's y0")

    p = add("expand", cmd_expand, "order-K Taylor terms of the exact flow (and of an RK step)")
    p.add_argument("--problem", required=True)
    p.add_argument("--tableau")
    p.add_argument("--format", choices=["plain", "butcher"], default="plain",
                   help="butcher: also show the tableau as a c | A / b table")
    p.add_argument("--order", type=_int_in(1, MAX_SERIES_ORDER), required=True)
    p.add_argument("--at")

    p = add("superconv", cmd_superconv, "problem-specific (effective) order of a tableau")
    p.add_argument("--tableau", required=True)
    p.add_argument("--format", choices=["plain", "butcher"], default="plain",
                   help="butcher: also show the tableau as a c | A / b table")
    p.add_argument("--problem", required=True)
    p.add_argument("--max-order", type=_int_in(1, MAX_REFINED_ORDER), default=6)
    p.add_argument("--samples", type=_int_in(1), default=20)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--kernel", action="store_true", help="also print dependency kernels")

    p = add("converge", cmd_converge, "empirical convergence order by step halving")
    p.add_argument("--tableau", required=True)
    p.add_argument("--format", choices=["plain", "butcher"], default="plain",
                   help="butcher: also show the tableau as a c | A / b table")
    p.add_argument("--problem", required=True)
    p.add_argument("--h", default=DEFAULT_H, help=f"comma-separated step sizes (default {DEFAULT_H})")
    p.add_argument("--t-end")
    p.add_argument("--at")
    p.add_argument("--reference", help="closed-form registry name overriding the problem's 'exact'")
    return parser


def run(argv: list[str], color: bool = False) -> CommandResult:
    """Execute one command and capture its output instead of printing it."""
    parser = build_parser()
    out, err = io.StringIO(), io.StringIO()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return CommandResult(code, (out.getvalue() + err.getvalue()).rstrip("\n"))
    style = _Style(color and not args.json)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            payload, text = args.func(args, style)
            if getattr(args, "format", "plain") == "butcher" and args.tableau:
                text = f"{format_butcher(_load_tableau(args.tableau))}\n\n{text}"
        for w in caught:
            text = f"warning: {w.message}\n{text}"
    except UsageError as exc:
        usage = args.by_name[args.command].format_usage()
        return CommandResult(2, f"{usage}rkttn {args.command}: error: {exc}")
    except (ParseError, ValidationError, ConvergenceFailure, NumericalOverflow, FileNotFoundError,
            ValueError, OverflowError, ZeroDivisionError) as exc:
        return CommandResult(1, f"error: {exc}")
    if args.json:
        return CommandResult(0, json.dumps(payload, indent=2), payload)
    return CommandResult(0, text, payload)


def main(argv: list[str] | None = None) -> int:
    color = sys.stdout.isatty() and "NO_COLOR" not in os.environ
    result = run(sys.argv[1:] if argv is None else argv, color=color)
    stream = sys.stdout if result.exit_code == 0 else sys.stderr
    if result.text:
        print(result.text, file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

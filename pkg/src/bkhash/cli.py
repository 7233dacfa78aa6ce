"""Command-line front end (``bkhash``).

Exit codes: 0 success, 1 a verified code fails the hash property, 2 bad
parameters or input, 3 a recomputed table cell disagrees with its published
value.
"""

from __future__ import annotations

import argparse
import ast
import configparser
import csv
import dataclasses
import io
import json
import math
import operator
import sys
from pathlib import Path

import numpy as np

from .classic import BoundReport, conjecture_bound, dvj_bound, fk_bound, km_bound
from .cluster import (
    resolve_parameters,
    cluster_rate_bound,
    compute_cluster_matrix,
    epsilon_sweep,
    maximize_reduced_form,
    psi_max_bound,
)
from .codes import format_word, max_code_search, read_code, verify_hash_code
from .kernel import KernelContext
from .optimize import SearchConfig, psi_max_global
from .simplex import ParameterError, PartitionKind
from .tables import TABLE_DIGITS, compute_table, manifest, render_table, round_up

METHODS = ("fk", "km", "dvj", "conjecture", "psimax", "cluster-max", "cluster-min")
EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_MISMATCH = 0, 1, 2, 3

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_number(text: str) -> float:
    """Evaluate a small arithmetic expression such as ``9/100`` or ``(4+sqrt(5))/44``."""

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id == "sqrt"
            and len(node.args) == 1
            and not node.keywords
        ):
            return math.sqrt(ev(node.args[0]))
        raise ValueError

    try:
        return float(ev(ast.parse(text.strip(), mode="eval").body))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or simple expression: {text!r}") from None


def load_config(path: str | None, args: argparse.Namespace) -> SearchConfig:
    """Defaults, then ``key = value`` lines from a file, then command-line flags."""
    values: dict = {}
    fields = {f.name: f.type for f in dataclasses.fields(SearchConfig)}
    if path:
        parser = configparser.ConfigParser()
        try:
            parser.read_string("[search]\n" + Path(path).read_text())
        except (OSError, configparser.Error) as exc:
            raise ParameterError(f"cannot read config {path}: {exc}") from None
        for key, raw in parser["search"].items():
            key = key.replace("-", "_")
            if key not in fields:
                raise ParameterError(f"unknown config key {key!r}")
            conv = int if fields[key] in (int, "int") else float
            try:
                values[key] = conv(raw)
            except ValueError:
                raise ParameterError(f"bad value for {key}: {raw!r}") from None
    for flag, key in (("seed", "seed"), ("restarts", "restarts"), ("grid", "grid_denominator")):
        if getattr(args, flag, None) is not None:
            values[key] = getattr(args, flag)
    return SearchConfig(**values)


def _json_default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, PartitionKind):
        return obj.value
    raise TypeError(type(obj).__name__)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, default=_json_default) + "\n"


def _rows_out(headers: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(headers)
        w.writerows(rows)
        return buf.getvalue()
    out = ["| " + " | ".join(headers) + " |", "|---" * len(headers) + "|"]
    out += ["| " + " | ".join(str(x) for x in r) + " |" for r in rows]
    return "\n".join(out) + "\n"


def _flat(d: dict, prefix: str = "") -> list[tuple[str, object]]:
    out = []
    for key, val in d.items():
        if isinstance(val, dict):
            out += _flat(val, f"{prefix}{key}.")
        elif key != "witnesses" and not isinstance(val, (list, tuple)):
            out.append((f"{prefix}{key}", val))
    return out


def _kind(method: str) -> PartitionKind:
    return PartitionKind.MAX if method == "cluster-max" else PartitionKind.MIN


def compute_bound(args, cfg: SearchConfig) -> BoundReport:
    m, b, k = args.method, args.b, args.k
    if m == "fk":
        return fk_bound(b, k)
    if m == "km":
        rng = (args.j_min, args.j_max) if args.j_min is not None or args.j_max is not None else None
        if rng is not None:
            rng = (rng[0] if rng[0] is not None else 0, rng[1] if rng[1] is not None else k - 2)
        return km_bound(b, k, rng)
    if m == "dvj":
        return dvj_bound(b, k)
    if m == "conjecture":
        return conjecture_bound(b, k)
    if m == "psimax":
        return psi_max_bound(b, k, args.j, cfg)
    return cluster_rate_bound(b, k, _kind(m), args.eps, cfg, args.j, args.relaxed)


def _report_out(reports: list[BoundReport], args, cfg) -> str:
    if args.format == "json":
        return _dump({"manifest": manifest(cfg), "reports": [r.as_dict() for r in reports]})
    headers = ["method", "b", "k", "j", "epsilon", "bound"]
    rows = [
        [r.method, r.params.b, r.params.k, r.params.j, "" if r.params.epsilon is None else repr(r.params.epsilon),
         round_up(r.value, args.precision)]
        for r in reports
    ]
    text = _rows_out(headers, rows, args.format)
    if args.format == "md":
        notes = sorted({n for r in reports for n in r.notes})
        text += "".join(f"\nnote: {n}" for n in notes) + ("\n" if notes else "")
        if args.verbose:
            for r in reports:
                text += "\n" + _rows_out(["quantity", "value"], [list(kv) for kv in _flat(r.intermediates)], "md")
    return text


def cmd_bound(args, cfg) -> int:
    sys.stdout.write(_report_out([compute_bound(args, cfg)], args, cfg))
    return EXIT_OK


def cmd_psi_max(args, cfg) -> int:
    j = args.j if args.j is not None else (args.k - 2 if args.k is not None else None)
    if j is None:
        raise ParameterError("psi-max needs --j or --k")
    w = psi_max_global(KernelContext(args.b, j), cfg)
    if args.format == "json":
        sys.stdout.write(_dump({"manifest": manifest(cfg), "b": args.b, "j": j, **w.as_dict()}))
    else:
        rows = [[args.b, j, round_up(w.value, args.precision), w.method.value]]
        text = _rows_out(["b", "j", "psi_max", "method"], rows, args.format)
        if args.verbose and args.format == "md":
            text += f"\np = {np.asarray(w.p).tolist()}\nq = {np.asarray(w.q).tolist()}\n"
        sys.stdout.write(text)
    return EXIT_OK


def cmd_cluster(args, cfg) -> int:
    kind = _kind(args.method)
    eps, j = resolve_parameters(kind, args.b, args.k, args.eps, args.j)
    cm = compute_cluster_matrix(kind, args.b, j, eps, cfg, args.relaxed)
    red = maximize_reduced_form(cm)
    alt = maximize_reduced_form(cm, cross_factor=1)
    if args.format == "json":
        doc = {"manifest": manifest(cfg), "matrix": cm.as_dict(), "M": red.M, "eta": red.eta,
               "M_cross_factor_1": alt.M}
        sys.stdout.write(_dump(doc))
        return EXIT_OK
    p = args.precision
    rows = [[f"M{i}", round_up(v, p)] for i, v in enumerate(cm.values, 1)]
    rows += [["M", round_up(red.M, p)], ["eta0", f"{red.eta0:.{p}f}"],
             ["active unbalanced cells", red.support_pattern[1]]]
    if args.verbose:
        rows.append(["M (cross factor 1)", round_up(alt.M, p)])
        for i, w in enumerate(cm.witnesses, 1):
            rows.append([f"M{i} witness p", np.asarray(w.p).round(p).tolist()])
            rows.append([f"M{i} witness q", np.asarray(w.q).round(p).tolist()])
    sys.stdout.write(_rows_out(["quantity", "value"], rows, args.format))
    return EXIT_OK


def cmd_sweep(args, cfg) -> int:
    kind = _kind(args.method)
    grid = list(args.eps_grid)
    if args.eps_range:
        lo, hi, steps = args.eps_range
        steps = int(steps)
        if steps < 1:
            raise ParameterError("sweep needs at least one step")
        grid += [lo + (hi - lo) * i / max(steps - 1, 1) for i in range(steps)]
    res = epsilon_sweep(args.b, args.k, kind, args.j, grid, cfg)
    if args.format == "json":
        best = res.best
        doc = {"manifest": manifest(cfg), "reports": [r.as_dict() for r in res.reports],
               "best_epsilon": None if best is None else best.params.epsilon}
        sys.stdout.write(_dump(doc))
        return EXIT_OK
    rows = [[repr(r.params.epsilon), round_up(r.intermediates["M"], args.precision),
             round_up(r.value, args.precision), "*" if r is res.best else ""] for r in res.reports]
    sys.stdout.write(_rows_out(["epsilon", "M", "bound", "best"], rows, args.format))
    return EXIT_OK


def cmd_table(args, cfg) -> int:
    table = compute_table(args.which, cfg, args.workers)
    digits = args.precision if args.precision is not None else TABLE_DIGITS
    sys.stdout.write(render_table(table, args.format, digits))
    if table.mismatches:
        print("mismatch: " + ", ".join(f"({b},{k}) {c}" for b, k, c in table.mismatches), file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    code = read_code(args.path)
    v = verify_hash_code(code, args.k)
    if args.format == "json":
        sys.stdout.write(_dump({"b": code.b, "n": code.n, "size": len(code), "k": args.k, "holds": v.holds,
                                "counterexample": v.counterexample}))
    else:
        print(f"({code.b},{args.k})-hash property holds for {len(code)} words" if v.holds
              else "counterexample: " + " ".join(format_word(w, code.b) for w in v.counterexample))
    return EXIT_OK if v.holds else EXIT_FAIL


def cmd_search(args, cfg) -> int:
    res = max_code_search(args.b, args.k, args.n, args.budget, args.mode, args.seed)
    km = km_bound(args.b, args.k).value if args.k >= 3 else None
    if args.format == "json":
        sys.stdout.write(_dump({"b": args.b, "k": args.k, "n": args.n, "size": res.size, "exact": res.exact,
                                "rate": res.code.rate, "km_bound": km, "nodes": res.nodes,
                                "words": [list(w) for w in res.code.words]}))
        return EXIT_OK
    mode = "maximum" if res.exact else "inextensible (greedy)"
    print(f"{mode} ({args.b},{args.k})-hash code of length {args.n}: {res.size} words")
    print(f"rate log2|C|/n = {round_up(res.code.rate, args.precision)}"
          + (f"; Korner-Marton bound {round_up(km, args.precision)}" if km is not None else ""))
    if args.verbose:
        print("\n".join(format_word(w, args.b) for w in res.code.words))
    return EXIT_OK


def _precision(text: str) -> int:
    p = int(text)
    if not 1 <= p <= 15:
        raise argparse.ArgumentTypeError("precision must lie in [1, 15]")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("md", "csv", "json"), default="md")
    common.add_argument("--precision", type=_precision, default=None, help="decimal places, rounded upward (default 7)")
    common.add_argument("--verbose", "-v", action="store_true")
    common.add_argument("--config", help="file of key = value search settings")
    common.add_argument("--seed", type=int)
    common.add_argument("--restarts", type=int)
    common.add_argument("--grid", type=int, help="lattice denominator for oracle scans")

    bk = argparse.ArgumentParser(add_help=False)
    bk.add_argument("--b", type=int, required=True)
    bk.add_argument("--k", type=int, required=True)
    bk.add_argument("--j", type=int)
    bk.add_argument("--eps", type=parse_number)
    bk.add_argument("--relaxed", action="store_true", help="min-based: bound the same-cell term over {p_c, q_c <= eps}")

    ap = argparse.ArgumentParser(prog="bkhash", description="Upper bounds on the rate of perfect (b,k)-hash codes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common, bk], help="compute one bound")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--j-min", type=int)
    p.add_argument("--j-max", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("table", parents=[common], help="recompute a comparison table")
    p.add_argument("which", type=int, choices=(1, 2))
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("psi-max", parents=[common], help="global maximum of Psi")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--k", type=int, help="use j = k-2")
    p.set_defaults(func=cmd_psi_max)

    for name, func, helptext in (("cluster", cmd_cluster, "cluster suprema and reduced form"),
                                 ("sweep", cmd_sweep, "cluster bound over a range of epsilon")):
        p = sub.add_parser(name, parents=[common, bk], help=helptext)
        p.add_argument("--method", choices=("cluster-max", "cluster-min"), required=True)
        p.set_defaults(func=func)
    p.add_argument("--eps-grid", type=lambda s: [parse_number(x) for x in s.split(",") if x.strip()], default=[])
    p.add_argument("--eps-range", type=parse_number, nargs=3, metavar=("LO", "HI", "STEPS"))

    p = sub.add_parser("verify", parents=[common], help="check a code file")
    p.add_argument("path")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="search for a large hash code")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--mode", choices=("auto", "exact", "greedy"), default="auto")
    p.set_defaults(func=cmd_search)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args)
        if args.precision is None and args.command != "table":
            args.precision = 7
        return args.func(args, cfg)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface: gen, wire, verify, analyze, bench, oracle.

Every command is deterministic given its flags; seeds are explicit and
recorded in the output metadata.  Exit codes: 0 success, 1 input error,
2 usage error, 3 validation failure, 4 self-consistency failure,
5 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import __version__
from . import _core
from .analysis import recurrence_table, spiral_ratio_forms
from .errors import BudgetError, GridwireError, OrderingError, ParseError
from .oracle import optimal_wiring
from .svg import render_svg
from .trees import (generate_bn, generate_path, generate_sn, iter_trees,
                    parse_tree, random_tree)
from .wiring import (bounding_box, from_canonical_json, quadrant_separation,
                     to_canonical_json, validate_k_wiring, volume, wire)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_INCONSISTENT = 4
EXIT_BUDGET = 5


def _bound(n):
    """ceil(7n/3), the volume guarantee for an n-vertex tree."""
    return (7 * n + 2) // 3


def _frac(fr):
    return f"{fr.numerator}/{fr.denominator}"


def _dec(fr):
    return f"{float(fr):.6f}"


def _write(args, text):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta_string(args):
    return f"gridwire {__version__} | {' '.join(args._argv)} | seed={getattr(args, 'seed', None)}"


def _meta_dict(args):
    return {"version": __version__, "command": " ".join(args._argv),
            "seed": getattr(args, "seed", None)}


def _read_input(value):
    """Tree text from a literal (starts with '(') or from a file path."""
    if value.lstrip().startswith("("):
        return value
    with open(value, "r", encoding="utf-8") as fh:
        return fh.read()


def cmd_gen(args):
    if args.family is None or args.n is None:
        raise _Usage("gen requires --family and --n")
    if args.family == "bn":
        if args.n < 0:
            raise _Usage("bn requires --n >= 0")
        tree = generate_bn(args.n)
    elif args.family == "sn":
        if args.n < 2:
            raise _Usage("sn requires --n >= 2")
        tree = generate_sn(args.n)
    elif args.family == "path":
        if args.n < 1:
            raise _Usage("path requires --n >= 1")
        tree = generate_path(args.n)
    else:
        if args.n < 1:
            raise _Usage("random requires --n >= 1")
        tree = random_tree(args.n, args.seed)
    print(_meta_string(args), file=sys.stderr)
    _write(args, tree.serialize() + "\n")
    return EXIT_OK


def cmd_wire(args):
    tree = parse_tree(_read_input(args.input))
    w = wire(tree)
    if args.format == "svg":
        _write(args, render_svg(w, meta_comment=_meta_string(args)))
    else:
        _write(args, to_canonical_json(w, meta=_meta_dict(args)))
    return EXIT_OK


def cmd_verify(args):
    with open(args.input, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        w, declared_volume, declared_bbox = from_canonical_json(text)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = validate_k_wiring(w, args.k)
    lines = [report.summary()]
    lines.extend(f"structural: {s}" for s in report.structural)
    lines.extend(f"violation: {v}" for v in report.violations)
    if args.quadrants:
        try:
            ok, node = quadrant_separation(w)
        except ValueError as exc:
            ok, node = False, f"({exc})"
        lines.append("quadrants: ok" if ok
                     else f"quadrants: violated at node {node}")
        if not ok:
            _write(args, "\n".join(lines) + "\n")
            return EXIT_VALIDATION
    _write(args, "\n".join(lines) + "\n")
    if not report.passed:
        return EXIT_VALIDATION
    if declared_volume is not None and declared_volume != volume(w):
        print(f"error: declared volume {declared_volume} != recount {volume(w)}",
              file=sys.stderr)
        return EXIT_INCONSISTENT
    if declared_bbox is not None and tuple(declared_bbox) != bounding_box(w):
        print("error: declared bbox does not match recount", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_analyze(args):
    if args.n_max < 3:
        raise _Usage("analyze requires --n-max >= 3")
    table = recurrence_table(args.n_max)
    rows = []
    for n in range(3, args.n_max + 1):
        series, closed, differ = spiral_ratio_forms(n)
        rows.append({
            "n": n,
            "spiral_series": series,
            "spiral_closed_form": closed,
            "forms_disagree": differ,
            "ratio_bound": table.values[n],
            "ratio_refined": table.refined[n],
        })
    if args.format == "json":
        import json
        doc = {"meta": _meta_dict(args), "rows": [
            {k: (_frac(v) if isinstance(v, Fraction) else v) for k, v in r.items()}
            for r in rows]}
        _write(args, json.dumps(doc, separators=(",", ":")) + "\n")
        return EXIT_OK
    cols = ("n", "spiral_series", "spiral_series_dec", "spiral_closed_form",
            "spiral_closed_form_dec", "forms_disagree", "ratio_bound",
            "ratio_bound_dec", "ratio_refined", "ratio_refined_dec")
    flat = []
    for r in rows:
        flat.append((str(r["n"]), _frac(r["spiral_series"]),
                     _dec(r["spiral_series"]), _frac(r["spiral_closed_form"]),
                     _dec(r["spiral_closed_form"]),
                     "yes" if r["forms_disagree"] else "no",
                     _frac(r["ratio_bound"]), _dec(r["ratio_bound"]),
                     _frac(r["ratio_refined"]), _dec(r["ratio_refined"])))
    if args.format == "csv":
        out = [f"# {_meta_string(args)}", ",".join(cols)]
        out.extend(",".join(row) for row in flat)
        _write(args, "\n".join(out) + "\n")
        return EXIT_OK
    widths = [max(len(c), *(len(row[i]) for row in flat)) for i, c in enumerate(cols)]
    out = [f"# {_meta_string(args)}",
           "  ".join(c.ljust(widths[i]) for i, c in enumerate(cols))]
    out.extend("  ".join(row[i].ljust(widths[i]) for i in range(len(cols)))
               for row in flat)
    _write(args, "\n".join(out) + "\n")
    return EXIT_OK


def _derived_seed(seed, size, index):
    x = (seed & (2 ** 64 - 1)) ^ (size * 0x9E3779B97F4A7C15) & (2 ** 64 - 1)
    return (x * 1000003 + index) & (2 ** 64 - 1)


def cmd_bench(args):
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes or any(s < 1 for s in sizes):
        raise _Usage("--sizes needs positive integers")
    rows = []
    started = time.perf_counter()
    for size in sizes:
        max_ratio = Fraction(0)
        ratio_sum = Fraction(0)
        max_area = 0
        for i in range(args.samples):
            if args.family == "path":
                tree = generate_path(size)
            else:
                tree = random_tree(size, _derived_seed(args.seed, size, i))
            w = wire(tree)
            vol = volume(w)
            if vol > _bound(size) or vol < size:
                print(f"bound violation: n={size} volume={vol} "
                      f"tree={tree.serialize()}", file=sys.stderr)
                return EXIT_VALIDATION
            ratio = Fraction(vol, size)
            max_ratio = max(max_ratio, ratio)
            ratio_sum += ratio
            (minx, miny), (maxx, maxy) = bounding_box(w)
            max_area = max(max_area, (maxx - minx + 1) * (maxy - miny + 1))
        rows.append((size, max_ratio, ratio_sum / args.samples, max_area))
    elapsed = time.perf_counter() - started
    print(f"bench wall time: {elapsed:.3f}s (backend={_core.BACKEND})",
          file=sys.stderr)
    out = [f"# {_meta_string(args)}",
           "size,samples,max_ratio,max_ratio_dec,mean_ratio,mean_ratio_dec,"
           "max_bbox_area"]
    for size, mx, mean, area in rows:
        out.append(f"{size},{args.samples},{_frac(mx)},{_dec(mx)},"
                   f"{_frac(mean)},{_dec(mean)},{area}")
    _write(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_oracle(args):
    out = [f"# {_meta_string(args)}",
           f"{'n':>2}  {'tree':<26} {'optimal':>7} {'constructed':>11} "
           f"{'bound':>5}"]
    had_budget_error = False
    for n in range(1, args.max_n + 1):
        for tree in iter_trees(n):
            w = wire(tree)
            vol = volume(w)
            try:
                res = optimal_wiring(tree, args.box_half_width,
                                     max_vertices=args.max_n,
                                     node_budget=args.node_budget)
                best = str(res.best_volume)
                assert n <= res.best_volume <= vol <= _bound(n)
            except BudgetError as exc:
                best = f"budget-error ({exc})"
                had_budget_error = True
            out.append(f"{n:>2}  {tree.serialize():<26} {best:>7} "
                       f"{vol:>11} {_bound(n):>5}")
    _write(args, "\n".join(out) + "\n")
    return EXIT_BUDGET if had_budget_error else EXIT_OK


class _Usage(Exception):
    pass


def _apply_config(argv, parser):
    """Rewrite argv so config key=value lines become leading flags.

    Explicit command-line flags are kept after the injected ones and win
    (argparse takes the last occurrence of a store action).
    """
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise _Usage("--config needs a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    if not rest:
        raise _Usage("--config needs a command to apply to")
    command, tail = rest[0], rest[1:]
    choices = parser._subparsers._group_actions[0].choices
    if command not in choices:
        raise _Usage(f"unknown command {command!r}")
    sub = choices[command]
    by_flag = {}
    for action in sub._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                by_flag[opt[2:]] = action
    injected = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise _Usage(f"config line {lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            flag = key.replace("_", "-")
            if flag not in by_flag:
                raise _Usage(f"config line {lineno}: unknown key {key!r}")
            if isinstance(by_flag[flag], argparse._StoreTrueAction):
                if value.lower() in ("1", "true", "yes", "on"):
                    injected.append(f"--{flag}")
            else:
                injected.extend((f"--{flag}", value))
    return [command] + injected + tail


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gridwire",
        description="Embed bounded-degree trees into the square lattice and "
                    "analyze the volume of the embedding.")
    parser.add_argument("--config", help="flat key=value file of flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a tree and print its text form")
    p.add_argument("--family", choices=("bn", "sn", "random", "path"))
    p.add_argument("--n", type=int,
                   help="family index for bn/sn, vertex count otherwise")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("wire", help="embed a tree and emit the embedding")
    p.add_argument("input", help="tree text (starting with '(') or a file path")
    p.add_argument("--format", choices=("json", "svg"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_wire, seed=None)

    p = sub.add_parser("verify", help="validate a serialized embedding")
    p.add_argument("input", help="embedding JSON file")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--quadrants", action="store_true",
                   help="also check the per-frame quadrant separation")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify, seed=None)

    p = sub.add_parser("analyze", help="print the extremal-ratio tables")
    p.add_argument("--n-max", type=int, default=30)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_analyze, seed=None)

    p = sub.add_parser("bench", help="wire random trees and report ratios")
    p.add_argument("--sizes", default="10,100,1000")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", choices=("random", "path"), default="random")
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exhaustive optimal wirings of tiny trees")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--box-half-width", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=20_000_000)
    p.add_argument("--output")
    p.set_defaults(func=cmd_oracle, seed=None)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        effective = _apply_config(argv, parser)
        args = parser.parse_args(effective)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except OSError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    args._argv = argv
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OrderingError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GridwireError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface: ``hurwitz <subcommand> ...``.

Defaults can be overridden through ``HURWITZ_*`` environment variables;
explicit flags win over both.  Exit status is 0 on success, 1 when a
verification fails (or a closure runs into its caps) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import ast
import csv
import hashlib
import json
import operator
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import mpmath

from . import real_cf
from .cf_core import Alpha, DomainError, convergents, evaluate_cf, expand, in_domain_D
from .exact_arith import GaussianRational, parse_rational
from .gencircle import GenCircle, integer_quadruple
from .partition import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_NODES,
    boundary_orbit_oracle,
    cell_decomposition,
    closure,
    verify_closure_invariants,
    verify_markov,
)
from .render import RenderSpec, clip_to_box, render_svg, write_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# parameters regenerated by ``all-figures``; the first four are the published pictures
FIGURE_ALPHAS = [
    ("1/2", "1/2"),
    ("2/3", "1/2"),
    ("2/3", "2/3"),
    ("1/5", "3/5"),
    ("1/3", "1/2"),
]


class UsageError(Exception):
    pass


def _env(name: str, default, conv: Callable = str):
    raw = os.environ.get("HURWITZ_" + name)
    if raw is None:
        return default
    try:
        return conv(raw)
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad value for HURWITZ_{name}: {raw!r} ({e})") from None


def _parse_alpha(a1: str, a2: str, force: bool) -> Alpha:
    try:
        alpha = Alpha(parse_rational(a1), parse_rational(a2))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"malformed alpha {a1!r} {a2!r}: {e}") from None
    if not alpha.in_D and not force:
        raise UsageError(f"alpha = {alpha} is not in D (use --force to continue anyway)")
    return alpha


def _slug(alpha: Alpha) -> str:
    return "alpha_" + "_".join(s.replace("/", "-") for s in alpha.to_strings())


# -- real numbers from the command line ------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": lambda: mpmath.pi, "e": lambda: mpmath.e, "phi": lambda: mpmath.phi}
_FUNCS = {"sqrt": mpmath.sqrt, "log": mpmath.log, "exp": mpmath.exp}


def parse_real(text: str, prec: int):
    """A rational (``p/q``, decimal) stays exact; otherwise a small expression in mpmath."""
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        pass
    with mpmath.workprec(prec):
        try:
            return +_eval_real(ast.parse(text, mode="eval").body)
        except (SyntaxError, KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise UsageError(f"cannot read real number {text!r}: {e}") from None


def _eval_real(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return mpmath.mpf(str(node.value))
    if isinstance(node, ast.Name):
        return _NAMES[node.id]()
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_real(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_real(node.left), _eval_real(node.right))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
        return _FUNCS[node.func.id](_eval_real(node.args[0]))
    raise ValueError("unsupported expression")


# -- subcommands -------------------------------------------------------------

def cmd_check_d(args) -> int:
    try:
        a1, a2 = parse_rational(args.a1), parse_rational(args.a2)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"malformed alpha: {e}") from None
    print(f"in D: {'true' if in_domain_D(a1, a2) else 'false'}")
    return EXIT_OK


def cmd_expand(args) -> int:
    alpha = _parse_alpha(*args.alpha, args.force)
    try:
        z = GaussianRational.parse(args.z)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"malformed z {args.z!r}: {e}") from None
    point = complex(z) if args.float else z
    try:
        exp = expand(point, alpha, args.max_steps, force=args.force)
    except DomainError as e:
        raise UsageError(str(e)) from None
    doc = exp.to_json(alpha, point)
    doc["convergents"] = [{"p": c.p.to_pair(), "q": c.q.to_pair()} for c in convergents(exp.digits)]
    if exp.terminated and not args.float:
        try:
            doc["reconstruction_exact"] = evaluate_cf(exp.digits) == z
        except ZeroDivisionError:
            doc["reconstruction_exact"] = False
    _emit_json(doc, args.json)
    return EXIT_OK


def cmd_real_cf(args) -> int:
    x = parse_real(args.x, args.prec)
    fn = real_cf.gauss_expand if args.flavor == "classical" else real_cf.nearest_int_expand
    try:
        exp = fn(x, args.max_steps, prec=args.prec)
    except DomainError as e:
        raise UsageError(str(e)) from None
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "digit", "p", "q"])
        for n, (a, (p, q)) in enumerate(zip(exp.digits, exp.convergents()), start=1):
            w.writerow([n, a, p, q])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _closure(alpha: Alpha, args):
    return closure(alpha, args.max_nodes, args.max_depth, workers=args.workers, tight=args.tight, force=args.force)


def _cap_message(report) -> Optional[str]:
    if report.stabilized:
        return None
    return f"closure did not stabilize: cap {report.cap_hit} exhausted after {report.node_count} nodes"


def cmd_partition(args) -> int:
    alpha = _parse_alpha(args.a1, args.a2, args.force)
    cs, report = _closure(alpha, args)
    inv = verify_closure_invariants(cs)
    if args.grid:
        cells = cell_decomposition(cs, alpha, args.grid)
        report.cell_count = cells.cell_count
    doc = {"alpha": alpha.to_strings(), "circles": [list(q) for q in cs.quadruples()], "report": report.to_json()}
    doc["report"]["invariants"] = inv.to_json()
    _emit_json(doc, args.json)
    msg = _cap_message(report)
    if msg:
        print(msg, file=sys.stderr)
    print(inv.line(), file=sys.stderr)
    return EXIT_OK if inv.passed and report.stabilized else EXIT_FAIL


def _spec(args, output_path=None, mode: Optional[str] = None) -> RenderSpec:
    return RenderSpec(
        width_px=args.width,
        height_px=args.height,
        stroke_width=args.stroke,
        show_grid=args.show_grid,
        mode=mode or args.mode,
        output_path=output_path,
    )


def _realized_points(alpha, cs, args, force: bool = False):
    if args.mode != "realized" and not force:
        return None
    res = boundary_orbit_oracle(alpha, cs, args.realized_samples, args.depth, args.tolerance, collect_points=True)
    return res.details["points"]


def cmd_render(args) -> int:
    alpha = _parse_alpha(args.a1, args.a2, args.force)
    cs, report = _closure(alpha, args)
    msg = _cap_message(report)
    if msg:
        print(msg, file=sys.stderr)
        return EXIT_FAIL
    out = args.out or f"{_slug(alpha)}.svg"
    doc = render_svg(cs, alpha, _spec(args, out), _realized_points(alpha, cs, args))
    print(write_svg(doc, out))
    return EXIT_OK


def cmd_verify(args) -> int:
    alpha = _parse_alpha(args.a1, args.a2, args.force)
    cs, report = _closure(alpha, args)
    results = [verify_closure_invariants(cs)]
    results.append(boundary_orbit_oracle(alpha, cs, args.samples, args.depth, args.tolerance))
    if not args.no_markov:
        cells = cell_decomposition(cs, alpha, args.grid)
        results.append(verify_markov(cells, alpha, args.markov_samples, args.tolerance))
    msg = _cap_message(report)
    if msg:
        print(msg)
    for r in results:
        print(r.line())
    if args.json:
        _emit_json({"alpha": alpha.to_strings(), "report": report.to_json(), "checks": [r.to_json() for r in results]}, args.json)
    ok = report.stabilized and all(r.passed for r in results)
    return EXIT_OK if ok else EXIT_FAIL


@dataclass
class FigureStats:
    name: str
    alpha: Alpha
    circles: int
    pieces: int
    per_edge: dict
    mirror_x: bool
    mirror_y: bool
    sha256: str
    realized_sha256: str


def _edge_counts(cs, alpha: Alpha) -> dict:
    x0, x1 = float(alpha.a1) - 1, float(alpha.a1)
    y0, y1 = float(alpha.a2) - 1, float(alpha.a2)
    box = (x0, x1, y0, y1)
    counts = {"left": 0, "right": 0, "bottom": 0, "top": 0}
    pieces = 0
    for q in cs.quadruples():
        for piece in clip_to_box(tuple(float(v) for v in q), box):
            pieces += 1
            if piece[0] == "seg":
                ends = [complex(*piece[1]), complex(*piece[2])]
            elif piece[0] == "arc":
                (cx, cy), r, t0, t1 = piece[1], piece[2], piece[3], piece[4]
                ends = [complex(cx, cy) + r * complex(mpmath.cos(t), mpmath.sin(t)) for t in (t0, t1)]
            else:
                ends = []
            for e in ends:
                for side, hit in (
                    ("left", abs(e.real - x0) < 1e-9),
                    ("right", abs(e.real - x1) < 1e-9),
                    ("bottom", abs(e.imag - y0) < 1e-9),
                    ("top", abs(e.imag - y1) < 1e-9),
                ):
                    counts[side] += hit
    return counts, pieces


def _mirror(quads, alpha: Alpha, axis: str) -> bool:
    """Is the set invariant under reflection of the square in its vertical (x) or horizontal (y) midline?"""
    cx, cy = 2 * alpha.a1 - 1, 2 * alpha.a2 - 1  # x -> cx - x, y -> cy - y
    mapped = set()
    for a, br, bi, c in quads:
        if axis == "x":
            # z -> cx - conj(z)
            h = GenCircle(a, GaussianRational(a * cx - br, bi), a * cx * cx - 2 * br * cx + c)
        else:
            h = GenCircle(a, GaussianRational(br, a * cy - bi), a * cy * cy - 2 * bi * cy + c)
        mapped.add(integer_quadruple(h))
    return mapped == set(quads)


def cmd_all_figures(args) -> int:
    outdir = Path(args.outdir)
    stats: list[FigureStats] = []
    for a1, a2 in FIGURE_ALPHAS:
        alpha = _parse_alpha(a1, a2, args.force)
        cs, report = _closure(alpha, args)
        msg = _cap_message(report)
        if msg:
            print(f"{alpha}: {msg}", file=sys.stderr)
            return EXIT_FAIL
        name = f"{_slug(alpha)}.svg"
        doc = render_svg(cs, alpha, _spec(args, outdir / name, "superset"))
        write_svg(doc, outdir / name)
        real_name = f"{_slug(alpha)}_realized.svg"
        real_doc = render_svg(cs, alpha, _spec(args, outdir / real_name, "realized"), _realized_points(alpha, cs, args, force=True))
        write_svg(real_doc, outdir / real_name)
        print(outdir / real_name)
        per_edge, pieces = _edge_counts(cs, alpha)
        quads = cs.quadruples()
        stats.append(
            FigureStats(
                name,
                alpha,
                len(quads),
                pieces,
                per_edge,
                _mirror(quads, alpha, "x"),
                _mirror(quads, alpha, "y"),
                hashlib.sha256(doc.encode("utf-8")).hexdigest(),
                hashlib.sha256(real_doc.encode("utf-8")).hexdigest(),
            )
        )
        print(outdir / name)
    (outdir / "CHECKLIST.md").write_text(_checklist(stats), encoding="utf-8")
    print(outdir / "CHECKLIST.md")
    return EXIT_OK


def _checklist(stats: list[FigureStats]) -> str:
    lines = [
        "# Figure checklist",
        "",
        "Each parameter gets `<name>.svg` (every closure circle) and `<name>_realized.svg`",
        "(only pieces met by sampled boundary orbits).  Regenerate with `hurwitz all-figures`,",
        "compare the hashes of the full pictures below for determinism, then tick the visual items by eye.",
        "",
        "| file | alpha | circles | clipped pieces | endpoints L/R/B/T | mirror x | mirror y | sha256 full | sha256 realized |",
        "|---|---|---|---|---|---|---|---|---|",
    ]
    for s in stats:
        e = s.per_edge
        lines.append(
            f"| {s.name} | ({', '.join(s.alpha.to_strings())}) | {s.circles} | {s.pieces} | "
            f"{e['left']}/{e['right']}/{e['bottom']}/{e['top']} | {_yes(s.mirror_x)} | {_yes(s.mirror_y)} | `{s.sha256[:16]}` | `{s.realized_sha256[:16]}` |"
        )
    lines += [
        "",
        "Visual items:",
        "",
        "- [ ] (1/2, 1/2): arcs of the eight unit circles about the nonzero Gaussian integers of norm at most 2, symmetric in both midlines and both diagonals.",
        "- [ ] (1/5, 3/5): picture visibly asymmetric, arcs crowd towards the corner lying on the unit circle.",
        "- [ ] every picture: arc endpoint counts per edge match the table above.",
        "- [ ] every picture: the square outline is complete and no arc leaves it.",
        "",
    ]
    return "\n".join(lines)


def _yes(v: bool) -> str:
    return "yes" if v else "no"


def _emit_json(doc: dict, path: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if path and path != "-":
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as e:
            raise OSError(f"cannot write JSON to {path}: {e}") from e
    else:
        sys.stdout.write(text)


# -- parser ------------------------------------------------------------------

def _add_alpha(p):
    p.add_argument("a1", help="real part of alpha, e.g. 1/2")
    p.add_argument("a2", help="imaginary part of alpha, e.g. 1/2")
    p.add_argument("--force", action="store_true", help="allow alpha outside D")


def _add_closure(p):
    p.add_argument("--max-nodes", type=int, default=_env("MAX_NODES", DEFAULT_MAX_NODES, int), help="node cap for the closure (HURWITZ_MAX_NODES)")
    p.add_argument("--max-depth", type=int, default=_env("MAX_DEPTH", DEFAULT_MAX_DEPTH, int), help="depth cap for the closure (HURWITZ_MAX_DEPTH)")
    p.add_argument("--workers", type=int, default=_env("WORKERS", 1, int), help="worker processes for the closure (HURWITZ_WORKERS)")
    p.add_argument("--tight", action="store_true", help="drop translates no arc point can reach (float heuristic)")


def _add_oracle(p, samples: int):
    p.add_argument("--samples", type=int, default=_env("SAMPLES", samples, int), help="boundary samples for the orbit oracle (HURWITZ_SAMPLES)")
    p.add_argument("--depth", type=int, default=_env("DEPTH", 8, int), help="orbit length for the oracle (HURWITZ_DEPTH)")
    p.add_argument("--tolerance", type=float, default=_env("TOLERANCE", 1e-9, float), help="distance tolerance (HURWITZ_TOLERANCE)")


def _add_render(p, with_mode: bool = True):
    p.add_argument("--width", type=int, default=_env("WIDTH", 600, int), help="canvas width in px (HURWITZ_WIDTH)")
    p.add_argument("--height", type=int, default=_env("HEIGHT", 600, int), help="canvas height in px (HURWITZ_HEIGHT)")
    p.add_argument("--stroke", type=float, default=_env("STROKE", 1.5, float), help="stroke width (HURWITZ_STROKE)")
    p.add_argument("--show-grid", action="store_true", help="draw the real and imaginary axes")
    if with_mode:
        p.add_argument("--mode", choices=["superset", "realized"], default=_env("MODE", "superset"), help="all closure arcs, or only arcs met by boundary orbits (HURWITZ_MODE)")
    p.add_argument("--realized-samples", type=int, default=_env("REALIZED_SAMPLES", 2000, int), help="boundary samples used in realized mode (HURWITZ_REALIZED_SAMPLES)")
    p.add_argument("--depth", type=int, default=_env("DEPTH", 8, int), help="orbit length in realized mode (HURWITZ_DEPTH)")
    p.add_argument("--tolerance", type=float, default=_env("TOLERANCE", 1e-9, float), help="distance tolerance (HURWITZ_TOLERANCE)")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="hurwitz", description=__doc__.splitlines()[0], formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-d", help="is alpha in the parameter domain D?", formatter_class=fmt)
    p.add_argument("a1")
    p.add_argument("a2")
    p.set_defaults(func=cmd_check_d)

    p = sub.add_parser("expand", help="alpha-Hurwitz digits and convergents of z", formatter_class=fmt)
    p.add_argument("--alpha", nargs=2, metavar=("A1", "A2"), default=_env("ALPHA", "1/2 1/2").split(), help="alpha (HURWITZ_ALPHA, space separated)")
    p.add_argument("--z", required=True, help="point: 'x', 'x,y' or 'x+yi' with rational parts")
    p.add_argument("--float", action="store_true", help="iterate in floating point")
    p.add_argument("--max-steps", type=int, default=_env("MAX_STEPS", 64, int), help="digit cap (HURWITZ_MAX_STEPS)")
    p.add_argument("--force", action="store_true", help="allow alpha outside D")
    p.add_argument("--json", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("real-cf", help="real continued fraction digits and convergents as CSV", formatter_class=fmt)
    p.add_argument("x", help="rational, decimal, or an expression such as pi-3")
    p.add_argument("--flavor", choices=["classical", "nearest"], default="classical")
    p.add_argument("--max-steps", type=int, default=_env("MAX_STEPS", 64, int), help="digit cap (HURWITZ_MAX_STEPS)")
    p.add_argument("--prec", type=int, default=_env("PREC", real_cf.DEFAULT_PREC, int), help="working precision in bits (HURWITZ_PREC)")
    p.add_argument("--csv", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_real_cf)

    p = sub.add_parser("partition", help="closure circles and report as JSON", formatter_class=fmt)
    _add_alpha(p)
    _add_closure(p)
    p.add_argument("--grid", type=int, default=_env("CELL_GRID", 0, int), help="also count cells on this grid, 0 to skip (HURWITZ_CELL_GRID)")
    p.add_argument("--json", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("render", help="SVG of the closure inside the square", formatter_class=fmt)
    _add_alpha(p)
    _add_closure(p)
    _add_render(p)
    p.add_argument("--out", help="output path [default: alpha_<a1>_<a2>.svg]")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="closure invariants, orbit oracle and Markov check", formatter_class=fmt)
    _add_alpha(p)
    _add_closure(p)
    _add_oracle(p, 10**4)
    p.add_argument("--grid", type=int, default=_env("GRID", 600, int), help="cell lattice size (HURWITZ_GRID)")
    p.add_argument("--markov-samples", type=int, default=_env("MARKOV_SAMPLES", 1000, int), help="pull-back samples per cell (HURWITZ_MARKOV_SAMPLES)")
    p.add_argument("--no-markov", action="store_true", help="skip the cell decomposition and Markov check")
    p.add_argument("--json", help="also write a JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("all-figures", help="regenerate the partition pictures and a checklist", formatter_class=fmt)
    p.add_argument("--outdir", default=_env("OUTDIR", "figures"), help="output directory (HURWITZ_OUTDIR)")
    p.add_argument("--force", action="store_true", help=argparse.SUPPRESS)
    _add_closure(p)
    _add_render(p, with_mode=False)
    p.set_defaults(func=cmd_all_figures, mode="superset")
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except UsageError as e:
        print(f"hurwitz: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"hurwitz: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"hurwitz: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

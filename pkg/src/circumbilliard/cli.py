"""Command-line entry point: ``circumbilliard <subcommand> ...``.

Every subcommand writes JSON (default) or CSV to stdout or ``--output``.
Floats are printed with 17 significant digits so identical inputs give
byte-identical output. Exit status: 0 success, 1 a claim failed, 2 usage
or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import billiard as bl
from . import centers as ce
from . import conics as cn
from . import invariants as iv
from . import poristic as po
from . import pythagorean as py
from . import triangles as tr
from .errors import BilliardError
from .tolerances import active, from_mapping, using

EXIT_OK, EXIT_CLAIM, EXIT_USAGE = 0, 1, 2


# --- formatting -------------------------------------------------------------

def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x + 0.0, ".17g")  # no "-0"


def to_json(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON with 17-digit floats (NaN/Infinity become strings)."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{to_json(str(k))}: {to_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(to_json(v) for v in seq) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + 1) for v in seq) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt_float(x) if math.isfinite(x) else f'"{fmt_float(x)}"'
    s = str(obj).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{s}"'


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def pt(p) -> list[float]:
    return [float(p[0]), float(p[1])]


# --- argument parsing -------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value in {text!r}") from None


def _center_arg(text: str):
    return text if text == "excenters" else int(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--tol", action="append", type=_tol_pair, default=[], metavar="NAME=VALUE",
                        help="override a tolerance (repeatable)")
    common.add_argument("--deg", action="store_true", help="angles are given in degrees")

    shape = argparse.ArgumentParser(add_help=False)
    shape.add_argument("--a", type=float, help="major semi-axis (required)")
    shape.add_argument("--b", type=float, default=1.0, help="minor semi-axis")

    p = argparse.ArgumentParser(prog="circumbilliard", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("orbit", parents=[common, shape], help="orbit vertices and centers at t")
    s.add_argument("--t", type=float, default=0.0)
    s.add_argument("--centers", default="1,2,3,4,7,9,11,100", help="comma-separated center indices")

    s = sub.add_parser("sweep", parents=[common, shape], help="claim verdicts over the family")
    s.add_argument("--steps", type=int, default=360)
    s.add_argument("--claims", default="all", help="'all' or comma-separated claim ids")
    s.add_argument("--list", action="store_true", help="list claim ids and exit")

    s = sub.add_parser("locus", parents=[common, shape], help="ellipse fit to a center's locus")
    s.add_argument("--center", type=_center_arg, required=True, help="center index or 'excenters'")
    s.add_argument("--steps", type=int, default=360)

    s = sub.add_parser("conic", parents=[common], help="circumconic of a triangle with given center")
    s.add_argument("--vertices", type=_floats, required=True, help="x1,y1,x2,y2,x3,y3")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--center-index", type=int)
    g.add_argument("--center", type=_floats, help="x,y")

    s = sub.add_parser("inconic", parents=[common], help="inconic of a triangle centered on X_i")
    s.add_argument("--vertices", type=_floats, required=True, help="x1,y1,x2,y2,x3,y3")
    s.add_argument("--center-index", type=int, required=True)

    s = sub.add_parser("poristic", parents=[common], help="poristic family report")
    s.add_argument("--R", type=float, default=1.0)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--steps", type=int, default=360)

    s = sub.add_parser("pyth", parents=[common], help="Pythagorean triples")
    s.add_argument("--max-m", type=int, default=200)
    s.add_argument("--table", action="store_true", help="first 16 triples with exact a/b")
    s.add_argument("--groups", action="store_true", help="perimeter coincidences")
    s.add_argument("--ab", action="store_true", help="billiard semi-axes per triple")

    s = sub.add_parser("isoperim", parents=[common], help="billiards with a given orbit perimeter")
    s.add_argument("--L", type=float, required=True)
    s.add_argument("--a-min", type=float, required=True)
    s.add_argument("--a-max", type=float, required=True)
    s.add_argument("--steps", type=int, default=100)

    s = sub.add_parser("focal", parents=[common, shape], help="focal-length maxima of F and J_exc")
    s.add_argument("--grid", type=int, default=400)
    return p


def _shape(args, parser) -> bl.BilliardShape:
    if args.a is None:
        parser.error("the following arguments are required: --a")
    if not (args.b > 0 and args.a > args.b):
        parser.error(f"--a {args.a} --b {args.b}: need a > b > 0")
    return bl.BilliardShape(args.a, args.b)


def _angle(args, value: float) -> float:
    return math.radians(value) if args.deg else value


def _triangle(values, parser) -> tr.Triangle:
    if len(values) != 6:
        parser.error("--vertices needs six numbers")
    return tr.Triangle(np.array(values).reshape(3, 2))


# --- subcommands ------------------------------------------------------------
# each returns (json object, (csv header, csv rows), exit code)

def cmd_orbit(args, parser):
    shape = _shape(args, parser)
    o = bl.orbit_at(shape, _angle(args, args.t))
    idx = [int(v) for v in args.centers.split(",") if v]
    cs = {f"X{i}": pt(ce.center(o.triangle, i)) for i in idx}
    obj = {"a": shape.a, "b": shape.b, "t": o.t, "vertices": [pt(v) for v in o.vertices],
           "sidelengths": list(map(float, o.sidelengths)), "perimeter": o.perimeter, "centers": cs}
    rows = [[f"P{i + 1}", *pt(v)] for i, v in enumerate(o.vertices)]
    rows += [[k, *v] for k, v in cs.items()]
    return obj, (["name", "x", "y"], rows), EXIT_OK


def cmd_sweep(args, parser):
    if args.list:
        obj = {c.id: {"statement": c.statement, "tolerance": c.tolerance} for c in iv.CLAIMS.values()}
        return obj, (["id", "tolerance", "statement"],
                     [[c.id, c.tolerance, c.statement] for c in iv.CLAIMS.values()]), EXIT_OK
    shape = _shape(args, parser)
    try:
        iv.select_claims(args.claims)
    except KeyError as e:
        parser.error(f"--claims: {e.args[0]}")
    if args.steps < 32:
        parser.error("--steps must be at least 32")
    rep = iv.sweep(shape, args.steps, args.claims)
    claims = [{"id": c.id, "max_deviation": c.max_deviation, "tolerance": c.tolerance,
               "verdict": c.verdict, "excluded": c.n_excluded, "flagged": c.flagged} for c in rep.claims]
    obj = {"a": shape.a, "b": shape.b, "steps": args.steps, "passed": rep.passed, "claims": claims}
    rows = [[t, cid, dev] for t, row in rep.samples for cid, dev in row.items()]
    code = EXIT_OK if rep.passed else EXIT_CLAIM
    if not rep.passed:
        for c in rep.failures():
            print(f"FAIL {c.id}: deviation {fmt_float(c.max_deviation)} > tolerance {fmt_float(c.tolerance)}",
                  file=sys.stderr)
    return obj, (["t", "claim", "deviation"], rows), code


def cmd_locus(args, parser):
    shape = _shape(args, parser)
    fit = iv.locus(shape, args.center, args.steps)
    expected = iv.expected_locus_axes(shape, args.center)
    obj = {"center": args.center, "verdict": fit.verdict, "axes": list(fit.axes) if fit.axes else None,
           "expected_axes": list(expected) if expected else None,
           "rms_residual": fit.rms_residual, "refined_rms_residual": fit.refined_rms}
    rows = [[float(p[0]), float(p[1])] for p in fit.samples]
    return obj, (["x", "y"], rows), EXIT_OK


def _conic_obj(conic: cn.ImplicitConic) -> dict:
    obj = {"coefficients": conic.to_dict(), "kind": conic.kind()}
    try:
        ax = cn.axes(conic)
    except BilliardError as e:
        obj["axes_error"] = str(e)
        return obj
    obj.update(center=pt(ax.center), semi_major=ax.semi_major, semi_minor=ax.semi_minor,
               major_direction=pt(ax.major_direction), foci=[pt(f) for f in ax.foci],
               focal_length=ax.focal_length)
    return obj


def cmd_conic(args, parser):
    tri = _triangle(args.vertices, parser)
    M = ce.center(tri, args.center_index) if args.center_index is not None else args.center
    if len(M) != 2:
        parser.error("--center needs two numbers")
    conic = cn.circumconic_with_center(tri, M)
    obj = _conic_obj(conic)
    obj["medial_region"] = cn.classify_by_medial(tri, M).value
    return obj, (list(cn.COEFF_NAMES), [list(map(float, conic.coeffs))]), EXIT_OK


def cmd_inconic(args, parser):
    tri = _triangle(args.vertices, parser)
    res = cn.inconic_with_center(tri, ce.barycentric_fn(args.center_index))
    obj = _conic_obj(res.conic)
    obj.update(perspector=pt(res.perspector), contacts=[pt(k) for k in res.contacts.vertices],
               tangency=list(map(float, res.tangency)))
    return obj, (list(cn.COEFF_NAMES), [list(map(float, res.conic.coeffs))]), EXIT_OK


def cmd_poristic(args, parser):
    if not (args.r > 0 and args.R >= 2 * args.r):
        parser.error(f"--R {args.R} --r {args.r}: need R >= 2r > 0")
    if args.steps < 32:
        parser.error("--steps must be at least 32")
    fam = po.PoristicFamily(args.R, args.r)
    rs = po.ratio_sweep(fam, args.steps)
    loci = po.center_loci(fam, args.steps)
    obj = {"R": fam.R, "r": fam.r, "d": fam.d,
           "ratio": {"mean": rs.mean, "std": rs.std, "formula": rs.formula},
           "excenter_locus": {"center": pt(loci.excenter_center), "radius": loci.excenter_radius,
                              "x40": pt(loci.x40), "rms": loci.excenter_rms},
           "x9_locus": {"center": pt(loci.x9_center), "radius": loci.x9_radius, "rms": loci.x9_rms,
                        "stated_center": pt(loci.x9_stated_center),
                        "mirrored_center": pt(loci.x9_mirrored_center),
                        "candidate_radius": loci.x9_candidate_radius},
           "antiorthic_axis": {"line": list(map(float, loci.antiorthic_line)),
                               "spread": loci.antiorthic_spread}}
    rows = []
    for th, ratio in zip(po.thetas(args.steps), rs.values):
        m = po.member(fam, float(th))
        rows.append([float(th), *[float(v) for v in m.vertices.ravel()], float(ratio),
                     *pt(ce.center(m, 9)), *pt(ce.center(m, 40))])
    header = ["theta", "x1", "y1", "x2", "y2", "x3", "y3", "a9_over_b9", "x9", "y9", "x40", "y40"]
    return obj, (header, rows), EXIT_OK


def cmd_pyth(args, parser):
    if args.max_m < 2:
        parser.error("--max-m must be at least 2")
    triples = py.generate(args.max_m)
    obj: dict[str, Any] = {"max_m": args.max_m, "count": len(triples),
                           "primitive": sum(t.primitive for t in triples)}
    header, rows = ["m", "n", "s1", "s2", "s3", "perimeter"], [[*t] + [t.perimeter] for t in triples]
    if args.groups:
        g = py.perimeter_groups(triples)
        obj["unique_perimeters"] = g.unique
        obj["histogram"] = {str(k): v for k, v in g.histogram.items()}
        obj["quadruples"] = {str(p): [list(t.sides) for t in v] for p, v in g.groups_of(4).items()}
        header = ["perimeter", "group_size", "s1", "s2", "s3"]
        rows = [[p, len(v), *t.sides] for p, v in sorted(g.by_perimeter.items()) if len(v) > 1 for t in v]
    if args.table:
        table = py.table16()
        obj["table"] = [{"sides": [r.s1, r.s2, r.s3], "exact": str(r.exact), "value": r.value,
                         "rank": r.rank} for r in table]
        header = ["s1", "s2", "s3", "a_over_b_exact", "a_over_b", "rank"]
        rows = [[r.s1, r.s2, r.s3, str(r.exact), r.value, r.rank] for r in table]
    if args.ab:
        pts = py.ab_map(triples)
        obj["all_above_a4"] = py.above_a4(pts)
        header = ["s1", "s2", "s3", "a", "b", "a_over_b"]
        rows = [[*p.triple.sides, p.a, p.b, p.ratio] for p in pts]
    if not (args.groups or args.table or args.ab):
        obj["triples"] = [list(t.sides) for t in triples]
    return obj, (header, rows), EXIT_OK


def cmd_isoperim(args, parser):
    if args.L <= 0 or not (0 < args.a_min <= args.a_max) or args.steps < 1:
        parser.error("need --L > 0, 0 < --a-min <= --a-max and --steps >= 1")
    avals = np.linspace(args.a_min, args.a_max, args.steps)
    pts = py.iso_perimeter_curve(args.L, avals)
    obj = {"L": args.L, "points": [[a, b] for a, b in pts]}
    return obj, (["a", "b"], [[a, b] for a, b in pts]), EXIT_OK


def cmd_focal(args, parser):
    shape = _shape(args, parser)
    maxima = iv.focal_extrema(shape, args.grid)
    obj = {"a": shape.a, "b": shape.b, "maxima": [
        {"t": m.t, "focal_length": m.focal_length, "focal_length_exc": m.focal_length_exc,
         "caustic_tangency": list(m.caustic_gap), "billiard_tangency": list(m.billiard_gap)}
        for m in maxima]}
    rows = [[m.t, m.focal_length, m.focal_length_exc, *m.caustic_gap, *m.billiard_gap] for m in maxima]
    header = ["t", "lambda", "lambda_exc", "caustic_dist", "caustic_angle", "billiard_dist", "billiard_angle"]
    return obj, (header, rows), EXIT_OK


COMMANDS = {
    "orbit": cmd_orbit, "sweep": cmd_sweep, "locus": cmd_locus, "conic": cmd_conic,
    "inconic": cmd_inconic, "poristic": cmd_poristic, "pyth": cmd_pyth,
    "isoperim": cmd_isoperim, "focal": cmd_focal,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        tols = from_mapping(dict(args.tol), active())
    except ValueError as e:
        print(f"circumbilliard: error: --tol: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with using(tols):
            obj, (header, rows), code = COMMANDS[args.command](args, parser)
    except SystemExit as e:
        return int(e.code or 0)
    except (BilliardError, ValueError, KeyError) as e:
        print(f"circumbilliard: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = to_json(obj) + "\n" if args.format == "json" else to_csv(header, rows)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

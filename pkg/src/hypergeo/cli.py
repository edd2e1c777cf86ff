"""Command line: hypergeo {tetra,geodesic,cone,euclid,report} ...

Output is JSON on stdout (schema 1).  Exit status 0 on success, 2 on bad
usage or out-of-domain input, 3 when a verified property fails.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from pathlib import Path

from . import cone, euclid
from .development import CrossingSequence, canonical_sequence, validate
from .errors import DomainError, HypergeoError, SequenceError, ConstructionFailed
from .serialize import document, dumps
from .solver import (
    CHECK_TOL,
    MIDPOINT_TOL,
    check_theorem1,
    check_theorem2,
    construct_midpoint,
    max_crossing_deviation,
    solve_class,
)
from .tetrahedron import (
    TetraMetric,
    edge_length,
    label,
    tanh_edge,
    theorem2_bound,
    theorem2_rhs,
)

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED = 0, 2, 3
CLASSES = ("g2", "g3", "g32")


class UsageError(Exception):
    pass


_PI_FORM = re.compile(r"^\s*(?:([0-9.]+)\s*\*?\s*)?pi\s*(?:/\s*([0-9.]+))?\s*$")


def angle(text: str) -> float:
    """A float, or a multiple of pi written like "pi/2", "3*pi/2", "0.9pi/3"."""
    m = _PI_FORM.match(text.lower())
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        if den == 0:
            raise argparse.ArgumentTypeError(f"division by zero in {text!r}")
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def check_tolerance() -> float:
    raw = os.environ.get("HYPERGEO_TOL")
    if raw is None or raw.strip() == "":
        return CHECK_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"HYPERGEO_TOL={raw!r} is not a number") from None
    if not (math.isfinite(tol) and tol > 0):
        raise UsageError(f"HYPERGEO_TOL must be a positive number, got {raw!r}")
    return tol


def _class_of(seq: CrossingSequence) -> str:
    for name in CLASSES:
        if canonical_sequence(name).steps == seq.steps:
            return name.upper()
    return "custom"


def geodesic_record(g, cls: str, tol: float) -> tuple[dict, list]:
    """The JSON record of a closed geodesic and the list of failed checks."""
    alpha = g.metric.alpha
    t1 = check_theorem1(g)
    t2 = check_theorem2(g)
    angle_err = max(abs(math.pi - (x + y)) for x, y in g.angle_residuals)
    length_err = abs(g.total_length - g.translation_length)
    checks = {
        "angle_residual": angle_err,
        "length_vs_holonomy": length_err,
        "theorem1": t1.ok if t1.applicable else "not-applicable",
        "theorem2": t2.status,
        "theorem2_margin": t2.margin if t2.applicable else None,
    }
    failed = []
    if angle_err > tol:
        failed.append("angle-residual")
    if length_err > tol:
        failed.append("length-vs-holonomy")
    if t1.applicable and not t1.ok:
        failed.append("theorem1")
    if t2.applicable and t2.status != "holds":
        failed.append("theorem2")
    if cls != "custom":
        try:
            built = construct_midpoint(cls, g.metric, tol)
            dev = max_crossing_deviation(g, built)
            checks["midpoint_construction"] = dev
            if not dev < MIDPOINT_TOL:
                failed.append("midpoint-construction")
        except ConstructionFailed as exc:
            checks["midpoint_construction"] = str(exc)
            failed.append("midpoint-construction")
        if not g.simple:
            failed.append("simple")
    record = {
        "realizable": True,
        "alpha": alpha,
        "class": cls,
        "edge_length": g.metric.a,
        "sequence": g.sequence.to_tokens(),
        "crossings": [{"edge": list(e), "t": t} for e, t in g.crossings],
        "segment_lengths": list(g.segment_lengths),
        "total_length": g.total_length,
        "translation_length": g.translation_length,
        "vertex_distances": {str(v): d for v, d in g.vertex_distances.items()},
        "min_vertex_distance": g.min_vertex_distance,
        "theorem2_rhs": theorem2_rhs(alpha),
        "simple": g.simple,
        "self_intersections": len(g.intersections),
        "midpoint_pairs": [[label(a), label(b)] for a, b in t1.pairs],
        "checks": checks,
        "failed_checks": failed,
    }
    return record, failed


def _metric(alpha: float) -> TetraMetric:
    return TetraMetric.from_alpha(alpha)


def _emit(payload: dict, args, path=None) -> None:
    text = dumps(document(payload), indent=2 if getattr(args, "pretty", False) else None)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    print(text)


def _render(g, cls, args) -> None:
    if getattr(args, "svg", None) or getattr(args, "figure", None):
        from .scene import scene

        sc = scene(g, f"{cls} at alpha = {g.metric.alpha:g}")
        if args.svg:
            from . import svg

            svg.write(sc, args.svg)
        if args.figure:
            from .report import development_figure

            development_figure(sc, args.figure)


def cmd_tetra_info(args) -> int:
    a = args.alpha
    m = _metric(a)
    _emit({
        "alpha": a,
        "edge_length": edge_length(a),
        "tanh_edge": tanh_edge(a),
        "vertex_cone_angle": m.vertex_cone_angle(),
        "theorem2_rhs": theorem2_rhs(a),
        "theorem2_bound": theorem2_bound(a),
    }, args)
    return EXIT_OK


def _geodesic(seq, cls, args) -> int:
    tol = check_tolerance()
    g = solve_class(seq, _metric(args.alpha))
    if not g.realizable:
        payload = {"alpha": args.alpha, "class": cls, "realizable": False, "reason": g.reason,
                   "index": g.index, "detail": g.detail, "sequence": seq.to_tokens()}
        _emit(payload, args, args.json)
        return EXIT_FALSIFIED if cls != "custom" else EXIT_OK
    record, failed = geodesic_record(g, cls, tol)
    _emit(record, args, args.json)
    _render(g, cls, args)
    return EXIT_FALSIFIED if failed else EXIT_OK


def cmd_geodesic_construct(args) -> int:
    return _geodesic(canonical_sequence(args.cls), args.cls.upper(), args)


def cmd_geodesic_solve(args) -> int:
    seq = CrossingSequence.from_tokens(args.sequence)
    report = validate(seq)
    if not report:
        raise SequenceError(report.message, report.index)
    return _geodesic(seq, _class_of(seq), args)


def cmd_cone_count(args) -> int:
    geometry = {"hyp": "hyperbolic", "euc": "euclidean"}[args.geometry]
    q = cone.ConeGeodesicQuery(cone.Cone(args.full_angle, geometry), args.distance)
    closed = cone.count(q)
    row = {"alpha": args.full_angle, "d": args.distance, "geometry": geometry, "n": cone.n_of(args.full_angle),
           "count_closed_form": closed}
    status = EXIT_OK
    if args.distance > 0:
        brute = cone.brute_force_count(q)
        row["count_brute_force"] = brute
        near = geometry == "hyperbolic" and cone.near_threshold(args.full_angle, args.distance, 1e-6)
        row["near_threshold"] = near
        if brute != closed and not near:
            status = EXIT_FALSIFIED
    _emit(row, args)
    return status


def cmd_cone_sweep(args) -> int:
    rows = cone.sweep(args.samples, args.seed)
    agree = sum(r["agree"] for r in rows)
    _emit({"samples": len(rows), "seed": args.seed, "agreement": agree, "rows": rows}, args)
    return EXIT_OK if agree == len(rows) else EXIT_FALSIFIED


def cmd_euclid_survey(args) -> int:
    if args.max < 1:
        raise DomainError("--max must be at least 1")
    rows = euclid.survey(args.max)
    ok = all(r["midpoint_lemma"] and r["quarter_symmetry"] for r in rows)
    _emit({"max": args.max, "lines": len(rows), "all_pass": ok, "rows": rows}, args)
    return EXIT_OK if ok else EXIT_FALSIFIED


def cmd_report(args) -> int:
    """Records for every class over an alpha grid, with figures, written to one directory."""
    from .report import cone_figure, development_figure, margin_figure
    from .scene import scene

    tol = check_tolerance()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    alphas = [round(0.1 * k, 10) for k in range(1, 11)]
    rows, failures = [], []
    for cls in CLASSES:
        for a in alphas:
            g = solve_class(canonical_sequence(cls), _metric(a))
            if not g.realizable:
                failures.append({"class": cls.upper(), "alpha": a, "reason": g.reason})
                continue
            rec, failed = geodesic_record(g, cls.upper(), tol)
            rows.append(rec)
            failures.extend({"class": cls.upper(), "alpha": a, "check": f} for f in failed)
        g = solve_class(canonical_sequence(cls), _metric(args.alpha))
        development_figure(scene(g, f"{cls.upper()} at alpha = {args.alpha:g}"), out / f"development_{cls}.png")
    margin_figure(rows, out / "theorem2_margin.png")
    cone_figure(out / "cone_counts.png")
    sweep = cone.sweep(200, args.seed)
    survey = euclid.survey(21)
    payload = {
        "geodesics": rows,
        "failures": failures,
        "cone_sweep": {"samples": len(sweep), "agreement": sum(r["agree"] for r in sweep), "seed": args.seed},
        "euclid_survey": {"lines": len(survey),
                          "all_pass": all(r["midpoint_lemma"] and r["quarter_symmetry"] for r in survey)},
        "figures": sorted(p.name for p in out.glob("*.png")),
    }
    text = dumps(document(payload), indent=2)
    (out / "report.json").write_text(text + "\n", encoding="utf-8")
    print(dumps(document({"report": str(out / "report.json"), "figures": payload["figures"],
                          "failures": len(failures)})))
    ok = not failures and payload["cone_sweep"]["agreement"] == len(sweep) and payload["euclid_survey"]["all_pass"]
    return EXIT_OK if ok else EXIT_FALSIFIED


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypergeo", description="Closed geodesics on regular hyperbolic tetrahedra.")
    p.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    tetra = sub.add_parser("tetra").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    info = tetra.add_parser("info", help="edge length and vertex bounds for a face angle")
    info.add_argument("--alpha", type=angle, required=True)
    info.set_defaults(func=cmd_tetra_info)

    geo = sub.add_parser("geodesic").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    con = geo.add_parser("construct", help="build and verify one of the three classes")
    con.add_argument("--class", dest="cls", choices=CLASSES, required=True)
    con.add_argument("--alpha", type=angle, required=True)
    con.add_argument("--svg")
    con.add_argument("--json")
    con.add_argument("--figure", help="PNG of the development")
    con.set_defaults(func=cmd_geodesic_construct)
    sol = geo.add_parser("solve", help="closed geodesic of an arbitrary crossing sequence")
    sol.add_argument("--alpha", type=angle, required=True)
    sol.add_argument("--sequence", required=True, help='tokens "edge:face-entered", e.g. "12:123,13:134,..."')
    sol.add_argument("--svg")
    sol.add_argument("--json")
    sol.add_argument("--figure")
    sol.set_defaults(func=cmd_geodesic_solve)

    cn = sub.add_parser("cone").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    cc = cn.add_parser("count", help="self-intersections of a cone geodesic")
    cc.add_argument("--full-angle", type=angle, required=True, help='radians; "pi/2" style multiples of pi accepted')
    cc.add_argument("--distance", type=float, default=1.0)
    cc.add_argument("--geometry", choices=("hyp", "euc"), default="hyp")
    cc.set_defaults(func=cmd_cone_count)
    cs = cn.add_parser("sweep", help="closed form against brute force on random samples")
    cs.add_argument("--samples", type=int, default=200)
    cs.add_argument("--seed", type=int, default=0)
    cs.set_defaults(func=cmd_cone_sweep)

    eu = sub.add_parser("euclid").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sv = eu.add_parser("survey", help="midpoint and quarter checks for lattice lines")
    sv.add_argument("--max", type=int, default=21)
    sv.set_defaults(func=cmd_euclid_survey)

    rp = sub.add_parser("report", help="records and figures for all classes")
    rp.add_argument("--out", default="report")
    rp.add_argument("--alpha", type=float, default=0.5, help="face angle of the development figures")
    rp.add_argument("--seed", type=int, default=0)
    rp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SequenceError as exc:
        where = "" if exc.index is None else f" (token {exc.index})"
        print(f"hypergeo: invalid sequence{where}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, UsageError) as exc:
        print(f"hypergeo: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypergeoError as exc:
        print(f"hypergeo: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED


if __name__ == "__main__":
    sys.exit(main())

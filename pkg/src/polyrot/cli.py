"""Command-line interface.

Exit codes: 0 rotatable (or AGREE for ``verify``), 1 input error,
2 NotRotatable, 3 DegenerateUndetermined, 4 oracle disagreement.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .admissibility import AdmissibilityReport, Verdict, analyze
from .errors import PolyrotError
from .geometry import EPS_GEOM
from .oracle import centre_search, simulate
from .scenario_io import dump_scenario, dumps, load_scenario, report_to_dict, report_to_text
from .scenarios import example_2d_concurrent, example_2d_medial, example_3d_tetra, parity_scan, tetra_projection_rows
from .svg import render_2d

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_ROTATABLE = 2
EXIT_DEGENERATE = 3
EXIT_DISAGREE = 4

EXAMPLES = {
    "2d-concurrent": lambda eps: example_2d_concurrent(),
    "2d-medial": lambda eps: example_2d_medial(),
    "3d-tetra": lambda eps: example_3d_tetra(eps),
}


def verdict_exit_code(v: Verdict) -> int:
    if v.rotatable:
        return EXIT_OK
    if v is Verdict.NOT_ROTATABLE:
        return EXIT_NOT_ROTATABLE
    return EXIT_DEGENERATE


def _print_report(rep: AdmissibilityReport, as_json: bool, out) -> None:
    if as_json:
        out.write(dumps(report_to_dict(rep)) + "\n")
    else:
        out.write(report_to_text(rep) + "\n")


def cmd_analyze(args, out) -> int:
    sc = load_scenario(args.file)
    rep = analyze(sc.sigma, sc.tau, sc.S, tol=args.tol)
    _print_report(rep, args.json, out)
    return verdict_exit_code(rep.verdict)


def cmd_verify(args, out) -> int:
    sc = load_scenario(args.file)
    rep = analyze(sc.sigma, sc.tau, sc.S)
    # simulate a unit-norm representative so t_max is an angle scale
    S = sc.S.scaled(1.0 / sc.S.norm())
    agree = True
    out.write(f"verdict: {rep.verdict.value}\n")
    for region in (rep.forward, rep.backward):
        label = "omega" if region.sense > 0 else "-omega"
        if region.rotatable:
            sim = simulate(sc.sigma, sc.tau, S.scaled(region.sense), region.witness, args.t_max, args.steps)
            ok = sim.stays_inside
            detail = "stays inside" if ok else f"exits at t={sim.exit_t:.3g} (vertex {sim.exit_vertex})"
            out.write(f"{label}: {region.status.value} witness simulated -> {detail}\n")
        else:
            found = centre_search(sc.sigma, sc.tau, S, region.sense, args.grid, t_max=args.t_max, steps=args.steps)
            ok = not found.found
            detail = "no centre found" if ok else f"grid centre {found.q.tolist()} works"
            out.write(f"{label}: {region.status.value} grid search -> {detail}\n")
        agree &= ok
    out.write("AGREE\n" if agree else "DISAGREE\n")
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_example(args, out) -> int:
    sc = EXAMPLES[args.name](args.epsilon)
    rep = analyze(sc.sigma, sc.tau, sc.S)
    text = dump_scenario(sc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    out.write(text)
    _print_report(rep, args.json, out)
    if args.svg:
        if sc.tau.n != 2:
            raise PolyrotError("--svg is only available for planar examples")
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_2d(sc, rep))
    if args.projection_csv:
        if sc.tau.n != 3:
            raise PolyrotError("--projection-csv is only available for the 3d example")
        with open(args.projection_csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["point", "x", "y"])
            for name, x, y in tetra_projection_rows(sc):
                w.writerow([name, "%.17g" % x, "%.17g" % y])
    return verdict_exit_code(rep.verdict)


SCAN_COLUMNS = ["dim", "trials", "rotatable_both", "forward_only", "backward_only", "not_rotatable", "degenerate_excluded"]


def cmd_scan(args, out) -> int:
    dims = [int(x) for x in args.dims.split(",") if x.strip()]
    rows = parity_scan(dims, args.trials, args.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_COLUMNS)
    for r in rows:
        w.writerow([getattr(r, c) for c in SCAN_COLUMNS])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    out.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyrot", description="Small rotations of a polytope inside another.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="decide admissibility for a scenario file")
    a.add_argument("file")
    a.add_argument("--tol", type=float, default=EPS_GEOM, help="vertex-on-facet tolerance")
    fmt = a.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--text", dest="json", action="store_false")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="cross-check the analysis against simulation")
    v.add_argument("file")
    v.add_argument("--t-max", type=float, default=1e-3)
    v.add_argument("--steps", type=int, default=8)
    v.add_argument("--grid", type=int, default=64)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("example", help="build and analyze a worked example")
    e.add_argument("name", choices=sorted(EXAMPLES))
    e.add_argument("--epsilon", type=float, default=0.05)
    e.add_argument("--svg", metavar="OUT")
    e.add_argument("--out", metavar="FILE", help="also write the scenario file here")
    e.add_argument("--projection-csv", metavar="OUT")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_example)

    s = sub.add_parser("scan", help="verdict frequencies of random inscribed pairs per dimension")
    s.add_argument("--dims", default="2,3,4")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--out", metavar="CSV")
    s.set_defaults(func=cmd_scan)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (PolyrotError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line frontend.

Subcommands: bounds, construct, verify, oracle, benchmark, render.
Exit codes: 0 success/certified, 2 coverage counterexample, 3 inconclusive,
64 usage error, 74 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from gridcover.bounds import CostParams, DomainError, optimal_profile
from gridcover.grid import Grid, GridError, parse_grid
from gridcover.oracle import OracleConfig, OracleError, solve_exact
from gridcover.pathgen import CoveringPath, construct_detailed
from gridcover.verify import audit, verify_coverage

EX_USAGE = 64
EX_IOERR = 74
EX_COUNTEREXAMPLE = 2
EX_INCONCLUSIVE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _load_grid(path: str) -> Grid:
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        data = json.loads(text)
        return Grid([tuple(c) for c in data["squares"]])
    return parse_grid(text)


def _load_path(path: str) -> CoveringPath:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return CoveringPath.from_json_dict(data)


def _params(args) -> CostParams:
    return CostParams(k=args.k, alpha=args.alpha, beta=args.beta)


def _add_cost_flags(sp, require_grid=True):
    sp.add_argument("--grid", required=require_grid, help="grid file (ASCII mask or JSON)")
    sp.add_argument("--k", type=float, required=True, help="coverage radius")
    sp.add_argument("--alpha", type=float, default=1.0, help="cost per unit length")
    sp.add_argument("--beta", type=float, default=0.0, help="cost per stop")


def build_parser() -> _Parser:
    ap = _Parser(prog="gridcover",
                 description="Covering paths on unit-square grids under the l1 metric")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("bounds",
                        help="print the analytic bounds profile for a grid")
    _add_cost_flags(sp)
    sp.add_argument("--json", action="store_true", help="emit JSON instead of text")

    sp = sub.add_parser("construct",
                        help="build a verified covering path")
    _add_cost_flags(sp)
    sp.add_argument("--d", type=float, default=None, help="override the stop spacing")
    sp.add_argument("--scan-phase", type=int, default=1,
                    help="try N x N lattice anchor translations, keep the cheapest")
    sp.add_argument("--out", default=None, help="write path JSON here (default stdout)")
    sp.add_argument("--dump-stops", default=None, help="also write the stop-set JSON here")
    sp.add_argument("--svg", default=None, help="also render the construction to this file")

    sp = sub.add_parser("verify",
                        help="certify coverage of a path file against a grid")
    sp.add_argument("--grid", required=True)
    sp.add_argument("--path", required=True, help="path JSON produced by construct/oracle")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--h", type=float, default=None, help="sample spacing (default k/16)")
    sp.add_argument("--no-exact", action="store_true",
                    help="disable the exact decision; only the sampled margin rule runs")

    sp = sub.add_parser("oracle",
                        help="exact lattice-restricted optimum for tiny instances")
    _add_cost_flags(sp)
    sp.add_argument("--spacing", default="1/2", help="candidate lattice spacing (rational)")
    sp.add_argument("--max-candidates", type=int, default=24)
    sp.add_argument("--max-subset", type=int, default=10)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("benchmark",
                        help="seeded instance suite with ratio CSV and figure")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--seed", type=int, default=None,
                    help="instance seed (default: GRIDCOVER_SEED or 0)")
    sp.add_argument("--k", type=float, default=1.0)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--beta", type=float, default=1.0)
    sp.add_argument("--count", type=int, default=12, help="generated instances")
    sp.add_argument("--max-area", type=int, default=120)
    sp.add_argument("--no-figure", action="store_true")

    sp = sub.add_parser("render",
                        help="render grid/stops/path layers to a figure")
    _add_cost_flags(sp)
    sp.add_argument("--d", type=float, default=None)
    sp.add_argument("--path", default=None, help="overlay a path JSON")
    sp.add_argument("--cells", action="store_true", help="draw tessellation cell boundaries")
    sp.add_argument("--no-stops", action="store_true", help="skip the stop layer")
    sp.add_argument("--out", default="gridcover.svg")
    sp.add_argument("--title", default=None)
    return ap


def _emit(text: str, out: str | None):
    if out is None:
        print(text)
    else:
        Path(out).write_text(text + "\n", encoding="utf-8")


def cmd_bounds(args) -> int:
    g = _load_grid(args.grid)
    p = _params(args)
    profile = optimal_profile(p, g.area, g.perimeter)
    if args.json:
        payload = {"area": g.area, "perimeter": g.perimeter, "convex": g.is_convex,
                   **profile.to_json_dict()}
        print(json.dumps(payload, indent=2))
        return 0
    print(f"grid: A={g.area} P={g.perimeter} convex={g.is_convex} "
          f"connected={g.is_connected}")
    print(f"gamma       = {profile.gamma:.9f}")
    print(f"sigma       = {profile.sigma:.9f}")
    if profile.d_star is not None:
        print(f"d_star      = {profile.d_star:.9f}")
    if profile.l_star is not None:
        print(f"l_star      = {profile.l_star:.6f}")
    if profile.t0_star is not None:
        print(f"t0_star     = {profile.t0_star:.6f}")
    print(f"lower bound = {profile.lower_bound:.6f} (per-area form {profile.lower_bound_paper:.6f})")
    print(f"upper bound = {profile.upper_general:.6f} (general), "
          f"{profile.upper_convex:.6f} (convex)")
    if profile.degenerate:
        print("note: area <= 2k^2, one-stop lower bound in effect")
    return 0


def cmd_construct(args) -> int:
    g = _load_grid(args.grid)
    p = _params(args)
    result = construct_detailed(g, p, d=args.d, scan_phase=args.scan_phase)
    _emit(json.dumps(result.path.to_json_dict(), indent=2), args.out)
    if args.dump_stops and result.stop_set is not None:
        Path(args.dump_stops).write_text(
            json.dumps(result.stop_set.to_json_dict(), indent=2) + "\n", encoding="utf-8")
    if args.svg:
        from gridcover.render import render_figure
        render_figure(g, stop_set=result.stop_set, path=result.path, out=args.svg,
                      title=f"{result.path.method}: cost={result.path.cost:.2f}")
    if result.stop_set is not None:
        a = audit(g, p, result.path, result.stop_set, result.structure)
        if not a.all_ok:
            print("warning: bound audit flagged a violation", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    g = _load_grid(args.grid)
    path = _load_path(args.path)
    report = verify_coverage(g, list(path.stops), args.k, h=args.h,
                             exact_closure=not args.no_exact)
    print(json.dumps(report.to_json_dict(), indent=2))
    if report.certified:
        return 0
    return EX_COUNTEREXAMPLE if report.counterexample is not None else EX_INCONCLUSIVE


def cmd_oracle(args) -> int:
    from fractions import Fraction

    g = _load_grid(args.grid)
    p = _params(args)
    cfg = OracleConfig(spacing=Fraction(args.spacing),
                       max_candidates=args.max_candidates,
                       max_subset_size=args.max_subset)
    path = solve_exact(g, p, cfg)
    _emit(json.dumps(path.to_json_dict(), indent=2), args.out)
    return 0


def cmd_benchmark(args) -> int:
    from gridcover.bench import run_benchmark

    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("GRIDCOVER_SEED", "0"))
    p = _params(args)
    rows = run_benchmark(args.out, seed, p, count=args.count, max_area=args.max_area,
                         make_figure=not args.no_figure)
    print(f"wrote {len(rows)} rows to {Path(args.out) / 'ratios.csv'}")
    return 0


def cmd_render(args) -> int:
    from gridcover.render import render_figure
    from gridcover.stops import build_stop_set

    g = _load_grid(args.grid)
    p = _params(args)
    stop_set = None
    if not args.no_stops:
        d = args.d
        if d is None:
            profile = optimal_profile(p, g.area)
            d = profile.d_star if profile.d_star is not None else 2 * p.k
        stop_set = build_stop_set(g, d, p)
    path = _load_path(args.path) if args.path else None
    out = render_figure(g, stop_set=stop_set, path=path, show_cells=args.cells,
                        out=args.out, title=args.title)
    print(f"wrote {out}")
    return 0


_COMMANDS = {
    "bounds": cmd_bounds,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "benchmark": cmd_benchmark,
    "render": cmd_render,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EX_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (GridError, DomainError, OracleError, ValueError) as exc:
        print(f"gridcover: {exc}", file=sys.stderr)
        return EX_USAGE
    except OSError as exc:
        print(f"gridcover: i/o error: {exc}", file=sys.stderr)
        return EX_IOERR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Commands: classify, equilibria, escape, simulate, scenario-list,
scenario-run, sweep.  Analysis commands print to stdout; run/sweep commands
write files (CSV/JSON data, with `--format svg` additionally rendering a
figure next to the CSV).  Exit codes: 0 success, 1 validation error, 2 I/O
error.  When `--output` is omitted, files land in $REVDYN_OUT_DIR (default:
current directory).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import escape_shock, sweep_regions
from .integrate import SolverConfig
from .model import (CLASSIFY_TOL, DEFAULT_C1, DEFAULT_C2, REGION_GLOSS,
                    Interval, ModelParams, classify_region, equilibria)
from .scenario import (BUILTIN_INFO, ScenarioError, ScenarioSpec,
                       builtin_scenario, builtin_scenarios, parse_scenario,
                       scenario_to_obj)

OUT_DIR_ENV = "REVDYN_OUT_DIR"

_RATES_HELP = (
    "default rates are the natural-log calibrations: c1 = ln 10 = 2.302585... "
    "(spread to 90%% of the population in one month) and c2 = 30 ln 10 = "
    "69.0776... (clear 90%% of protesters in one day)")


def _params_from(args) -> ModelParams:
    return ModelParams(args.alpha, args.beta, args.c1, args.c2)


def _add_param_flags(sub, tol_default=CLASSIFY_TOL):
    sub.add_argument("--alpha", type=float, required=True,
                     help="visibility, in (0,1)")
    sub.add_argument("--beta", type=float, required=True,
                     help="policing capacity, in (0,1)")
    sub.add_argument("--c1", type=float, default=DEFAULT_C1,
                     help="enthusiasm rate, 1/month (default: ln 10)")
    sub.add_argument("--c2", type=float, default=DEFAULT_C2,
                     help="policing efficiency rate, 1/month (default: 30 ln 10)")
    sub.add_argument("--tol", type=float, default=tol_default,
                     help=f"boundary classification tolerance (default: {tol_default})")


def _interval_obj(interval: Interval | None):
    if interval is None:
        return None
    return {"lo": interval.lo, "hi": interval.hi,
            "lo_closed": interval.lo_closed, "hi_closed": interval.hi_closed}


def _equilibrium_obj(eq):
    value = eq.value if isinstance(eq.value, float) else _interval_obj(eq.value)
    return {"value": value, "stability": eq.stability.value,
            "basin": _interval_obj(eq.basin)}


def _print_region_line(region) -> None:
    print(f"region: {region.label.value} ({REGION_GLOSS[region.label]})")
    if region.on_boundary:
        tags = ",".join(sorted(t.value for t in region.on_boundary))
        print(f"boundary: {tags}")


def _cmd_classify(args) -> int:
    params = _params_from(args)
    region = classify_region(params, args.tol)
    if args.format == "json":
        print(json.dumps({
            "region": region.label.value,
            "gloss": REGION_GLOSS[region.label],
            "boundary": sorted(t.value for t in region.on_boundary),
            "c_star": params.c_star,
            "visibility_threshold": params.visibility_threshold,
        }, indent=2))
    else:
        _print_region_line(region)
        print(f"c*: {params.c_star!r}")
        print(f"visibility threshold (1-alpha): {params.visibility_threshold!r}")
    return 0


def _cmd_equilibria(args) -> int:
    params = _params_from(args)
    eqset = equilibria(params, args.tol)
    if args.format == "json":
        print(json.dumps({
            "region": eqset.region.label.value,
            "c_star": params.c_star,
            "equilibria": [_equilibrium_obj(e) for e in eqset.equilibria],
        }, indent=2))
    else:
        _print_region_line(eqset.region)
        print(f"c*: {params.c_star!r}")
        print("equilibria:")
        for eq in eqset.equilibria:
            print(f"  {eq}")
    return 0


def _cmd_escape(args) -> int:
    params = _params_from(args)
    from_value = 0.0 if args.from_eq == "0" else params.c_star
    report = escape_shock(params, from_value)
    if args.format == "json":
        print(json.dumps({
            "from": report.from_equilibrium,
            "minimal_shock": report.minimal_shock,
            "attainment": report.attainment.value,
            "destination": _equilibrium_obj(report.destination),
        }, indent=2))
    else:
        gloss = ("equality suffices" if report.attainment.value == "closed"
                 else "strictly greater required")
        print(f"from: {report.from_equilibrium!r}")
        print(f"minimal_shock: {report.minimal_shock!r}")
        print(f"attainment: {report.attainment.value} ({gloss})")
        print(f"destination: {report.destination}")
    return 0


def _cmd_scenario_list(args) -> int:
    specs = builtin_scenarios()
    if args.format == "json":
        print(json.dumps([scenario_to_obj(s) for s in specs], indent=2))
    else:
        width = max(len(s.name) for s in specs)
        for spec in specs:
            print(f"{spec.name:<{width}}  {BUILTIN_INFO[spec.name]}")
    return 0


def _resolve_output(args, default_name: str) -> Path | None:
    """Output path for a run; None means stdout."""
    if args.output == "-":
        if args.format == "svg":
            raise ValueError("--format svg needs a file output path, not '-'")
        return None
    if args.output:
        return Path(args.output)
    return Path(os.environ.get(OUT_DIR_ENV, ".")) / default_name


def _solver_overrides(args, spec: ScenarioSpec) -> SolverConfig | None:
    overrides = {}
    if args.step is not None:
        overrides["step"] = args.step
    if args.sample_interval is not None:
        overrides["sample_interval"] = args.sample_interval
    if not overrides:
        return None
    base = spec.solver or SolverConfig()
    return SolverConfig(step=overrides.get("step", base.step),
                        crossing_tolerance=base.crossing_tolerance,
                        sample_interval=overrides.get("sample_interval",
                                                      base.sample_interval))


def _run_and_write(spec: ScenarioSpec, args) -> int:
    from . import report

    suffix = ".json" if args.format == "json" else ".csv"
    out = _resolve_output(args, f"{spec.name}{suffix}")
    trajectory = spec.run(_solver_overrides(args, spec))
    if out is None:
        text = (report.trajectory_json_text(trajectory) if args.format == "json"
                else report.trajectory_csv_text(trajectory))
        sys.stdout.write(text)
        return 0
    if args.format == "json":
        report._write_text(report.trajectory_json_text(trajectory), out)
        written = [out]
    else:
        csv_path = out.with_suffix(".csv") if args.format == "svg" else out
        report.write_trajectory_csv(trajectory, csv_path)
        written = [csv_path]
        if args.format == "svg":
            written.append(report.render_trajectory_figure(
                trajectory, out.with_suffix(".svg"), title=spec.name))
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_simulate(args) -> int:
    text = Path(args.scenario).read_text(encoding="utf-8")
    spec = parse_scenario(text)
    return _run_and_write(spec, args)


def _cmd_scenario_run(args) -> int:
    spec = builtin_scenario(args.name)
    return _run_and_write(spec, args)


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be start:end:count, got {text!r}")
    try:
        start, end, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"range must be start:end:count with numeric parts, "
                         f"got {text!r}") from None
    return start, end, count


def _cmd_sweep(args) -> int:
    from . import report

    a_start, a_end, a_count = _parse_range(args.alpha)
    b_start, b_end, b_count = _parse_range(args.beta)
    out = _resolve_output(args, "regions.csv")
    grid = sweep_regions((a_start, a_end), (b_start, b_end),
                         (a_count, b_count), args.c1, args.c2,
                         tol=args.tol, workers=args.workers)
    if out is None:
        sys.stdout.write(report.grid_csv_text(grid))
        return 0
    csv_path = out.with_suffix(".csv") if args.format == "svg" else out
    report.write_grid_csv(grid, csv_path)
    written = [csv_path]
    if args.format == "svg":
        written.append(report.render_grid_figure(
            grid, out.with_suffix(".svg"),
            title=f"regions at c1={args.c1:g}, c2={args.c2:g}"))
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revdyn",
        description="Protest-fraction dynamics: classification, equilibria, "
                    "simulation, parameter sweeps.",
        epilog=_RATES_HELP)
    parser.add_argument("--version", action="version",
                        version=f"revdyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify parameters into a region",
                       epilog=_RATES_HELP)
    _add_param_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("equilibria",
                       help="equilibria, stability and basins for parameters",
                       epilog=_RATES_HELP)
    _add_param_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_equilibria)

    p = sub.add_parser("escape",
                       help="smallest shock that escapes a stable equilibrium",
                       epilog=_RATES_HELP)
    _add_param_flags(p)
    p.add_argument("--from", dest="from_eq", choices=("0", "cstar"),
                   required=True, help="escape from total state control (0) "
                                       "or the civil-unrest point (cstar)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_escape)

    scenario_lines = "\n".join(f"  {name}: {info}"
                               for name, info in BUILTIN_INFO.items())
    p = sub.add_parser("scenario-list", help="list built-in scenarios",
                       formatter_class=argparse.RawDescriptionHelpFormatter,
                       description="List built-in scenarios.\n" + scenario_lines)
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="json dumps the full scenario specs")
    p.set_defaults(func=_cmd_scenario_list)

    def add_run_flags(p):
        p.add_argument("--output", "-o", default=None,
                       help="output path, or '-' for stdout "
                            f"(default: under ${OUT_DIR_ENV} or cwd)")
        p.add_argument("--format", choices=("csv", "json", "svg"),
                       default="csv",
                       help="svg renders a figure alongside the CSV")
        p.add_argument("--step", type=float, default=None,
                       help="override solver step size (months)")
        p.add_argument("--sample-interval", type=float, default=None,
                       help="override output decimation interval (months)")

    p = sub.add_parser("simulate", help="run a scenario file")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    add_run_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("scenario-run", help="run a built-in scenario",
                       formatter_class=argparse.RawDescriptionHelpFormatter,
                       description="Run a built-in scenario.\n" + scenario_lines)
    p.add_argument("name", help="built-in scenario name (see scenario-list)")
    add_run_flags(p)
    p.set_defaults(func=_cmd_scenario_run)

    p = sub.add_parser("sweep", help="classify a grid over the "
                                     "(alpha, beta) plane",
                       epilog=_RATES_HELP)
    p.add_argument("--alpha", required=True, metavar="START:END:COUNT",
                   help="alpha range; COUNT cell centers")
    p.add_argument("--beta", required=True, metavar="START:END:COUNT",
                   help="beta range; COUNT cell centers")
    p.add_argument("--c1", type=float, default=DEFAULT_C1)
    p.add_argument("--c2", type=float, default=DEFAULT_C2)
    p.add_argument("--tol", type=float, default=0.0,
                   help="knife-edge tolerance (default 0: exact hits only)")
    p.add_argument("--workers", type=int, default=None,
                   help="classify grid rows concurrently")
    p.add_argument("--output", "-o", default=None,
                   help="output path, or '-' for stdout")
    p.add_argument("--format", choices=("csv", "svg"), default="csv",
                   help="svg renders the region map alongside the CSV")
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 scenario/validation error,
4 I/O error while writing output.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from typing import Sequence

from tdsim.engine import FlowEvaluationError
from tdsim.report import (
    SweepValueError,
    compare,
    format_summary,
    summarize,
    sweep,
    write_csv,
    write_sweep_csv,
)
from tdsim.scenario import (
    BUILTIN_IDS,
    ScenarioError,
    ScenarioSpec,
    SweepPathError,
    builtin_scenario,
    load_scenario,
    render_scenario,
)

EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4

_DESCRIPTIONS = {
    "s1": "perfective maintenance only (allocation fixed at 1)",
    "s2": "preventive maintenance triggered by productivity decay (table policy, 12-month smooth)",
}


class UsageError(Exception):
    pass


def parse_range(spec: str) -> list[float]:
    """``"v1,v2,..."`` or inclusive ``"start:stop:step"``."""
    try:
        if ":" in spec:
            start, stop, step = (float(p) for p in spec.split(":"))
            if not step > 0 or stop < start:
                raise ValueError
            n = math.floor((stop - start) / step + 1e-9)
            return [round(start + i * step, 12) for i in range(n + 1)]
        values = [float(p) for p in spec.split(",") if p.strip()]
        if not values:
            raise ValueError
        return values
    except ValueError:
        raise UsageError(f"invalid range spec {spec!r}; use 'v1,v2,...' or 'start:stop:step'") from None


def _with_overrides(spec: ScenarioSpec, args) -> ScenarioSpec:
    changes = {k: getattr(args, k) for k in ("dt", "horizon", "record_every") if getattr(args, k) is not None}
    if not changes:
        return spec
    try:
        settings = dataclasses.replace(spec.settings, **changes)
    except ValueError as exc:
        raise ScenarioError("settings", str(exc)) from exc
    return dataclasses.replace(spec, settings=settings)


def _resolve(ref: str, args) -> ScenarioSpec:
    return _with_overrides(load_scenario(ref), args)


def cmd_run(args) -> int:
    spec = _resolve(args.scenario, args)
    run = spec.run()
    _emit(lambda dest: write_csv(run, dest), args.output)
    print(format_summary(summarize(run), spec.name), file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    a, b = _resolve(args.a, args), _resolve(args.b, args)
    report = compare(summarize(a.run()), summarize(b.run()), a.name, b.name)
    text = report.to_json() if args.json else report.render()
    _emit(lambda dest: dest.write(text), args.output)
    return 0


def cmd_sweep(args) -> int:
    param = args.param or args.param_pos
    values = args.values or args.values_pos
    if not param or not values:
        raise UsageError("sweep needs a parameter path and a value list")
    spec = _resolve(args.scenario, args)
    rows = sweep(spec, param, parse_range(values), max_workers=args.jobs)
    _emit(lambda dest: write_sweep_csv(rows, dest, param), args.output)
    return 0


def cmd_scenarios(args) -> int:
    if args.show:
        sys.stdout.write(render_scenario(builtin_scenario(args.show)))
        return 0
    for sid in BUILTIN_IDS:
        print(f"{sid}  {_DESCRIPTIONS[sid]}")
    return 0


def _emit(write, output: str | None) -> None:
    if output is None or output == "-":
        write(sys.stdout)
        return
    try:
        with open(output, "w", newline="") as fh:
            write(fh)
    except OSError as exc:
        raise IOError(f"cannot write {output!r}: {exc.strerror or exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tdsim", description="Technical-debt maintenance policy simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dt", type=float, help="integration step in months (default 0.25)")
    common.add_argument("--horizon", type=float, help="run length in months (default 132)")
    common.add_argument("--record-every", type=float, help="recording interval in months (default 1)")
    common.add_argument("--output", "-o", help="output file (default: standard output)")

    p = sub.add_parser("run", parents=[common], help="run one scenario, CSV to output, summary to stderr")
    p.add_argument("scenario", help="built-in id (s1, s2) or scenario file")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", parents=[common], help="run two scenarios and compare outcomes")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", parents=[common], help="one run per parameter value, summary table as CSV")
    p.add_argument("scenario")
    p.add_argument("param_pos", nargs="?", metavar="param", help="e.g. params.refactoring_effort_necessary")
    p.add_argument("values_pos", nargs="?", metavar="values", help="'v1,v2,...' or 'start:stop:step'")
    p.add_argument("--param")
    p.add_argument("--values")
    p.add_argument("--jobs", type=int, default=None, help="parallel worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("scenarios", help="list built-in scenarios")
    p.add_argument("--show", choices=BUILTIN_IDS, help="print a built-in scenario as a scenario file")
    p.set_defaults(func=cmd_scenarios)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SweepPathError) as exc:
        parser.error(str(exc))
    except (ScenarioError, SweepValueError, FlowEvaluationError) as exc:
        print(f"tdsim: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"tdsim: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"tdsim: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())

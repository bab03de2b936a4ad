"""Command line interface: scenario runs, analytic curves, oracle checks.

Subcommands::

    pagecurve run <preset|scenario-file> [--M ...] [--N ...] [--g ...] ...
    pagecurve analytic <tau-spec> [--renyi 2,inf] [--convention standard]
    pagecurve oracle-check [--max-l 14] [--negative-control]
    pagecurve presets

``run`` flags override the preset/file values, so downsized variants of the
bundled figure presets (smaller N, shorter t_max) are one flag away.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .runner import (
    PRESETS,
    Scenario,
    ScenarioError,
    parse_scenario_file,
    run_oracle_check,
    run_scenario,
)


def _parse_float_list(raw: str) -> tuple[float, ...]:
    return tuple(
        math.inf if s.strip().lower() in ("inf", "infinity") else float(s)
        for s in raw.split(",")
        if s.strip()
    )


def _parse_int_list(raw: str) -> tuple[int, ...]:
    return tuple(int(s) for s in raw.split(",") if s.strip())


def _parse_tau_spec(spec: str) -> np.ndarray:
    """Tau grid spec: 'start:stop:step' or a comma list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ScenarioError(f"tau spec must be start:stop:step, got {spec!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ScenarioError(f"bad tau range {spec!r}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return start + step * np.arange(n)
    return np.asarray(_parse_float_list(spec), dtype=float)


def _apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    updates: dict = {}
    if args.M is not None:
        updates["M"] = _parse_int_list(args.M)
    if args.N is not None:
        updates["N"] = _parse_int_list(args.N)
    if args.g is not None:
        updates["g"] = _parse_float_list(args.g)
    if args.t_sys is not None:
        updates["t_sys"] = args.t_sys
    if args.t_env is not None:
        updates["t_env"] = args.t_env
    if args.t_max is not None:
        updates["t_max"] = args.t_max
        updates["times"] = None
    if args.dt is not None:
        updates["dt"] = args.dt
        updates["times"] = None
    if args.renyi is not None:
        updates["renyi"] = _parse_float_list(args.renyi)
    if args.no_analytic:
        updates["analytic"] = False
    return replace(scenario, **updates) if updates else scenario


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pagecurve",
        description="Exact Page-curve dynamics of a free-fermion chain "
        "emptying into a large environment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a preset or scenario file")
    p_run.add_argument("scenario", help="preset name or path to a scenario file")
    p_run.add_argument("--M", help="comma list, overrides the scenario")
    p_run.add_argument("--N", help="comma list")
    p_run.add_argument("--g", help="comma list")
    p_run.add_argument("--t-sys", dest="t_sys", type=float)
    p_run.add_argument("--t-env", dest="t_env", type=float)
    p_run.add_argument("--t-max", dest="t_max", type=float)
    p_run.add_argument("--dt", type=float)
    p_run.add_argument("--renyi", help="comma list of Renyi orders (inf allowed)")
    p_run.add_argument("--no-analytic", action="store_true")
    p_run.add_argument("--out", default="runs", help="output directory (default: runs)")
    p_run.add_argument("--threads", type=int, default=1, help="parallel sweep workers")
    p_run.add_argument(
        "--convention",
        choices=("standard", "halved"),
        default="standard",
        help="frequency convention of the analytic variance curve",
    )

    p_an = sub.add_parser("analytic", help="emit a universal-curve CSV")
    p_an.add_argument("tau", help="tau grid: 'start:stop:step' or comma list")
    p_an.add_argument("--renyi", default="2")
    p_an.add_argument("--convention", choices=("standard", "halved"), default="standard")
    p_an.add_argument("--out", default="runs")

    p_oc = sub.add_parser("oracle-check", help="Gaussian vs Fock-oracle equivalence")
    p_oc.add_argument("--max-l", dest="max_l", type=int, default=14)
    p_oc.add_argument(
        "--negative-control",
        action="store_true",
        help="corrupt the oracle sign convention; the check must then fail",
    )

    sub.add_parser("presets", help="list built-in figure presets")

    args = parser.parse_args(argv)

    if args.command == "presets":
        for name, sc in PRESETS.items():
            grid = f"t_max={sc.t_max:g}, dt={sc.dt:g}"
            print(
                f"{name}: M={list(sc.M)} N={list(sc.N)} g={list(sc.g)} "
                f"t_env={sc.t_env:g} {grid}"
            )
        return 0

    if args.command == "run":
        if args.scenario in PRESETS:
            scenario = PRESETS[args.scenario]
            preset_name = args.scenario
        else:
            path = Path(args.scenario)
            if not path.exists():
                print(
                    f"error: {args.scenario!r} is neither a preset nor a file "
                    f"(presets: {', '.join(PRESETS)})",
                    file=sys.stderr,
                )
                return 2
            try:
                scenario = parse_scenario_file(path)
            except ScenarioError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
            preset_name = None
        try:
            scenario = _apply_overrides(scenario, args)
            run_dir = run_scenario(
                scenario,
                args.out,
                threads=args.threads,
                preset_name=preset_name,
                convention=args.convention,
            )
        except ScenarioError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"wrote {run_dir}")
        return 0

    if args.command == "analytic":
        from .runner import _write_analytic_csv

        try:
            taus = _parse_tau_spec(args.tau)
        except (ScenarioError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "analytic.csv"
        _write_analytic_csv(path, taus, _parse_float_list(args.renyi), args.convention)
        print(f"wrote {path}")
        return 0

    if args.command == "oracle-check":
        report = run_oracle_check(max_l=args.max_l, corrupt_signs=args.negative_control)
        print(report.summary())
        return 0 if report.ok else 1

    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())

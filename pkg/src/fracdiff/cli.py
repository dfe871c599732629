"""``fracdiff`` command line: run, sweep and verify.

Exit codes: 0 success, 1 configuration error, 2 numerical divergence.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import RunConfig, parse_config, parse_value
from .core import AutoDt, Grid, SolutionField, SolverReport
from .errors import ConfigError, FracDiffError, InvalidCount
from .fdm import FdmOptions, resolve_grid, solve_fdm
from .fem import solve_fem

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED = 0, 1, 2


def snapshot_times(T: float, count: int, first_level: float | None = None) -> list[float]:
    """T/2^(count-1), ..., T/2, T, plus the first computed level if given."""
    if count < 2:
        raise InvalidCount(f"need at least 2 snapshots, got {count}")
    times = [T / 2.0 ** (count - 1 - i) for i in range(count)]
    if first_level is not None and first_level not in times:
        times.append(first_level)
    return sorted(times)


def fmt(v: float) -> str:
    return repr(float(v))


def member_grid(config: RunConfig, alpha: float) -> Grid:
    """Time grid shared by both schemes for one alpha."""
    spec = config.problem(alpha)
    if config.dt is None:
        return resolve_grid(spec, AutoDt(config.safety))
    return Grid.from_dt(config.L, config.N, config.T, config.dt)


def snapshot_levels(config: RunConfig, sol: SolutionField, n_ic: int) -> list[int]:
    g = sol.grid
    first = min(n_ic, g.F)
    levels = []
    for t in snapshot_times(g.T, config.snapshots, first * g.dt):
        f = min(max(round(t / g.dt), 0), g.F)
        if f < sol.levels and f not in levels:
            levels.append(f)
    return levels


def write_profile(path: Path, sol: SolutionField, levels: list[int]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x"] + [f"t={fmt(f * sol.grid.dt)}" for f in levels])
        for i, x in enumerate(sol.x):
            w.writerow([fmt(x)] + [fmt(sol.values[f, i]) for f in levels])


def write_trace(path: Path, sol: SolutionField, probe_x: float) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "u"])
        for t, u in zip(sol.t, sol.trace(probe_x)):
            w.writerow([fmt(t), fmt(u)])


@dataclass(frozen=True)
class MemberResult:
    alpha: float
    scheme: str
    dt: float
    report: SolverReport
    files: tuple

    def as_dict(self) -> dict:
        r = self.report
        return {
            "scheme": self.scheme,
            "alpha": self.alpha,
            "dt": self.dt,
            "stable_dt_max": r.stability_dt_max,
            "diverged": r.diverged,
            "max_abs_value": r.max_abs_value if math.isfinite(r.max_abs_value) else str(r.max_abs_value),
            "wall_time": r.wall_time,
        }


def run_member(config: RunConfig, alpha: float, scheme: str) -> MemberResult:
    spec = config.problem(alpha).with_grid(member_grid(config, alpha))
    if scheme == "fdm":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sol, report = solve_fdm(spec, FdmOptions(memory_window=config.memory_window))
    else:
        sol, report = solve_fem(spec)
    out = Path(config.output_dir)
    tag = f"{scheme}_a{alpha!r}"
    profile = out / f"profile_{tag}.csv"
    trace = out / f"trace_{tag}.csv"
    write_profile(profile, sol, snapshot_levels(config, sol, spec.order.n_ic))
    write_trace(trace, sol, config.probe_x)
    return MemberResult(alpha, scheme, spec.grid.dt, report, (profile.name, trace.name))


def thread_count() -> int:
    env = os.environ.get("FRACDIFF_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def execute(config: RunConfig, concurrent: bool = False) -> tuple[int, list[MemberResult]]:
    Path(config.output_dir).mkdir(parents=True, exist_ok=True)
    members = [(a, s) for a in config.alpha for s in config.schemes]
    if concurrent:
        with ThreadPoolExecutor(max_workers=thread_count()) as pool:
            results = list(pool.map(lambda m: run_member(config, *m), members))
    else:
        results = [run_member(config, a, s) for a, s in members]
    with open(Path(config.output_dir) / "report.json", "w", newline="") as fh:
        json.dump({"members": [r.as_dict() for r in results]}, fh, indent=2)
        fh.write("\n")
    status = EXIT_DIVERGED if any(r.report.diverged for r in results) else EXIT_OK
    return status, results


def apply_overrides(config: RunConfig, args) -> RunConfig:
    changes = {}
    if args.scheme is not None:
        changes["scheme"] = parse_value("scheme", args.scheme)
    if args.alpha is not None:
        changes["alpha"] = parse_value("alpha", args.alpha)
    if args.out is not None:
        changes["output_dir"] = parse_value("output_dir", args.out)
    return dataclasses.replace(config, **changes) if changes else config


def load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


def cmd_verify() -> int:
    from .verify import default_studies

    results = default_studies()
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CONFIG


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits with 2, which is reserved for divergence
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fracdiff", description="Time-fractional diffusion solver")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in (("run", "run every member in order"), ("sweep", "run members concurrently")):
        p = sub.add_parser(name, help=text)
        p.add_argument("config")
        p.add_argument("--scheme", help="fdm, fem or both")
        p.add_argument("--alpha", help="comma-separated orders")
        p.add_argument("--out", help="output directory")
    sub.add_parser("verify", help="run the verification studies")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify()
    try:
        config = apply_overrides(load_config(args.config), args)
    except ConfigError as exc:
        print(f"fracdiff: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        status, results = execute(config, concurrent=args.command == "sweep")
    except FracDiffError as exc:
        print(f"fracdiff: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for r in results:
        flag = "DIVERGED" if r.report.diverged else "ok"
        print(f"{r.scheme} alpha={r.alpha!r} dt={r.dt:.6g} {flag} -> {', '.join(r.files)}")
    return status


if __name__ == "__main__":
    sys.exit(main())

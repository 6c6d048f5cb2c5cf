"""Command-line front end: simulate sweeps, probe adversarial placements, selftest.

Outputs are byte-reproducible: rows are ordered by cell position in the
config, floats are serialized at six significant digits, and the manifest
carries content hashes instead of timestamps. Exit codes: 0 success, 1
config error, 2 invalid parameter, 3 I/O failure, 4 selftest failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from . import selftest as _selftest
from .config import (
    AdversaryPlan,
    ConfigError,
    SweepCell,
    SweepPlan,
    build_adversary,
    build_sweep,
    load_config,
)
from .stats import adversarial_place, competitive_ratio, estimate_hitting_time
from .strategies import ParameterError

__all__ = ["main", "entrypoint", "CSV_COLUMNS"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARAMETER = 2
EXIT_IO = 3
EXIT_SELFTEST = 4

CSV_COLUMNS = [
    "scenario_id", "strategy", "params", "D", "k", "n_trials", "n_censored",
    "mean", "ci_low", "ci_high", "ratio", "time_cap", "seed",
]


def _fmt(value: float) -> str:
    """Six significant digits, no exponent surprises for the common range."""
    return f"{value:.6g}"


# --- simulate ----------------------------------------------------------------------

def _run_cell(cell: SweepCell) -> list[str]:
    estimate = estimate_hitting_time(cell.scenario, cell.n_trials)
    point = competitive_ratio(cell.distance, cell.k, estimate)
    return [
        cell.scenario_id,
        cell.strategy_label,
        cell.params,
        str(cell.distance),
        str(cell.k),
        str(estimate.n_trials),
        str(estimate.n_censored),
        _fmt(estimate.mean),
        _fmt(estimate.ci_low),
        _fmt(estimate.ci_high),
        _fmt(point.ratio),
        str(cell.scenario.time_cap),
        str(cell.scenario.master_seed),
    ]


def cmd_simulate(plan: SweepPlan, out_path: str, threads: int, verbose: bool) -> int:
    if threads > 1:
        # Rows are collected in cell order regardless of completion order,
        # so the worker count cannot change a byte of output.
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_run_cell, plan.cells))
    else:
        rows = []
        for cell in plan.cells:
            if verbose:
                print(f"  cell {cell.scenario_id}", file=sys.stderr)
            rows.append(_run_cell(cell))
    _write_csv(out_path, CSV_COLUMNS, rows)
    _write_manifest(out_path, "simulate", plan.master_seed, len(rows))
    if verbose:
        print(f"wrote {len(rows)} rows to {out_path}", file=sys.stderr)
    return EXIT_OK


# --- adversary ----------------------------------------------------------------------

def cmd_adversary(plan: AdversaryPlan, out_path: str, verbose: bool) -> int:
    placement = adversarial_place(
        plan.strategy, plan.k, plan.distance, plan.budget,
        plan.probe_trials, plan.master_seed)
    from .geometry import ring_point
    from .engine import SOURCE
    rows = []
    for i, prob in enumerate(placement.probabilities):
        cell = ring_point(SOURCE, plan.distance, i)
        rows.append([
            str(cell.x), str(cell.y), str(plan.distance),
            _fmt(prob), "1" if cell == placement.cell else "0",
        ])
    _write_csv(out_path, ["x", "y", "D", "visit_probability", "is_argmin"], rows)
    _write_manifest(out_path, "adversary", plan.master_seed, len(rows))
    if verbose:
        print(
            f"least-covered cell {tuple(placement.cell)} "
            f"p={_fmt(placement.probability)}", file=sys.stderr)
    return EXIT_OK


# --- selftest -----------------------------------------------------------------------

def cmd_selftest(verbose: bool) -> int:
    results = _selftest.run_all()
    width = max(len(r.name) for r in results)
    failed = False
    for r in results:
        line = f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}"
        if verbose or not r.passed:
            line += f"  ({r.detail})"
        print(line)
        failed = failed or not r.passed
    return EXIT_SELFTEST if failed else EXIT_OK


# --- output plumbing -----------------------------------------------------------------

def _write_csv(path: str, header: list[str], rows: list[list[str]]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path!r}: {exc}") from exc


def _write_manifest(out_path: str, command: str, master_seed: int, n_rows: int) -> None:
    try:
        with open(out_path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        manifest = {
            "command": command,
            "csv_sha256": digest,
            "master_seed": master_seed,
            "n_rows": n_rows,
            "tool": {"name": "antsearch", "version": __version__},
        }
        with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise _IOFailure(f"cannot write manifest for {out_path!r}: {exc}") from exc


class _IOFailure(Exception):
    pass


# --- entry point ----------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antsearch",
        description="Collective grid-search simulation laboratory",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a sweep and emit a CSV of estimates")
    sim.add_argument("--config", required=True, help="YAML run configuration")
    sim.add_argument("--out", help="output CSV path (overrides config 'output')")
    sim.add_argument("--threads", type=int, help="worker threads (overrides config)")
    sim.add_argument("--verbose", action="store_true")

    adv = sub.add_parser("adversary", help="probe for the least-covered ring cell")
    adv.add_argument("--config", required=True, help="YAML adversary configuration")
    adv.add_argument("--out", help="output CSV path (overrides config 'output')")
    adv.add_argument("--verbose", action="store_true")

    self_p = sub.add_parser("selftest", help="run the embedded invariant suites")
    self_p.add_argument("--verbose", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "selftest":
            return cmd_selftest(args.verbose)
        cfg = load_config(args.config)
        if args.command == "simulate":
            plan = build_sweep(cfg)
            out = args.out or plan.output
            threads = args.threads or plan.threads
            if threads < 1:
                raise ParameterError(f"threads must be >= 1, got {threads}")
            return cmd_simulate(plan, out, threads, args.verbose)
        plan = build_adversary(cfg)
        out = args.out or plan.output
        return cmd_adversary(plan, out, args.verbose)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParameterError as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except _IOFailure as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    raise SystemExit(main())

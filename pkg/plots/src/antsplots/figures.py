"""Figures from collective-search sweep CSVs.

Strictly a read-only consumer of the simulator's result schema: every
plotted value is either a verbatim row field or a row-local unit
conversion, never a recomputed statistic, so any figure can be audited
against the raw rows. ``render`` returns the exact data series it drew for
the same reason; image bytes vary across matplotlib versions, the data
must not.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

__all__ = [
    "CSV_COLUMNS",
    "FIGURE_KINDS",
    "FigureSpec",
    "PlotError",
    "Point",
    "RenderResult",
    "Series",
    "cli_main",
    "render",
]

# The simulator's documented result schema; extra columns are ignored.
CSV_COLUMNS = (
    "scenario_id",
    "strategy",
    "params",
    "D",
    "k",
    "n_trials",
    "n_censored",
    "mean",
    "ci_low",
    "ci_high",
    "ratio",
    "time_cap",
    "seed",
)

FIGURE_KINDS = ("time_vs_D", "ratio_vs_k", "harmonic_success")

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_IO = 2


class PlotError(ValueError):
    """Schema mismatch, empty selection, or an unusable figure request."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: which CSV, which projection, where to write it."""

    input_csv: str | Path
    figure_kind: str
    output_image: str | Path
    reference_curve: tuple[str, float] | None = None


class Point(NamedTuple):
    """One plotted point, tied back to its CSV row by index.

    ``y_low``/``y_high`` are the row's confidence band where the schema has
    one for the plotted quantity, else they equal ``y``.
    """

    x: float
    y: float
    y_low: float
    y_high: float
    row_index: int


class Series(NamedTuple):
    label: str
    points: tuple[Point, ...]


class RenderResult(NamedTuple):
    figure_kind: str
    series: tuple[Series, ...]
    references: tuple[Series, ...]
    output_image: Path


# --- input ----------------------------------------------------------------------


def _load_rows(path: str | Path) -> list[dict]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            if header is None:
                raise PlotError(f"{path}: empty file, no header")
            missing = [c for c in CSV_COLUMNS if c not in header]
            if missing:
                raise PlotError(f"{path}: missing columns {missing}")
            rows = list(reader)
    except OSError as exc:
        raise PlotError(f"{path}: cannot read ({exc})") from exc
    if not rows:
        raise PlotError(f"{path}: no data rows")
    for i, row in enumerate(rows):
        try:
            row["D"] = int(row["D"])
            row["k"] = int(row["k"])
            row["n_trials"] = int(row["n_trials"])
            row["n_censored"] = int(row["n_censored"])
            row["time_cap"] = int(row["time_cap"])
            for col in ("mean", "ci_low", "ci_high", "ratio"):
                row[col] = float(row[col])
        except (TypeError, ValueError) as exc:
            raise PlotError(f"{path}: row {i + 1} does not parse ({exc})") from exc
        if row["n_trials"] < 1:
            raise PlotError(f"{path}: row {i + 1} has n_trials < 1")
        if not row["ci_low"] <= row["mean"] <= row["ci_high"]:
            raise PlotError(f"{path}: row {i + 1} confidence band does not bracket its mean")
    return rows


# --- projections ------------------------------------------------------------------


def _group(rows: list[dict], key: Callable[[dict], tuple], label: Callable[[dict], str],
           point: Callable[[dict, int], Point]) -> tuple[Series, ...]:
    buckets: dict[tuple, tuple[str, list[Point]]] = {}
    for i, row in enumerate(rows):
        entry = buckets.setdefault(key(row), (label(row), []))
        entry[1].append(point(row, i))
    series = [
        Series(lbl, tuple(sorted(pts, key=lambda p: (p.x, p.row_index))))
        for lbl, pts in buckets.values()
    ]
    series.sort(key=lambda s: s.label)
    return tuple(series)


def _series_time_vs_d(rows: list[dict]) -> tuple[Series, ...]:
    return _group(
        rows,
        key=lambda r: (r["strategy"], r["params"], r["k"]),
        label=lambda r: f"{r['strategy']}[{r['params']}] k={r['k']}",
        point=lambda r, i: Point(float(r["D"]), r["mean"], r["ci_low"], r["ci_high"], i),
    )


def _series_ratio_vs_k(rows: list[dict]) -> tuple[Series, ...]:
    return _group(
        rows,
        key=lambda r: (r["strategy"], r["params"], r["D"]),
        label=lambda r: f"{r['strategy']}[{r['params']}] D={r['D']}",
        point=lambda r, i: Point(float(r["k"]), r["ratio"], r["ci_low"], r["ci_high"], i),
    )


def _series_harmonic_success(rows: list[dict]) -> tuple[Series, ...]:
    def success(r: dict, i: int) -> Point:
        rate = 1.0 - r["n_censored"] / r["n_trials"]
        return Point(float(r["time_cap"]), rate, rate, rate, i)

    return _group(
        rows,
        key=lambda r: (r["strategy"], r["params"], r["D"], r["k"]),
        label=lambda r: f"{r['strategy']}[{r['params']}] D={r['D']} k={r['k']}",
        point=success,
    )


# log2-bucket shapes for ratio reference curves, evaluated at x = k
_RATIO_SHAPES: dict[str, Callable[[float], float]] = {
    "constant": lambda k: 1.0,
    "log": lambda k: math.floor(math.log2(k)) + 1.0,
    "square_log": lambda k: (math.floor(math.log2(k)) + 1.0) ** 2,
}


def _reference_series(kind: str, series: tuple[Series, ...],
                      reference: tuple[str, float], rows: list[dict]) -> tuple[Series, ...]:
    name, constant = reference
    if kind == "ratio_vs_k":
        shape = _RATIO_SHAPES.get(name)
        if shape is None:
            raise PlotError(f"unknown ratio reference {name!r}; choose from {sorted(_RATIO_SHAPES)}")
        xs = sorted({p.x for s in series for p in s.points})
        pts = tuple(Point(x, constant * shape(x), constant * shape(x), constant * shape(x), -1)
                    for x in xs)
        return (Series(f"{constant:g}*{name}", pts),)
    if kind == "time_vs_D":
        if name != "benchmark":
            raise PlotError(f"time_vs_D supports only the 'benchmark' reference, got {name!r}")
        out = []
        for s in series:
            k = rows[s.points[0].row_index]["k"]
            pts = tuple(
                Point(p.x, constant * (p.x + p.x * p.x / k),
                      constant * (p.x + p.x * p.x / k),
                      constant * (p.x + p.x * p.x / k), -1)
                for p in s.points
            )
            out.append(Series(f"{constant:g}*(D+D^2/{k})", pts))
        return tuple(out)
    raise PlotError(f"{kind} does not take a reference curve")


# --- rendering --------------------------------------------------------------------


def render(figure: FigureSpec) -> RenderResult:
    """Draw one figure and return exactly the data series it plotted.

    Raises PlotError before anything is written when the CSV does not
    parse, has no rows, or the request is inconsistent; the output file is
    created only after every value is extracted.
    """
    if figure.figure_kind not in FIGURE_KINDS:
        raise PlotError(f"unknown figure kind {figure.figure_kind!r}; choose from {FIGURE_KINDS}")
    rows = _load_rows(figure.input_csv)

    if figure.figure_kind == "time_vs_D":
        series = _series_time_vs_d(rows)
        x_label, y_label, log_log = "distance D", "mean hitting time", True
    elif figure.figure_kind == "ratio_vs_k":
        series = _series_ratio_vs_k(rows)
        x_label, y_label, log_log = "team size k", "ratio vs D + D^2/k", True
    else:
        series = _series_harmonic_success(rows)
        x_label, y_label, log_log = "time budget", "success rate", False

    references: tuple[Series, ...] = ()
    if figure.reference_curve is not None:
        references = _reference_series(figure.figure_kind, series, figure.reference_curve, rows)

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    try:
        for s in series:
            xs = [p.x for p in s.points]
            ys = [p.y for p in s.points]
            if figure.figure_kind == "time_vs_D":
                # the band is the mean's confidence interval, verbatim
                yerr = (
                    [p.y - p.y_low for p in s.points],
                    [p.y_high - p.y for p in s.points],
                )
            elif figure.figure_kind == "ratio_vs_k":
                # unit conversion of the mean's band onto the ratio axis
                yerr = (
                    [0.0 if rows[p.row_index]["mean"] == 0 else (p.y - p.y_low * p.y / rows[p.row_index]["mean"]) for p in s.points],
                    [0.0 if rows[p.row_index]["mean"] == 0 else (p.y_high * p.y / rows[p.row_index]["mean"] - p.y) for p in s.points],
                )
            else:
                yerr = None
            ax.errorbar(xs, ys, yerr=yerr, marker="o", capsize=3, label=s.label)
        for s in references:
            ax.plot([p.x for p in s.points], [p.y for p in s.points],
                    linestyle="--", color="gray", label=s.label)
        if log_log:
            ax.set_xscale("log")
            ax.set_yscale("log")
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        out = Path(figure.output_image)
        # OSError from the writer propagates as-is: bad output paths are an
        # I/O failure, not a schema problem.
        fig.savefig(out, dpi=150, bbox_inches="tight")
    finally:
        plt.close(fig)
    return RenderResult(figure.figure_kind, series, references, out)


# --- command line -----------------------------------------------------------------


def cli_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="antsplots", description="render a sweep result CSV into a figure"
    )
    parser.add_argument("--csv", required=True, help="input result CSV")
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--out", required=True, help="output image path (format by extension)")
    parser.add_argument(
        "--reference",
        nargs=2,
        metavar=("NAME", "CONSTANT"),
        help="overlay a named reference curve scaled by CONSTANT",
    )
    args = parser.parse_args(argv)

    reference = None
    if args.reference is not None:
        try:
            reference = (args.reference[0], float(args.reference[1]))
        except ValueError:
            print(f"antsplots: reference constant {args.reference[1]!r} is not a number",
                  file=sys.stderr)
            return EXIT_BAD_INPUT
    try:
        result = render(FigureSpec(args.csv, args.kind, args.out, reference))
    except PlotError as exc:
        print(f"antsplots: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"antsplots: {exc}", file=sys.stderr)
        return EXIT_IO
    n_points = sum(len(s.points) for s in result.series)
    print(f"wrote {result.figure_kind} ({len(result.series)} series, {n_points} points) "
          f"to {result.output_image}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(cli_main())

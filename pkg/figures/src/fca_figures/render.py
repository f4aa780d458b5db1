"""Turn sweep CSVs into the standard figures.

Four kinds, all fed by the harness CSV schema (or, for round traces, the
per-round trace CSV):

* ``bound-a``      analytic trial-bound surface, log vertical axis,
                   one curve per wiretap rate
* ``trials-a``     measured trial counts averaged over runs, log axis,
                   one curve per wiretap rate
* ``correction-b`` correction ratio with its zero line, one curve per
                   wiretap rate
* ``rounds-table`` per-round flipped/correct counts of one flipping-attack
                   run

Rendering is read-only over inputs and overwrites its output
deterministically.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

KINDS = ("bound-a", "trials-a", "correction-b", "rounds-table")

# kind -> (x column, series column, y column) defaults
_DEFAULTS = {
    "bound-a": ("p1", "p2", "bound"),
    "trials-a": ("p1", "p2", "trials"),
    "correction-b": ("p1", "p2", "c_ratio"),
    "rounds-table": ("round", None, "correct_bits"),
}


class NamedColumnError(ValueError):
    """A referenced column is missing from the CSV header."""

    def __init__(self, column: str, available):
        super().__init__(f"column {column!r} not in CSV header {sorted(available)}")
        self.column = column


class EmptyInputError(ValueError):
    """The CSV has no data rows; no image is produced."""


@dataclass(frozen=True)
class FigureSpec:
    csv: str
    kind: str
    out: str
    x: str = None  # type: ignore[assignment]
    series: str = None  # type: ignore[assignment]
    y: str = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}, expected one of {KINDS}")
        dx, dseries, dy = _DEFAULTS[self.kind]
        object.__setattr__(self, "x", self.x or dx)
        object.__setattr__(self, "series", self.series or dseries)
        object.__setattr__(self, "y", self.y or dy)


def parse_spec(text: str) -> FigureSpec:
    """Flat key = value lines; '#' starts a comment."""
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        mapping[key.strip()] = value.strip()
    known = {"csv", "kind", "out", "x", "series", "y"}
    unknown = set(mapping) - known
    if unknown:
        raise ValueError(f"unknown spec keys: {sorted(unknown)}")
    for required in ("csv", "kind", "out"):
        if required not in mapping:
            raise ValueError(f"spec key {required!r} is required")
    return FigureSpec(**mapping)


def load_rows(path: str, columns) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in columns:
            if col and col not in header:
                raise NamedColumnError(col, header)
        rows = list(reader)
    if not rows:
        raise EmptyInputError(f"{path} has no data rows")
    return rows


def series_means(rows, x: str, series: str, y: str):
    """Mean of y per (series value, x value), numerically sorted."""
    buckets = defaultdict(list)
    for row in rows:
        if row[y] == "":
            continue
        buckets[(float(row[series]), float(row[x]))].append(float(row[y]))
    if not buckets:
        raise EmptyInputError(f"no rows carry a {y!r} value")
    out: dict[float, list[tuple[float, float]]] = defaultdict(list)
    for (s, x_val), ys in sorted(buckets.items()):
        out[s].append((x_val, sum(ys) / len(ys)))
    return out


def render(spec: FigureSpec) -> str:
    """Write the figure for ``spec``; returns the output path."""
    if spec.kind == "rounds-table":
        rows = load_rows(spec.csv, ("round", "bits_flipped", "correct_bits"))
        rounds = [int(r["round"]) for r in rows]
        flipped = [int(r["bits_flipped"]) for r in rows]
        correct = [int(r["correct_bits"]) for r in rows]
        fig, ax = plt.subplots(figsize=(7, 4.5))
        ax.plot(rounds, correct, marker="o", color="tab:blue", label="correct bits")
        ax.set_xlabel("round")
        ax.set_ylabel("correct bits", color="tab:blue")
        twin = ax.twinx()
        twin.bar(rounds, flipped, alpha=0.4, color="tab:orange", label="bits flipped")
        twin.set_ylabel("bits flipped", color="tab:orange")
        ax.set_title("flipping-attack round trace")
    else:
        rows = load_rows(spec.csv, (spec.x, spec.series, spec.y))
        families = series_means(rows, spec.x, spec.series, spec.y)
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for s_value, points in families.items():
            xs = [p[0] for p in points]
            ys = [p[1] for p in points]
            ax.plot(xs, ys, marker="o", label=f"{spec.series}={s_value:g}")
        if spec.kind in ("bound-a", "trials-a"):
            ax.set_yscale("log")
        if spec.kind == "correction-b":
            ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_xlabel(spec.x)
        ax.set_ylabel(spec.y)
        ax.legend()
        titles = {
            "bound-a": "expected trial bound",
            "trials-a": "measured trials",
            "correction-b": "correction ratio",
        }
        ax.set_title(titles[spec.kind])
    fig.tight_layout()
    out = Path(spec.out)
    fig.savefig(out)
    plt.close(fig)
    return str(out)

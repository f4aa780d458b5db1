"""Seeded experiment orchestration: grids, sweeps, and CSV persistence.

A sweep is a flat config (key = value lines or CLI flags) naming a
polynomial, an observed length, grids over the two channel rates, the
attack or analysis to run, and a base seed. One result row is emitted per
(grid point, run); run r uses run_seed = seed + r, so any row can be
replayed in isolation, and the same run index reuses the same key and
noise draws across grid points (paired comparisons). Rows are written in
canonical grid order (p1 outer, p2 inner, runs innermost) whatever the
worker count, so output bytes depend only on the config.
"""

from __future__ import annotations

import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .attack_a import AttackAConfig, bound_trials, estimate_rbar, run_attack_a
from .attack_b import AttackBConfig, derive_threshold, run_attack_b
from .channel import ChannelParams, run_pipeline
from .checks import CheckSystem, ReliabilityModel, build_checks
from .lfsr import ConnectionPolynomial, LfsrKey

ATTACKS = ("A", "B", "bound-A", "correction-ratio")

CSV_COLUMNS = (
    "poly", "k", "t", "n", "attack", "p1", "p2", "p_prime", "seed", "run",
    "success", "outcome", "trials", "rounds", "correct_bits",
    "c_ratio", "p_thr", "rbar", "h_prime", "m_prime", "bound",
)


class ConfigError(ValueError):
    """Invalid experiment configuration; ``problems`` lists every violation."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class ExperimentConfig:
    poly: ConnectionPolynomial
    n: int
    p1: tuple[float, ...]
    p2: tuple[float, ...]
    attack: str
    seed: int = 0
    runs: int = 1
    out: Optional[str] = None
    membership: str = "all"

    def validate(self) -> list[str]:
        problems = []
        if self.n <= self.poly.degree:
            problems.append(f"n: must exceed the polynomial degree {self.poly.degree}")
        for name, grid in (("p1", self.p1), ("p2", self.p2)):
            if not grid:
                problems.append(f"{name}: grid must be non-empty")
            for p in grid:
                if not 0.0 <= p <= 0.5:
                    problems.append(f"{name}: value {p} outside [0, 0.5]")
        if self.attack not in ATTACKS:
            problems.append(f"attack: unknown kind {self.attack!r}, expected one of {ATTACKS}")
        if self.runs < 1:
            problems.append("runs: must be at least 1")
        if self.membership not in ("all", "leading"):
            problems.append(f"membership: must be 'all' or 'leading', got {self.membership!r}")
        return problems

    def render(self) -> str:
        """Flat key = value form; parse_config inverts this exactly."""
        lines = [
            f"poly = {self.poly.to_string()}",
            f"n = {self.n}",
            f"p1 = {format_grid(self.p1)}",
            f"p2 = {format_grid(self.p2)}",
            f"attack = {self.attack}",
            f"seed = {self.seed}",
            f"runs = {self.runs}",
            f"membership = {self.membership}",
        ]
        if self.out is not None:
            lines.append(f"out = {self.out}")
        return "\n".join(lines) + "\n"


def format_grid(grid: tuple[float, ...]) -> str:
    return ",".join(format_number(p) for p in grid)


def format_number(x: float) -> str:
    return f"{x:.6g}"


def parse_grid(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def parse_config(text: str) -> dict[str, str]:
    """Read flat key = value lines; '#' starts a comment."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError([f"line {lineno}: expected 'key = value', got {raw!r}"])
        key, value = line.split("=", 1)
        mapping[key.strip()] = value.strip()
    return mapping


_KNOWN_KEYS = ("poly", "n", "p1", "p2", "attack", "seed", "runs", "out", "membership")


def config_from_mapping(mapping: dict[str, str]) -> ExperimentConfig:
    """Build and validate a config, reporting every problem at once."""
    problems = [f"{k}: unknown key" for k in mapping if k not in _KNOWN_KEYS]
    poly = None
    if "poly" not in mapping:
        problems.append("poly: required")
    else:
        try:
            poly = ConnectionPolynomial.from_string(mapping["poly"])
        except ValueError as exc:
            problems.append(f"poly: {exc}")

    def get_int(key: str, default=None):
        if key not in mapping:
            if default is None:
                problems.append(f"{key}: required")
            return default
        try:
            return int(mapping[key])
        except ValueError:
            problems.append(f"{key}: not an integer: {mapping[key]!r}")
            return default

    def get_grid(key: str) -> tuple[float, ...]:
        try:
            return parse_grid(mapping.get(key, "0"))
        except ValueError:
            problems.append(f"{key}: not a number list: {mapping[key]!r}")
            return ()

    n = get_int("n")
    seed = get_int("seed", 0)
    runs = get_int("runs", 1)
    p1 = get_grid("p1")
    p2 = get_grid("p2")
    attack = mapping.get("attack", "A")
    membership = mapping.get("membership", "all")
    if problems:
        raise ConfigError(problems)
    cfg = ExperimentConfig(
        poly=poly, n=n, p1=p1, p2=p2, attack=attack,
        seed=seed, runs=runs, out=mapping.get("out"), membership=membership,
    )
    problems = cfg.validate()
    if problems:
        raise ConfigError(problems)
    return cfg


_checks_cache: dict[tuple, CheckSystem] = {}


def _cached_checks(poly: ConnectionPolynomial, n: int, membership: str) -> CheckSystem:
    key = (poly.exponents, n, membership)
    if key not in _checks_cache:
        _checks_cache[key] = build_checks(poly, n, membership=membership)
    return _checks_cache[key]


def _blank_row(cfg: ExperimentConfig, p1: float, p2: float, run: int) -> dict:
    params = ChannelParams(p1, p2)
    row = {c: None for c in CSV_COLUMNS}
    row.update(
        poly=cfg.poly.to_string(), k=cfg.poly.degree, t=cfg.poly.taps, n=cfg.n,
        attack=cfg.attack, p1=p1, p2=p2, p_prime=params.p_prime,
        seed=cfg.seed + run, run=run,
    )
    return row


def run_task(cfg: ExperimentConfig, p1: float, p2: float, run: int) -> dict:
    """Execute one (grid point, run); pure function of its arguments."""
    row = _blank_row(cfg, p1, p2, run)
    params = ChannelParams(p1, p2)
    checks = _cached_checks(cfg.poly, cfg.n, cfg.membership)
    model = ReliabilityModel.for_poly(params.p_prime, cfg.poly)
    run_seed = cfg.seed + run

    if cfg.attack == "bound-A":
        rbar, h_prime, m_prime = estimate_rbar(cfg.poly.degree, cfg.n, checks, model)
        _, bound = bound_trials(cfg.poly.degree, min(rbar, cfg.poly.degree))
        row.update(rbar=rbar, h_prime=h_prime, m_prime=m_prime, bound=bound)
        return row

    if cfg.attack == "correction-ratio":
        analysis = derive_threshold(model, checks, cfg.n)
        row.update(c_ratio=analysis.ratio, p_thr=analysis.p_thr, m_prime=analysis.m_ref)
        return row

    key = LfsrKey.random(cfg.poly.degree, np.random.default_rng(run_seed))
    trace = run_pipeline(cfg.poly, key, params, cfg.n, seed=run_seed)

    if cfg.attack == "A":
        report = run_attack_a(
            AttackAConfig(
                poly=cfg.poly, y=trace.y, p_prime=params.p_prime,
                verification="oracle", true_key=key, checks=checks,
            )
        )
        row.update(
            success=report.success, trials=report.trials,
            rbar=report.rbar, bound=report.bound,
            outcome="success" if report.success else "exhausted",
        )
        return row

    report = run_attack_b(
        AttackBConfig(
            poly=cfg.poly, y=trace.y, p_prime=params.p_prime,
            true_key=key, checks=checks,
        )
    )
    correct = report.traces[-1].correct_bits if report.traces else cfg.n
    row.update(
        success=report.success, rounds=report.rounds, outcome=report.outcome,
        correct_bits=correct, p_thr=report.p_thr,
    )
    return row


def _task_args(cfg: ExperimentConfig):
    for p1 in cfg.p1:
        for p2 in cfg.p2:
            for run in range(cfg.runs):
                yield (cfg, p1, p2, run)


def _run_task_tuple(args):
    return run_task(*args)


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[dict]:
    """All rows of a sweep in canonical grid order."""
    problems = cfg.validate()
    if problems:
        raise ConfigError(problems)
    tasks = list(_task_args(cfg))
    if workers <= 1:
        return [run_task(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task_tuple, tasks))


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([format_cell(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(rows: list[dict], out: Optional[str]) -> None:
    text = rows_to_csv(rows)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)

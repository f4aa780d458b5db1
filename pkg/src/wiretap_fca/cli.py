"""Command-line front end.

Subcommands: simulate, attack-a, attack-b, bound-a, correction-ratio,
sweep. Flags mirror the flat config-file keys; a --config file supplies
defaults and explicit flags override it. Exit status: 0 on success, 1 on
any validation problem, 2 when attack runs completed but contain
failures.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .attack_b import AttackBConfig, UndefinedRatioError, run_attack_b
from .channel import ChannelParams, run_pipeline
from .harness import (
    ConfigError,
    ExperimentConfig,
    config_from_mapping,
    format_number,
    parse_config,
    run_experiment,
    write_csv,
)
from .lfsr import ConnectionPolynomial, LfsrKey, small_period_ok

import numpy as np


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _add_common(p: _Parser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--poly", help="polynomial exponent list, e.g. 31,21,12,3,2,1,0")
    p.add_argument("--n", type=int, help="observed sequence length")
    p.add_argument("--p1", help="keystream BSC rate, or comma grid")
    p.add_argument("--p2", help="wiretap BSC rate, or comma grid")
    p.add_argument("--seed", type=int, help="base seed (run r uses seed + r)")
    p.add_argument("--runs", type=int, help="runs per grid point")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--membership", choices=("all", "leading"),
                   help="per-bit check counting mode")


def _build_parser() -> _Parser:
    top = _Parser(prog="wiretap-fca", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "run the observation pipeline, emit per-bit CSV"),
        ("attack-a", "reliability-selection attack over a seed grid"),
        ("attack-b", "iterative bit-flipping attack over a seed grid"),
        ("bound-a", "analytic trial-count bound surface"),
        ("correction-ratio", "correction-capability ratio C"),
        ("sweep", "run the attack named in the config"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--attack", choices=("A", "B", "bound-A", "correction-ratio"))
        if name == "attack-b":
            p.add_argument("--trace-out", help="round-trace CSV (single grid point, runs=1)")
    return top


_ATTACK_OF_COMMAND = {
    "simulate": "A",  # unused by the pipeline dump; keeps the config valid
    "attack-a": "A",
    "attack-b": "B",
    "bound-a": "bound-A",
    "correction-ratio": "correction-ratio",
}


def _merged_mapping(args) -> dict[str, str]:
    mapping: dict[str, str] = {}
    if args.config:
        with open(args.config) as fh:
            mapping.update(parse_config(fh.read()))
    for key in ("poly", "n", "p1", "p2", "seed", "runs", "out", "membership"):
        value = getattr(args, key, None)
        if value is not None:
            mapping[key] = str(value)
    if args.command == "sweep":
        if getattr(args, "attack", None):
            mapping["attack"] = args.attack
    else:
        mapping["attack"] = _ATTACK_OF_COMMAND[args.command]
    return mapping


def _fail(problems) -> int:
    for p in problems:
        sys.stderr.write(f"error: {p}\n")
    return 1


def _cmd_simulate(cfg: ExperimentConfig) -> int:
    if len(cfg.p1) != 1 or len(cfg.p2) != 1:
        return _fail(["simulate takes scalar p1 and p2"])
    params = ChannelParams(cfg.p1[0], cfg.p2[0])
    key = LfsrKey.random(cfg.poly.degree, np.random.default_rng(cfg.seed))
    trace = run_pipeline(cfg.poly, key, params, cfg.n, seed=cfg.seed)
    lines = ["index,a,z,m,s,y"]
    for i in range(cfg.n):
        lines.append(
            f"{i},{trace.a[i]},{trace.z[i]},{trace.m[i]},{trace.s[i]},{trace.y[i]}"
        )
    text = "\n".join(lines) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    return 0


def _write_trace(cfg: ExperimentConfig, path: str) -> int:
    if len(cfg.p1) != 1 or len(cfg.p2) != 1 or cfg.runs != 1:
        return _fail(["--trace-out needs a single grid point and runs = 1"])
    params = ChannelParams(cfg.p1[0], cfg.p2[0])
    key = LfsrKey.random(cfg.poly.degree, np.random.default_rng(cfg.seed))
    pipe = run_pipeline(cfg.poly, key, params, cfg.n, seed=cfg.seed)
    report = run_attack_b(
        AttackBConfig(poly=cfg.poly, y=pipe.y, p_prime=params.p_prime, true_key=key)
    )
    with open(path, "w") as fh:
        fh.write("round,bits_flipped,correct_bits\n")
        for tr in report.traces:
            fh.write(f"{tr.round},{tr.bits_flipped},{tr.correct_bits}\n")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = config_from_mapping(_merged_mapping(args))
    except ConfigError as exc:
        return _fail(exc.problems)

    if cfg.poly.degree <= 16 and not small_period_ok(cfg.poly):
        sys.stderr.write(
            f"warning: polynomial {cfg.poly} is not maximal-length "
            f"(period below 2^{cfg.poly.degree} - 1)\n"
        )

    if args.command == "simulate":
        return _cmd_simulate(cfg)

    trace_out = getattr(args, "trace_out", None)
    if trace_out:
        status = _write_trace(cfg, trace_out)
        if status:
            return status

    try:
        rows = run_experiment(cfg, workers=args.workers)
    except ConfigError as exc:
        return _fail(exc.problems)
    except UndefinedRatioError as exc:
        return _fail([str(exc)])

    if cfg.attack == "correction-ratio":
        for row in rows:
            if row["run"] == 0:
                sys.stdout.write(
                    f"p1={format_number(row['p1'])} p2={format_number(row['p2'])} "
                    f"C={format_number(row['c_ratio'])}\n"
                )
    write_csv(rows, cfg.out)

    if cfg.attack in ("A", "B") and any(row["success"] is False for row in rows):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    frametol tolerance --d 1 --rho 1
    frametol sweep --rho 0.5 --dmax 10000 --format json
    frametol diagnose --d 1000 --rho 1
    frametol lemma --trials 200 --seed 42
    frametol frame --d 1 --delta 0.15 --trials 20
    frametol selfcheck --grid 10000

Exit codes: 0 success, 1 invalid arguments, 2 verification failure,
3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from frametol import checks, frame_lab
from frametol.tolerance import (
    ConvergenceError,
    DomainError,
    FrameRatio,
    mainprop_diagnostics,
    omega_d,
    solve_x_d,
)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ARGS, EXIT_VERIFY, EXIT_NOCONV = 0, 1, 2, 3
TOLERANCE_FIELDS = ["d", "rho", "x_d", "omega_d", "correction", "ratio", "residual"]
SWEEP_FIELDS = TOLERANCE_FIELDS + ["mp1", "mp2", "mp3"]
D_MAX_LIMIT = 10**6


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    d: int = 1
    d_max: int = 10_000
    rho: float = 1.0
    tol: float = 1e-12
    seed: int = 42
    trials: int = 100
    grid: int = 10_000
    format: str = "csv"
    output: str = "-"
    delta: float = 0.15
    window: int = 64
    interior: int = 48
    max_nodes: int = 40
    max_delta: float = 0.2
    coeff_trials: int = 20

    def validate(self) -> None:
        if self.d < 1:
            raise UsageError(f"--d must be an integer >= 1, got {self.d}")
        if not 1 <= self.d_max <= D_MAX_LIMIT:
            raise UsageError(f"--dmax must lie in [1, {D_MAX_LIMIT}], got {self.d_max}")
        if not 0.0 < self.rho <= 1.0:
            raise UsageError(f"--rho must lie in (0, 1] (rho = A/B with A <= B), got {self.rho}")
        if not self.tol >= 1e-14:
            raise UsageError(f"--tol must be >= 1e-14, got {self.tol}")
        if self.trials < 1 or self.grid < 1 or self.coeff_trials < 1:
            raise UsageError("--trials, --grid and --coeff-trials must be >= 1")
        if self.subcommand == "frame":
            limit = omega_d(self.d, FrameRatio(1.0, 1.0))
            if not 0.0 <= self.delta < limit:
                raise UsageError(
                    f"--delta must lie in [0, ln(2)/(pi d)) = [0, {limit:.17g}) for d={self.d}"
                )
            if not 0 <= self.interior < self.window:
                raise UsageError(f"need 0 <= --M < --N, got M={self.interior}, N={self.window}")
        if self.subcommand == "lemma":
            if self.max_nodes < 1 or not 0.0 <= self.max_delta:
                raise UsageError("--max-nodes must be >= 1 and --max-delta >= 0")


def d_ladder(d_max: int) -> list[int]:
    ladder, d = [], 1
    while d <= d_max:
        ladder.append(d)
        d *= 10
    if ladder[-1] != d_max:
        ladder.append(d_max)
    return ladder


def _fmt(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _jsonable(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(format(float(value), ".17g"))
        return v if math.isfinite(v) else str(v)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render(rows: list[dict], fields: Sequence[str], fmt: str, single: bool) -> str:
    if fmt == "json":
        payload = rows[0] if single else rows
        return json.dumps(_jsonable(payload), indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in fields])
    return buf.getvalue()


def emit(text: str, output: str) -> None:
    if output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)


def _tolerance_row(d: int, cfg: RunConfig) -> dict:
    rep = solve_x_d(d, FrameRatio.from_rho(cfg.rho), cfg.tol)
    row = rep.as_row()
    row["d"] = d
    return row


def run_tolerance(cfg: RunConfig) -> int:
    row = _tolerance_row(cfg.d, cfg)
    emit(render([row], TOLERANCE_FIELDS, cfg.format, single=True), cfg.output)
    return EXIT_OK


def run_sweep(cfg: RunConfig) -> int:
    ratio = FrameRatio.from_rho(cfg.rho)
    rows = []
    for d in d_ladder(cfg.d_max):
        row = _tolerance_row(d, cfg)
        row.update(mainprop_diagnostics(d, ratio, cfg.tol)._asdict())
        rows.append(row)
    emit(render(rows, SWEEP_FIELDS, cfg.format, single=False), cfg.output)
    return EXIT_OK


def run_diagnose(cfg: RunConfig) -> int:
    row = checks.diagnose(cfg.d, FrameRatio.from_rho(cfg.rho), cfg.tol)
    emit(render([row], list(row), cfg.format, single=True), cfg.output)
    return EXIT_OK


def run_verification(cfg: RunConfig) -> int:
    if cfg.subcommand == "lemma":
        summary = checks.lemma_suite(
            systems=cfg.trials,
            seed=cfg.seed,
            max_nodes=cfg.max_nodes,
            max_delta=cfg.max_delta,
            coeff_trials=cfg.coeff_trials,
        )
    elif cfg.subcommand == "frame":
        summary = checks.frame_suite(
            d=cfg.d,
            window_halfwidth=cfg.window,
            interior_halfwidth=cfg.interior,
            delta=cfg.delta,
            trials=cfg.trials,
            seed=cfg.seed,
        )
    else:
        summary = checks.selfcheck(cfg.grid, cfg.tol)
    emit(json.dumps(_jsonable(summary), indent=2) + "\n", cfg.output)
    return EXIT_OK if summary["passed"] else EXIT_VERIFY


RUNNERS = {
    "tolerance": run_tolerance,
    "sweep": run_sweep,
    "diagnose": run_diagnose,
    "lemma": run_verification,
    "frame": run_verification,
    "selfcheck": run_verification,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--rho", type=float, default=1.0, help="frame ratio A/B in (0, 1]")
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--grid", type=int, default=10_000)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="frametol", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("tolerance", parents=[common], help="x_d, omega_d and their ratio")
    p.add_argument("--d", type=int, default=1)

    p = sub.add_parser("sweep", parents=[common], help="tolerance table over d = 1, 10, ..., dmax")
    p.add_argument("--dmax", dest="d_max", type=int, default=10_000)

    p = sub.add_parser("diagnose", parents=[common], help="limit diagnostics at one d")
    p.add_argument("--d", type=int, default=1)

    p = sub.add_parser("lemma", parents=[common], help="randomized perturbation-bound suite")
    p.add_argument("--max-nodes", dest="max_nodes", type=int, default=40)
    p.add_argument("--max-delta", dest="max_delta", type=float, default=0.2)
    p.add_argument("--coeff-trials", dest="coeff_trials", type=int, default=20)

    p = sub.add_parser("frame", parents=[common], help="perturbed lattice margin experiment")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--delta", type=float, default=0.15)
    p.add_argument("--N", dest="window", type=int, default=64, help="node window half-width")
    p.add_argument("--M", dest="interior", type=int, default=48, help="test window half-width")

    sub.add_parser("selfcheck", parents=[common], help="kernel and tolerance invariant grids")
    return parser


def parse_config(argv: Sequence[str] | None) -> tuple[RunConfig, bool]:
    ns = vars(build_parser().parse_args(argv))
    verbose = ns.pop("verbose")
    cfg = RunConfig(**ns)
    cfg.validate()
    return cfg, verbose


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg, verbose = parse_config(argv)
    except UsageError as exc:
        print(f"frametol: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING)
    log.info("running %s", cfg)
    try:
        return RUNNERS[cfg.subcommand](cfg)
    except DomainError as exc:
        print(f"frametol: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (ConvergenceError, frame_lab.SpectralConvergenceError) as exc:
        print(f"frametol: no convergence: {exc}", file=sys.stderr)
        return EXIT_NOCONV


if __name__ == "__main__":
    sys.exit(main())

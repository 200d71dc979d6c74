"""Verification suites behind the ``diagnose``, ``lemma``, ``frame`` and
``selfcheck`` subcommands. Each returns a plain dict ready for JSON."""

from __future__ import annotations

import math

import numpy as np

from frametol import frame_lab, kernels
from frametol.tolerance import (
    D_eval,
    D_prime,
    FrameRatio,
    certify_convex_window,
    mainprop_diagnostics,
    omega_below_root,
    sandwich,
    solve_x_d,
)

MONOTONE_DIMS = (1, 2, 5, 10, 100)
CONVEX_DIMS = (1, 2, 10, 100)
LATTICE_DIMS = (1, 2, 5, 10, 100, 1000, 10000)
LATTICE_RHOS = (0.1, 0.25, 0.5, 0.9, 1.0)
FRAME_FLOOR_FACTOR = 0.9


def diagnose(d: float, ratio: FrameRatio, tol: float = 1e-12) -> dict:
    rep = solve_x_d(d, ratio, tol)
    mp = mainprop_diagnostics(d, ratio, tol)
    sw = sandwich(d, ratio, tol)
    below, ordered = omega_below_root(d, ratio, tol)
    window = certify_convex_window(d, 1e-5)
    rho, c = ratio.rho, ratio.c
    return {
        "d": d,
        "rho": rho,
        "x_d": rep.x_d,
        "omega_d": rep.omega_d,
        "ratio": rep.ratio,
        "mp1": mp.mp1,
        "mp2": mp.mp2,
        "mp3": mp.mp3,
        "mp1_limit": rho / 6.0 * math.log(c) ** 2,
        "mp23_limit": math.pi * c,
        "D_omega_below_rho": below,
        "omega_below_x_d": ordered,
        "sandwich_lower": sw.lower,
        "sandwich_value": sw.value,
        "sandwich_upper": sw.upper,
        "sandwich_holds": sw.holds,
        "convex_delta": window.delta,
    }


def lemma_suite(
    systems: int,
    seed: int,
    max_nodes: int = 40,
    max_delta: float = 0.2,
    coeff_trials: int = 20,
) -> dict:
    """Randomized systems with d in {1, 2, 3}, n <= max_nodes, delta <= max_delta."""
    violations = 0
    worst_slack = 0.0
    worst_sample_ratio = 0.0
    for i in range(systems):
        rng = np.random.default_rng([seed, i])
        d = int(rng.integers(1, 4))
        n = int(rng.integers(1, max_nodes + 1))
        delta = float(rng.uniform(0.0, max_delta))
        system = frame_lab.random_system(rng, d, n, delta)
        rep = frame_lab.lemma_certificate(system, coeff_trials, seed=seed + i)
        if not rep.holds or rep.slack >= 1.0:
            violations += 1
        worst_slack = max(worst_slack, rep.slack)
        if rep.exact_sup > 0.0:
            worst_sample_ratio = max(worst_sample_ratio, rep.sampled_max / rep.exact_sup)
    return {
        "check": "lemma",
        "systems": systems,
        "violations": violations,
        "worst_slack": worst_slack,
        "worst_sampled_over_exact": worst_sample_ratio,
        "passed": violations == 0,
    }


def frame_suite(
    d: int,
    window_halfwidth: int,
    interior_halfwidth: int,
    delta: float,
    trials: int,
    seed: int,
) -> dict:
    rep = frame_lab.frame_margin_experiment(
        d, window_halfwidth, interior_halfwidth, delta, trials, seed
    )
    control = frame_lab.frame_margin_experiment(
        d, window_halfwidth, interior_halfwidth, 0.0, 1, seed
    )
    floor = FRAME_FLOOR_FACTOR * rep.interior_floor
    below_floor = sum(s < floor for s in rep.sigma_min)
    nonpositive = sum(s <= 0.0 for s in rep.sigma_min)
    control_ok = control.sigma_min[0] == 1.0 and control.sigma_max[0] == 1.0
    return {
        "check": "frame",
        "d": d,
        "N": window_halfwidth,
        "M": interior_halfwidth,
        "delta": delta,
        "trials": trials,
        "sigma_min_worst": rep.worst_sigma_min,
        "sigma_max_worst": max(rep.sigma_max),
        "interior_floor": rep.interior_floor,
        "floor": floor,
        "below_floor": below_floor,
        "nonpositive": nonpositive,
        "control_exact": control_ok,
        "passed": below_floor == 0 and nonpositive == 0 and control_ok,
    }


def _five_point(fn, y: float, step: float = 1e-3) -> float:
    return (-fn(y + 2 * step) + 8 * fn(y + step) - 8 * fn(y - step) + fn(y - 2 * step)) / (12 * step)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def selfcheck(grid: int = 10_000, tol: float = 1e-12) -> dict:
    counts: dict[str, int] = {}

    ys = np.linspace(0.0, math.pi / 4, grid + 2)[1:-1]
    counts["sign_f_plus_g_prime"] = sum(
        not kernels.f_prime(y) + kernels.g_prime(y) > 0.0 for y in ys
    )
    counts["sign_g_prime_negative"] = sum(not kernels.g_prime(y) < 0.0 for y in ys)
    counts["f_second_positive"] = sum(
        not kernels.f_second(y) > 0.0 for y in np.linspace(0.0, 0.5, grid + 1)[1:]
    )

    pairs = [
        (kernels.f_eval, kernels.f_prime),
        (kernels.f_prime, kernels.f_second),
        (kernels.g_eval, kernels.g_prime),
        (kernels.g_prime, kernels.g_second),
        (kernels.h_eval, kernels.h_prime),
    ]
    counts["derivative_fd"] = sum(
        _rel(deriv(y), _five_point(parent, y)) > 1e-6
        for parent, deriv in pairs
        for y in np.linspace(0.01, math.pi / 4, 100)
    )

    band = np.linspace(0.5, 2.0, 61) * kernels.SERIES_CUTOFF
    direct = [
        (kernels.sinc, lambda y: math.sin(y) / y),
        (kernels.g_prime, lambda y: (y * math.cos(y) - math.sin(y)) / y**2),
        (kernels.g_second, lambda y: ((2 - y * y) * math.sin(y) - 2 * y * math.cos(y)) / y**3),
    ]
    counts["series_branch"] = sum(
        _rel(fn(y), ref(y)) > 1e-10 for fn, ref in direct for y in band
    )

    xs = np.linspace(0.0, 0.25, grid + 2)[1:-1]
    mono = 0
    for d in MONOTONE_DIMS:
        vals = [D_eval(d, x) for x in xs]
        mono += sum(b <= a for a, b in zip(vals, vals[1:]))
        mono += sum(not D_prime(d, x) > 0.0 for x in xs)
    counts["monotone"] = mono

    step = min(1e-4, 0.25 / grid)
    deltas = {}
    convex = 0
    for d in CONVEX_DIMS:
        w = certify_convex_window(d, step)
        deltas[d] = w.delta
        convex += not (0.0 < w.delta < 0.25 and w.d_second_extent >= w.delta)
    counts["convex_window"] = convex

    residual = ordering = sandwiches = 0
    for rho in LATTICE_RHOS:
        ratio = FrameRatio.from_rho(rho)
        for d in LATTICE_DIMS:
            rep = solve_x_d(d, ratio, tol)
            residual += not rep.residual <= tol * max(1.0, rho)
            below, ordered = omega_below_root(d, ratio, tol)
            ordering += below and not ordered
            if d not in deltas:
                deltas[d] = certify_convex_window(d, step).delta
            if d >= 10 and ordered and rep.x_d < deltas[d]:
                sandwiches += not sandwich(d, ratio, tol).holds
    counts["root_residual"] = residual
    counts["ordering"] = ordering
    counts["sandwich"] = sandwiches

    return {
        "check": "selfcheck",
        "grid": grid,
        "violations": counts,
        "convex_delta": {str(d): deltas[d] for d in sorted(deltas)},
        "passed": not any(counts.values()),
    }

"""Perturbation tolerances for exponential frames on the cube [-pi, pi]^d.

Two tolerances are compared for a frame with bounds A**2 <= B**2:

* the explicit one, ``omega_d = ln(1 + A/B) / (pi d)``;
* the implicit one ``x_d``, the root in (0, 1/4] of ``D_d(x) = A/B`` with
  ``D_d(x) = f(pi x)**d - g(pi x)**d``.

Their gap ``x_d - omega_d`` behaves like
``ln(1 + A/B)**2 / (6 pi (1 + B/A) d**2)`` as d grows; ``asymptotic_ratio``
measures how close a given d is to that regime.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from frametol import kernels

MAX_ITER = 200
MIN_TOL = 1e-14
X_MAX = 0.25


class DomainError(ValueError):
    """Argument outside the region where D_d and its derivatives are defined."""


class ConvergenceError(RuntimeError):
    """The root solver hit its iteration cap."""


@dataclass(frozen=True)
class FrameRatio:
    """Frame constants A <= B (square roots of the frame bounds)."""

    A: float
    B: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.A) and math.isfinite(self.B)):
            raise DomainError("frame constants must be finite")
        if not 0.0 < self.A <= self.B:
            raise DomainError(f"need 0 < A <= B, got A={self.A}, B={self.B}")

    @classmethod
    def from_rho(cls, rho: float) -> "FrameRatio":
        if not 0.0 < rho <= 1.0:
            raise DomainError(f"rho must lie in (0, 1], got {rho}")
        return cls(rho, 1.0)

    @property
    def rho(self) -> float:
        return self.A / self.B

    @property
    def c(self) -> float:
        return 1.0 + self.rho


@dataclass(frozen=True)
class ToleranceReport:
    d: float
    rho: float
    x_d: float
    omega_d: float
    correction: float
    ratio: float
    residual: float
    bracket_width: float
    iterations: int

    def as_row(self) -> dict[str, float]:
        """The seven public fields, in CSV column order."""
        return {
            "d": self.d,
            "rho": self.rho,
            "x_d": self.x_d,
            "omega_d": self.omega_d,
            "correction": self.correction,
            "ratio": self.ratio,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class ConvexWindow:
    """Grid-certified interval (0, delta) on which D_d is convex.

    ``delta`` is the first grid point where either D''_d or f''(pi x) fails
    to be strictly positive; ``d_second_extent`` and ``f_second_zero`` keep
    the two scans separate.
    """

    d: float
    delta: float
    grid_step: float
    d_second_extent: float
    f_second_zero: float


class MainpropDiagnostics(NamedTuple):
    mp1: float  # d * (rho - D_d(omega_d))
    mp2: float  # D'_d(omega_d) / d
    mp3: float  # D'_d(x_d) / d


class Sandwich(NamedTuple):
    lower: float
    value: float
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower < self.value < self.upper


def _check_args(d: float, x: float) -> None:
    if not d >= 1.0 or not math.isfinite(d):
        raise DomainError(f"d must be a finite real >= 1, got {d}")
    if not 0.0 < x <= X_MAX:
        raise DomainError(f"x must lie in (0, 1/4], got {x}")


def _exp(t: float) -> float:
    try:
        return math.exp(t)
    except OverflowError:
        return math.inf


def _expm1(t: float) -> float:
    try:
        return math.expm1(t)
    except OverflowError:
        return math.inf


def D_eval(d: float, x: float) -> float:
    """f(pi x)**d - g(pi x)**d.

    Evaluated as expm1(d log f) - expm1(d log g) so that the result keeps its
    relative accuracy when both powers sit close to 1.
    """
    _check_args(d, x)
    y = math.pi * x
    top = _expm1(d * math.log1p(kernels.h_eval(y)))
    bottom = math.expm1(d * math.log1p(kernels.sinc_m1(y)))
    return top - bottom


def D_prime(d: float, x: float) -> float:
    _check_args(d, x)
    y = math.pi * x
    lf = math.log1p(kernels.h_eval(y))
    lg = math.log1p(kernels.sinc_m1(y))
    fp = kernels.f_prime(y)
    gp = kernels.g_prime(y)
    return d * math.pi * (_exp((d - 1.0) * lf) * fp - math.exp((d - 1.0) * lg) * gp)


def D_second(d: float, x: float) -> float:
    _check_args(d, x)
    y = math.pi * x
    lf = math.log1p(kernels.h_eval(y))
    lg = math.log1p(kernels.sinc_m1(y))
    f, g = 1.0 + kernels.h_eval(y), kernels.sinc(y)
    fp, fpp = kernels.f_prime(y), kernels.f_second(y)
    gp, gpp = kernels.g_prime(y), kernels.g_second(y)
    # both brackets regrouped around f**(d-2) and g**(d-2) so an overflowing
    # power multiplies a single finite factor
    top = (d - 1.0) * fp * fp + f * fpp
    bottom = (d - 1.0) * gp * gp + g * gpp
    return d * math.pi**2 * (_exp((d - 2.0) * lf) * top - math.exp((d - 2.0) * lg) * bottom)


def omega_d(d: float, ratio: FrameRatio) -> float:
    if not d >= 1.0:
        raise DomainError(f"d must be >= 1, got {d}")
    return math.log1p(ratio.rho) / (math.pi * d)


def correction_term(d: float, ratio: FrameRatio) -> float:
    if not d >= 1.0:
        raise DomainError(f"d must be >= 1, got {d}")
    rho = ratio.rho
    return math.log1p(rho) ** 2 / (6.0 * math.pi * (1.0 + 1.0 / rho) * d * d)


def solve_x_d(d: float, ratio: FrameRatio, tol: float = 1e-12) -> ToleranceReport:
    """Root of D_d(x) = rho on (0, 1/4] by bracketed Newton.

    D_d increases strictly from 0 at 0+ to D_d(1/4) >= 1 >= rho, so the
    bracket (eps, 1/4] always straddles the root. A Newton step is kept only
    if it lands strictly inside the current bracket; otherwise the bracket is
    bisected. The step-size target is min(tol, correction * 1e-4) so that
    x_d - omega_d retains about four significant digits.
    """
    if not tol >= MIN_TOL:
        raise DomainError(f"tol must be >= {MIN_TOL}, got {tol}")
    rho = ratio.rho
    w = omega_d(d, ratio)
    corr = correction_term(d, ratio)
    ftol = tol * max(1.0, rho)
    xtol = min(tol, corr * 1e-4)

    lo, hi = sys.float_info.epsilon, X_MAX
    fhi = D_eval(d, hi) - rho
    iterations = 0
    if abs(fhi) <= ftol:
        x, fx = hi, fhi
    else:
        x = min(max(w, lo), hi)
        fx = D_eval(d, x) - rho
        while True:
            iterations += 1
            if iterations > MAX_ITER:
                raise ConvergenceError(
                    f"no convergence after {MAX_ITER} iterations "
                    f"(d={d}, rho={rho}, bracket=[{lo}, {hi}])"
                )
            if fx < 0.0:
                lo = x
            elif fx > 0.0:
                hi = x
            else:
                break
            slope = D_prime(d, x)
            x_new = x - fx / slope if slope > 0.0 else math.nan
            if not lo < x_new < hi:
                x_new = 0.5 * (lo + hi)
            step = abs(x_new - x)
            x = x_new
            fx = D_eval(d, x) - rho
            if abs(fx) <= ftol and (step <= xtol or hi - lo <= xtol):
                break

    return ToleranceReport(
        d=d,
        rho=rho,
        x_d=x,
        omega_d=w,
        correction=corr,
        ratio=(x - w) / corr,
        residual=abs(fx),
        bracket_width=hi - lo,
        iterations=iterations,
    )


def asymptotic_ratio(d: float, ratio: FrameRatio, tol: float = 1e-12) -> float:
    """(x_d - omega_d) / correction_term; tends to 1 as d grows."""
    return solve_x_d(d, ratio, tol).ratio


def mainprop_diagnostics(
    d: float, ratio: FrameRatio, tol: float = 1e-12
) -> MainpropDiagnostics:
    """Finite-d values of the three quantities whose limits are
    (rho/6) ln(1+rho)**2, pi (1+rho) and pi (1+rho)."""
    rep = solve_x_d(d, ratio, tol)
    w = rep.omega_d
    return MainpropDiagnostics(
        mp1=d * (ratio.rho - D_eval(d, w)),
        mp2=D_prime(d, w) / d,
        mp3=D_prime(d, rep.x_d) / d,
    )


def sandwich(d: float, ratio: FrameRatio, tol: float = 1e-12) -> Sandwich:
    """Bounds on d**2 (x_d - omega_d) from the mean value theorem and convexity.

    Only meaningful when omega_d < x_d and both lie where D_d is convex.
    """
    rep = solve_x_d(d, ratio, tol)
    w, x = rep.omega_d, rep.x_d
    gap = d * (ratio.rho - D_eval(d, w))
    return Sandwich(
        lower=gap / (D_prime(d, x) / d),
        value=d * d * (x - w),
        upper=gap / (D_prime(d, w) / d),
    )


def omega_below_root(d: float, ratio: FrameRatio, tol: float = 1e-12) -> tuple[bool, bool]:
    """(D_d(omega_d) < rho, omega_d < x_d); the first should imply the second."""
    rep = solve_x_d(d, ratio, tol)
    return D_eval(d, rep.omega_d) < ratio.rho, rep.omega_d < rep.x_d


def certify_convex_window(d: float, grid_step: float = 1e-5) -> ConvexWindow:
    """Scan the grid k * grid_step < 1/4 for positivity of D''_d and f''(pi x).

    A grid value of exactly 0 counts as a failure. ``delta`` is the first
    failing grid point, or the last grid point below 1/4 if nothing fails.
    """
    if not 0.0 < grid_step <= 1e-4:
        raise DomainError(f"grid_step must lie in (0, 1e-4], got {grid_step}")
    n = int(math.ceil(X_MAX / grid_step)) - 1
    last = n * grid_step
    d_extent = f_zero = math.nan
    for k in range(1, n + 1):
        x = k * grid_step
        if math.isnan(d_extent) and not D_second(d, x) > 0.0:
            d_extent = x
        if math.isnan(f_zero) and not kernels.f_second(math.pi * x) > 0.0:
            f_zero = x
        if not (math.isnan(d_extent) or math.isnan(f_zero)):
            break
    d_extent = last if math.isnan(d_extent) else d_extent
    f_zero = last if math.isnan(f_zero) else f_zero
    return ConvexWindow(
        d=d,
        delta=min(d_extent, f_zero),
        grid_step=grid_step,
        d_second_extent=d_extent,
        f_second_zero=f_zero,
    )


def corollary_check(
    ratio: FrameRatio, d_list: Sequence[float], tol: float = 1e-12
) -> list[tuple[float, float]]:
    """x_d along an increasing sequence of dimensions."""
    if any(b <= a for a, b in zip(d_list, d_list[1:])):
        raise DomainError("d_list must be strictly increasing")
    return [(d, solve_x_d(d, ratio, tol).x_d) for d in d_list]

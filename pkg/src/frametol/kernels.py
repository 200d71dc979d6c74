"""Scalar kernels built from sinc.

    f(y) = 1 - cos y + sin y + sinc y
    g(y) = sinc y
    h(y) = f(y) - 1

All functions take a float ``y`` (radians) and are accurate for |y| <= pi.
Below ``SERIES_CUTOFF`` the sinc terms switch to truncated even Taylor
series, which avoids the 0/0 at the origin and the cancellation in the
closed-form derivatives.
"""

from __future__ import annotations

import math

SERIES_CUTOFF = 1e-2

# Taylor coefficients in powers of y**2 (lowest first)
_SINC = (1.0, -1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880)
_SINC_M1 = _SINC[1:]
# sinc'(y) / y
_SINC_D1 = (-1.0 / 3, 1.0 / 30, -1.0 / 840, 1.0 / 45360, -1.0 / 3991680)
_SINC_D2 = (-1.0 / 3, 1.0 / 10, -1.0 / 168, 1.0 / 6480, -1.0 / 443520)


def _even_series(coeffs: tuple[float, ...], y2: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * y2 + c
    return acc


def sinc(y: float) -> float:
    """sin(y)/y, equal to 1 at y = 0."""
    if abs(y) < SERIES_CUTOFF:
        return _even_series(_SINC, y * y)
    return math.sin(y) / y


def sinc_m1(y: float) -> float:
    """sinc(y) - 1 without the cancellation of forming sinc first."""
    if abs(y) < SERIES_CUTOFF:
        y2 = y * y
        return y2 * _even_series(_SINC_M1, y2)
    return (math.sin(y) - y) / y


def g_eval(y: float) -> float:
    return sinc(y)


def g_prime(y: float) -> float:
    """Derivative of sinc: (y cos y - sin y) / y**2."""
    if abs(y) < SERIES_CUTOFF:
        return y * _even_series(_SINC_D1, y * y)
    return (y * math.cos(y) - math.sin(y)) / (y * y)


def g_second(y: float) -> float:
    """Second derivative of sinc: ((2 - y**2) sin y - 2 y cos y) / y**3."""
    if abs(y) < SERIES_CUTOFF:
        return _even_series(_SINC_D2, y * y)
    return ((2.0 - y * y) * math.sin(y) - 2.0 * y * math.cos(y)) / (y * y * y)


def h_eval(y: float) -> float:
    """h(y) = -cos y + sin y + sinc y, summed as 2 sin^2(y/2) + sin y + (sinc y - 1).

    Every term is O(y) or smaller, so h keeps full relative accuracy near 0
    where h(y) = y + y**2/3 + O(y**3).
    """
    s = math.sin(0.5 * y)
    return 2.0 * s * s + math.sin(y) + sinc_m1(y)


def f_eval(y: float) -> float:
    return 1.0 + h_eval(y)


def f_prime(y: float) -> float:
    return math.sin(y) + math.cos(y) + g_prime(y)


def f_second(y: float) -> float:
    return math.cos(y) - math.sin(y) + g_second(y)


h_prime = f_prime
h_second = f_second

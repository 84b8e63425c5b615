"""Special functions used by the gain-blockade model.

Everything here is real-valued and restricted to the parameter ranges the
model actually visits: associated Laguerre polynomials L_n^(k)(x), the
Kummer function 1F1(-x, 2, alpha) continued to real (non-integer) first
argument, the Bessel functions J0/J1 near the first zero of J1, and the
large-n Bessel approximation of the gain profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_LAGUERRE_DEGREE = 10**6
KUMMER_MAX_TERMS = 500
KUMMER_RTOL = 1e-15

# Forward series of 1F1(-x, 2, alpha) loses digits to cancellation once
# x*alpha grows; switch to the contiguous three-term recurrence above this.
_SERIES_XA_MAX = 30.0


class KummerConvergenceError(RuntimeError):
    """Series did not converge within the term budget.

    The partial sum accumulated so far is attached as ``partial``.
    """

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


def laguerre(n, k, x):
    """Associated Laguerre polynomial L_n^(k)(x) by upward recurrence.

    Parameters
    ----------
    n : int
        Degree, n >= 0.
    k : int
        Order, k >= 0.
    x : float or ndarray
        Real argument(s).

    Returns
    -------
    float or ndarray
        L_n^(k)(x), evaluated through the three-term recurrence
        (m+1) L_{m+1} = (2m+k+1-x) L_m - (m+k) L_{m-1}.
    """
    if n < 0 or k < 0:
        raise ValueError("laguerre requires n >= 0 and k >= 0")
    if n > MAX_LAGUERRE_DEGREE:
        raise ValueError(f"laguerre degree {n} exceeds {MAX_LAGUERRE_DEGREE}")

    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0

    prev = np.ones_like(xa)              # L_0
    if n == 0:
        return float(prev) if scalar else prev
    cur = k + 1.0 - xa                   # L_1
    for m in range(1, n):
        prev, cur = cur, ((2 * m + k + 1 - xa) * cur - (m + k) * prev) / (m + 1)
    return float(cur) if scalar else cur


def _kummer_series(x, alpha):
    """Forward series for 1F1(-x, 2, alpha) with term-ratio updates."""
    total = 1.0
    term = 1.0
    for m in range(KUMMER_MAX_TERMS):
        term *= (m - x) * alpha / ((m + 2.0) * (m + 1.0))
        total += term
        if abs(term) <= KUMMER_RTOL * abs(total):
            return total
    raise KummerConvergenceError(
        f"Kummer series for (x={x}, alpha={alpha}) did not converge "
        f"within {KUMMER_MAX_TERMS} terms",
        partial=total,
    )


def kummer_1f1_neg(x, alpha):
    """Kummer function 1F1(-x, 2, alpha) for real x >= -0.5.

    For integer x this terminates and equals laguerre(x, 1, alpha)/(x+1);
    for real x it is the analytic continuation in the first argument. The
    forward series is used while x*alpha is small enough to be cancellation
    free; beyond that the contiguous recurrence
    (y+2) f(y+1) = (2y+2-alpha) f(y) - y f(y-1) is climbed from series
    seeds at small argument.

    Parameters
    ----------
    x : float
        Negated first argument, x >= -0.5.
    alpha : float
        Series argument, alpha > 0.
    """
    if alpha <= 0.0:
        raise ValueError("kummer_1f1_neg requires alpha > 0")
    if x < -0.5:
        raise ValueError("kummer_1f1_neg requires x >= -0.5")

    if x * alpha <= _SERIES_XA_MAX:
        return _kummer_series(x, alpha)

    # Climb in unit steps from fractional seeds; the series is stable there
    # (x*alpha small) and the recurrence is stable in the oscillatory regime.
    steps = int(math.floor(x))
    frac = x - steps
    f_prev = _kummer_series(frac - 1.0, alpha)
    f_cur = _kummer_series(frac, alpha)
    y = frac
    for _ in range(steps):
        f_prev, f_cur = f_cur, ((2 * y + 2 - alpha) * f_cur - y * f_prev) / (y + 2.0)
        y += 1.0
    return f_cur


def laguerre_first_zero(n0):
    """Smallest positive root of L_{n0}^(1).

    Brackets the first sign change on a 64-point grid over (0, 16/n0] and
    polishes with Brent to 1e-12 absolute. The root behaves like 3.67/n0
    for large n0.
    """
    from scipy.optimize import brentq

    if n0 < 1:
        raise ValueError("laguerre_first_zero requires n0 >= 1")

    hi = 16.0 / n0
    grid = np.linspace(0.0, hi, 65)[1:]
    vals = laguerre(n0, 1, grid)
    lo_x, lo_v = 1e-300, float(n0 + 1)   # L(0+) = n0+1 > 0
    for gx, gv in zip(grid, vals):
        if gv == 0.0:
            return float(gx)
        if np.sign(gv) != np.sign(lo_v):
            return float(brentq(lambda t: laguerre(n0, 1, t), lo_x, gx, xtol=1e-12))
        lo_x, lo_v = gx, gv
    raise RuntimeError(f"no sign change of L_{n0}^(1) found in (0, {hi}]")


def _bessel_j0_j1(x):
    """J0(x) and J1(x) from their power series (adequate for |x| < ~30)."""
    x = float(x)
    q = 0.25 * x * x
    j0, t0 = 1.0, 1.0
    j1, t1 = 0.5 * x, 0.5 * x
    for m in range(1, 60):
        t0 *= -q / (m * m)
        t1 *= -q / (m * (m + 1.0))
        j0 += t0
        j1 += t1
        if abs(t0) < 1e-17 * (abs(j0) + 1e-300) and abs(t1) < 1e-17 * (abs(j1) + 1e-300):
            break
    return j0, j1


@dataclass(frozen=True)
class BesselConstants:
    """First positive zero of J1 and the value of J0 there."""

    x11: float
    j0_at_x11: float


def bessel_constants():
    """Locate the first zero of J1 by Newton iteration on the series.

    Returns constants with x11 ~ 3.8317 and J0(x11) ~ -0.40.
    """
    x = 3.8
    for _ in range(60):
        j0, j1 = _bessel_j0_j1(x)
        # J1'(x) = J0(x) - J1(x)/x
        step = j1 / (j0 - j1 / x)
        x -= step
        if abs(step) < 1e-14:
            break
    j0, j1 = _bessel_j0_j1(x)
    if abs(j1) > 1e-12:
        raise RuntimeError("Newton iteration for the J1 zero did not converge")
    return BesselConstants(x11=x, j0_at_x11=j0)


def mehler_heine_f(n, alpha):
    """Large-n Bessel approximation of the gain profile.

    Evaluates exp(alpha/2) * J1(sqrt(4*(n+1)*alpha)) / sqrt(n*alpha), which
    tracks kummer_1f1_neg(n, alpha) for n >> 1. The half-shifted Bessel
    argument (n+1 rather than n, the standard form for order one) keeps the
    approximation accurate through the zero of the gain profile, where the
    unshifted argument misplaces the root by O(1/n).
    """
    if n < 1:
        raise ValueError("mehler_heine_f requires n >= 1")
    if alpha <= 0.0:
        raise ValueError("mehler_heine_f requires alpha > 0")
    arg = math.sqrt(4.0 * (n + 1.0) * alpha)
    _, j1 = _bessel_j0_j1(arg)
    return math.exp(0.5 * alpha) * j1 / math.sqrt(n * alpha)

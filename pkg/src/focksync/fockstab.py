"""Closed-form analytics of the stabilized number distribution.

The undriven model is a birth-death chain in the number basis; its
diffusion-equation reduction gives drift and diffusion coefficients whose
root and curvature predict the mean and variance of the stabilized
distribution. The closed forms below use the Bessel-function linearization
of the gain profile around the blockade and are large-n0, strong-pumping
asymptotics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import bessel_constants, kummer_1f1_neg

_DERIV_STEP = 1e-4


def km_coefficients(n, params):
    """Drift A(n) and diffusion B(n) of the number-distribution reduction.

    A(n) = n gamma - eps (n+1) f(n-1) [f(n-1) - 2 f'(n-1)] and
    B(n) = [(n+1) gamma + eps n f(n-1)^2] / 2, with f the gain profile and
    f' a central difference.
    """
    if n < 1:
        raise ValueError("km_coefficients requires n >= 1")
    gamma, eps, alpha = params.gamma_a, params.epsilon, params.alpha_a
    h = _DERIV_STEP
    f = kummer_1f1_neg(n - 1.0, alpha)
    fp = (kummer_1f1_neg(n - 1.0 + h, alpha) - kummer_1f1_neg(n - 1.0 - h, alpha)) / (2 * h)
    a = n * gamma - eps * (n + 1.0) * f * (f - 2.0 * fp)
    b = 0.5 * ((n + 1.0) * gamma + eps * n * f * f)
    return a, b


@dataclass(frozen=True)
class StabPrediction:
    """Closed-form mean and variance of the stabilized distribution.

    nbar_pred solves the linearized drift root; var_pred is the
    Bessel-linearized closed form. The bare strong-pumping asymptotes are
    kept alongside, as are the linearized drift slope a0 and diffusion
    level b0.
    """

    nbar_pred: float
    var_pred: float
    nbar_asym: float
    var_asym: float
    a0: float
    b0: float
    n0: int
    j0_at_x11: float


def predicted_moments(n0, gamma, epsilon):
    """Predicted mean and variance of the stabilized number distribution.

    Uses the Bessel linearization of the gain profile: with J the value of
    J0 at the first zero of J1 and e = epsilon/gamma,

        nbar = n0 [1 - (sqrt(1 + 4 J^2 e) - 1) / (2 J^2 e)]
        var  = n0 (|J| sqrt(e) - 1) / (2 J^2 e + |J| sqrt(e))

    with asymptotes n0 (1 - sqrt(1/(J^2 e))) and n0 sqrt(1/(4 J^2 e)).
    """
    if epsilon <= 0.0:
        raise ValueError("predicted_moments requires epsilon > 0")
    bc = bessel_constants()
    j = bc.j0_at_x11
    e = epsilon / gamma
    x = j * j * e
    s = abs(j) * math.sqrt(e)
    if s <= 1.0:
        raise ValueError(
            "closed forms need strong pumping, eps/gamma > 1/J^2 ~ 6.2"
        )

    nbar = n0 * (1.0 - (math.sqrt(1.0 + 4.0 * x) - 1.0) / (2.0 * x))
    var = n0 * (s - 1.0) / (2.0 * x + s)
    nbar_asym = n0 * (1.0 - math.sqrt(1.0 / x))
    var_asym = n0 * math.sqrt(1.0 / (4.0 * x))
    a0 = gamma * (math.sqrt(4.0 * x) + 1.0)
    b0 = n0 * gamma * (1.0 + math.sqrt(1.0 / x))
    return StabPrediction(
        nbar_pred=nbar,
        var_pred=var,
        nbar_asym=nbar_asym,
        var_asym=var_asym,
        a0=a0,
        b0=b0,
        n0=n0,
        j0_at_x11=j,
    )


def stationary_distribution(params, m):
    """Exact stationary number distribution of the undriven model.

    The f = 0 chain satisfies detailed balance with P_{n+1}/P_n =
    (eps/gamma) f(n)^2; this product form equals the full steady state of
    the generator restricted to the diagonal.
    """
    log_ratio = math.log(params.epsilon / params.gamma_a)
    logp = np.empty(m)
    logp[0] = 0.0
    for n in range(m - 1):
        f = kummer_1f1_neg(float(n), params.alpha_a)
        step = log_ratio + 2.0 * math.log(abs(f)) if f != 0.0 else -math.inf
        logp[n + 1] = logp[n] + step
    p = np.exp(logp - logp.max())
    return p / p.sum()


def rate_equation_residual(p_n, params):
    """Largest stationarity violation of a diagonal distribution.

    Evaluates the birth-death right-hand side
    gamma [(n+1) P_{n+1} - n P_n] + eps [n f(n-1)^2 P_{n-1}
    - (n+1) f(n)^2 P_n] on the given populations; the steady state of the
    full generator satisfies this exactly up to solver residuals.
    """
    p_n = np.asarray(p_n, dtype=float)
    m = p_n.size
    gamma, eps, alpha = params.gamma_a, params.epsilon, params.alpha_a
    f = np.array([kummer_1f1_neg(float(n), alpha) for n in range(m)])
    worst = 0.0
    for n in range(m):
        rhs = gamma * ((n + 1) * p_n[n + 1] - n * p_n[n]) if n + 1 < m else gamma * (-n * p_n[n])
        if n >= 1:
            rhs += eps * n * f[n - 1] ** 2 * p_n[n - 1]
        if n + 1 < m:
            rhs -= eps * (n + 1) * f[n] ** 2 * p_n[n]
        worst = max(worst, abs(rhs))
    return worst

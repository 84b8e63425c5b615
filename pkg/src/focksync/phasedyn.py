"""Extended-phase drift and diffusion, locking analytics, and the
stochastic oracle.

The quantum side extracts cumulant rates of the extended phase from the
counting-field derivatives of the eigenvalue branch through zero. The
classical side is the noisy phase equation in the tilted washboard
potential U(phi) = -Delta phi - (f/sqrt(nbar)) cos(phi - theta): closed
formulas for the locked state and barrier-crossing rates, and a direct
Euler-Maruyama integration that counts 2 pi phase slips. The two routes
must agree wherever the washboard reduction is valid, which is the
weak-drive regime of a well-developed limit cycle.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .fockstab import stationary_distribution
from .liouville import recommended_dim
from .specfun import kummer_1f1_neg
from .steady import TRUST_FLOOR, lambda0_curve


@dataclass(frozen=True)
class PhaseCumulants:
    """Drift and diffusion rates of the extended phase.

    The errors are Richardson discrepancies between the two stencil
    widths; diffusion_floor is the smallest diffusion resolvable at this
    counting-field step given the eigenvalue trust floor, and flags carry
    'floor' or 'crossing' markers propagated from the eigenvalue track.
    """

    drift: float
    diffusion: float
    drift_err: float
    diffusion_err: float
    diffusion_floor: float
    flags: tuple


@dataclass(frozen=True)
class AdlerParams:
    """Reduced phase-equation parameters (locking rate f/sqrt(nbar))."""

    nbar: float
    diffusion: float
    delta: float
    f: float
    theta: float

    def __post_init__(self):
        if self.nbar <= 0.0 or self.diffusion <= 0.0:
            raise ValueError("AdlerParams needs nbar > 0 and diffusion > 0")

    @property
    def locking_rate(self):
        return self.f / math.sqrt(self.nbar)


@dataclass(frozen=True)
class SlipRates:
    gamma_plus: float
    gamma_minus: float
    err_plus: float = 0.0
    err_minus: float = 0.0
    flags: tuple = ()


@dataclass(frozen=True)
class AdlerPrediction:
    adler: AdlerParams
    locked: bool
    phi0: float | None
    phase_var: float | None
    slips: SlipRates


@dataclass(frozen=True)
class SdeResult:
    drift: float
    diffusion: float
    drift_err: float
    diffusion_err: float
    rates: SlipRates
    n_plus: int
    n_minus: int
    total_time: float
    flags: tuple


def _stencil_first(lam, h):
    return (-lam[2 * h] + 8 * lam[h] - 8 * lam[-h] + lam[-2 * h]) / (12 * h)


def _stencil_second(lam, h):
    return (
        -lam[2 * h] + 16 * lam[h] - 30 * lam[0.0] + 16 * lam[-h] - lam[-2 * h]
    ) / (12 * h * h)


def phase_cumulants(params, dq=0.02, space=None):
    """Extended-phase drift and diffusion from the eigenvalue branch.

    Five-point central stencils at counting fields {0, +-dq, +-2dq} give
    the first two derivatives; a second pass at half step provides one
    Richardson extrapolation and the reported discrepancy.

    Parameters
    ----------
    params : ModelParams
    dq : float
        Stencil step, 0 < dq <= 0.1.
    space : FockSpace or int, optional
        Truncation override.
    """
    if not 0.0 < dq <= 0.1:
        raise ValueError("phase_cumulants requires 0 < dq <= 0.1")
    qs = sorted({0.0, dq / 2, -dq / 2, dq, -dq, 2 * dq, -2 * dq})
    track = lambda0_curve(params, qs, space=space)
    lam = {round(float(q), 12): v for q, v in zip(track.q_values, track.lambda0)}
    lam = {q: lam[round(q, 12)] for q in (0.0, dq / 2, -dq / 2, dq, -dq, 2 * dq, -2 * dq)}

    d1_h = _stencil_first(lam, dq)
    d1_h2 = _stencil_first(lam, dq / 2)
    d2_h = _stencil_second(lam, dq)
    d2_h2 = _stencil_second(lam, dq / 2)

    d1 = (16 * d1_h2 - d1_h) / 15.0
    d2 = (16 * d2_h2 - d2_h) / 15.0

    drift = float(np.real(-1j * d1))
    diffusion = float(np.real(-0.5 * d2))
    drift_err = float(abs(d1_h2 - d1_h)) + float(abs(np.imag(-1j * d1)))
    diffusion_err = float(0.5 * abs(d2_h2 - d2_h)) + float(abs(np.imag(-0.5 * d2)))

    floor = TRUST_FLOOR * track.norm / (dq / 2) ** 2
    flags = sorted({f for point in track.flags for f in point})
    if diffusion < floor:
        flags.append("floor")
    return PhaseCumulants(
        drift=drift,
        diffusion=diffusion,
        drift_err=drift_err,
        diffusion_err=diffusion_err,
        diffusion_floor=floor,
        flags=tuple(flags),
    )


def analytic_diffusion(params, space=None):
    """Phase-diffusion coefficient of the reduced phase equation.

    [gamma_a + epsilon 1F1(-nbar, 2, alpha_a)] / (8 nbar) with nbar from
    the exact stationary distribution of the undriven model. This is the
    leading large-nbar form; the steep number dependence of the blockade
    gain adds noise beyond it, so the measured free diffusion of the full
    model exceeds this value (see phase_cumulants at f = 0).
    """
    m = space if space is not None else recommended_dim(params.with_drive(f=0.0))
    m = int(getattr(m, "dim", m))
    p = stationary_distribution(params, m)
    nbar = float(np.arange(m) @ p)
    gain = kummer_1f1_neg(nbar, params.alpha_a)
    return (params.gamma_a + params.epsilon * gain) / (8.0 * nbar), nbar


def adler_predictions(params, space=None, diffusion=None):
    """Locked-phase analytics of the reduced phase equation.

    Parameters
    ----------
    params : ModelParams
    space : optional truncation for the stationary distribution.
    diffusion : float, optional
        Effective diffusion coefficient override; by default the analytic
        leading-order value is used. Passing the measured free diffusion
        (phase_cumulants at f = 0) makes the Kramers rates self-consistent
        with the full model.

    Returns
    -------
    AdlerPrediction
        Reduced parameters, the locking flag, locked phase phi0, phase
        variance about it, and barrier-crossing rates. In the unlocked
        regime phi0 and phase_var are None and the rates carry the
        deterministic free-running estimate.
    """
    d_analytic, nbar = analytic_diffusion(params, space)
    d = float(diffusion) if diffusion is not None else d_analytic
    ap = AdlerParams(
        nbar=nbar, diffusion=d, delta=params.delta, f=params.f, theta=params.theta
    )
    k = ap.locking_rate
    delta = params.delta

    if params.f <= 0.0 or k <= abs(delta):
        # free-running estimate: deterministic winding at the beat rate
        v = math.sqrt(max(delta * delta - k * k, 0.0)) / (2 * math.pi)
        slips = SlipRates(
            gamma_plus=v if delta > 0 else 0.0,
            gamma_minus=v if delta < 0 else 0.0,
            flags=("unlocked",),
        )
        return AdlerPrediction(
            adler=ap, locked=False, phi0=None, phase_var=None, slips=slips
        )

    phi0 = params.theta + math.asin(delta / k)
    phase_var = d / math.sqrt(k * k - delta * delta)

    def potential(phi):
        return -delta * phi - k * math.cos(phi - params.theta)

    phi_min = phi0
    phi_max = params.theta + math.pi - math.asin(delta / k)
    barrier_up = potential(phi_max) - potential(phi_min)
    barrier_down = potential(phi_max - 2 * math.pi) - potential(phi_min)
    prefactor = math.sqrt(k * k - delta * delta) / (2 * math.pi)
    slips = SlipRates(
        gamma_plus=prefactor * math.exp(-barrier_up / d),
        gamma_minus=prefactor * math.exp(-barrier_down / d),
    )
    return AdlerPrediction(
        adler=ap, locked=True, phi0=phi0, phase_var=phase_var, slips=slips
    )


def adler_sde_oracle(ap, t_final, n_traj, seed, dt=None, batch_size=1024):
    """Euler-Maruyama integration of the noisy phase equation.

    dphi = [Delta - (f/sqrt(nbar)) sin(phi - theta)] dt + sqrt(2 D) dW on
    the real line. Slips are first passages to the neighboring washboard
    cell: each trajectory is anchored at the potential minimum (or its
    start point when unlocked) and a +-2 pi excursion counts one event and
    re-anchors, which suppresses double counting of barrier recrossings.
    Trajectories run in fixed batches, each on its own counter-based
    random stream derived from (seed, batch index), so results do not
    depend on execution order.

    Returns drift 2 pi (G+ - G-) and diffusion 2 pi^2 (G+ + G-) with
    Poisson error bars; zero observed events in a direction degrades that
    rate to the upper bound 1/T_total and flags the result.
    """
    k = ap.locking_rate
    d = ap.diffusion
    scale = max(k, abs(ap.delta), d, 1e-6)
    stable = 0.05 / scale
    if dt is None:
        dt = 0.01 / scale
    elif dt > stable:
        raise ValueError(f"dt = {dt} exceeds the stability bound {stable:.3g}")

    locked = ap.f > 0.0 and k > abs(ap.delta)
    phi_start = ap.theta + math.asin(ap.delta / k) if locked else 0.0

    n_steps = int(math.ceil(t_final / dt))
    sq = math.sqrt(2.0 * d * dt)
    # discretely observed paths cross barriers earlier than they are seen;
    # the standard continuity correction pulls the detection threshold in
    threshold = 2 * math.pi - 0.5826 * sq
    n_plus = 0
    n_minus = 0
    done = 0
    batch_idx = 0
    while done < n_traj:
        nb = min(batch_size, n_traj - done)
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence([int(seed), batch_idx]))
        )
        if locked:
            phi = np.full(nb, phi_start)
        else:
            phi = rng.uniform(0.0, 2 * math.pi, size=nb)
        anchor = phi.copy()
        for _ in range(n_steps):
            phi += (ap.delta - k * np.sin(phi - ap.theta)) * dt
            phi += sq * rng.standard_normal(nb)
            up = phi - anchor >= threshold
            if np.any(up):
                n_plus += int(up.sum())
                anchor[up] += 2 * math.pi
            down = phi - anchor <= -threshold
            if np.any(down):
                n_minus += int(down.sum())
                anchor[down] -= 2 * math.pi
        done += nb
        batch_idx += 1

    t_total = n_traj * n_steps * dt
    flags = []
    gp, gm = n_plus / t_total, n_minus / t_total
    ep, em = math.sqrt(n_plus) / t_total, math.sqrt(n_minus) / t_total
    if n_plus == 0:
        gp, ep = 1.0 / t_total, 1.0 / t_total
        flags.append("no-upward-slips")
    if n_minus == 0:
        gm, em = 1.0 / t_total, 1.0 / t_total
        flags.append("no-downward-slips")
    rates = SlipRates(gp, gm, ep, em, tuple(flags))
    two_pi = 2 * math.pi
    return SdeResult(
        drift=two_pi * (gp - gm),
        diffusion=two_pi * math.pi * (gp + gm),
        drift_err=two_pi * math.hypot(ep, em),
        diffusion_err=two_pi * math.pi * math.hypot(ep, em),
        rates=rates,
        n_plus=n_plus,
        n_minus=n_minus,
        total_time=t_total,
        flags=tuple(flags),
    )


@dataclass(frozen=True)
class SweepResult:
    """Phase cumulants over a (detuning, drive) grid.

    Arrays are indexed [i_delta, i_f]; flags is an object array of tuples
    and failures lists (i, j, message) for points that raised.
    """

    delta_grid: np.ndarray
    f_grid: np.ndarray
    drift: np.ndarray
    diffusion: np.ndarray
    drift_err: np.ndarray
    diffusion_err: np.ndarray
    diffusion_floor: np.ndarray
    flags: np.ndarray
    failures: tuple


def arnold_tongue_sweep(base, delta_grid, f_grid, dq=0.02, space=None, n_workers=1):
    """Drift and diffusion over a synchronization-region grid.

    Warns when the drive injects a photon number comparable to the limit
    cycle (the washboard reduction then degrades); per-point failures are
    recorded and the sweep continues.
    """
    delta_grid = np.asarray(list(delta_grid), dtype=float)
    f_grid = np.asarray(list(f_grid), dtype=float)
    if delta_grid.size == 0 or f_grid.size == 0:
        raise ValueError("grids must be non-empty")

    _, nbar0 = analytic_diffusion(base)
    worst_nf = max(
        f**2 / (d**2 + base.gamma_a**2 / 4.0)
        for f in f_grid
        for d in delta_grid
    )
    if worst_nf > 0.5 * nbar0:
        warnings.warn(
            f"drive injects up to {worst_nf:.1f} photons against a limit "
            f"cycle of {nbar0:.1f}; weak-drive reduction degrades",
            stacklevel=2,
        )

    shape = (delta_grid.size, f_grid.size)
    drift = np.full(shape, np.nan)
    diff = np.full(shape, np.nan)
    derr = np.full(shape, np.nan)
    ferr = np.full(shape, np.nan)
    floor = np.full(shape, np.nan)
    flags = np.empty(shape, dtype=object)
    failures = []

    def run_point(idx):
        i, j = idx
        p = base.with_drive(delta=float(delta_grid[i]), f=float(f_grid[j]))
        return idx, phase_cumulants(p, dq=dq, space=space)

    indices = [(i, j) for i in range(shape[0]) for j in range(shape[1])]
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = pool.map(_guard(run_point), indices)
    else:
        results = map(_guard(run_point), indices)

    for idx, outcome in results:
        i, j = idx
        if isinstance(outcome, Exception):
            failures.append((i, j, repr(outcome)))
            flags[i, j] = ("failed",)
            continue
        pc = outcome
        drift[i, j] = pc.drift
        diff[i, j] = pc.diffusion
        derr[i, j] = pc.drift_err
        ferr[i, j] = pc.diffusion_err
        floor[i, j] = pc.diffusion_floor
        flags[i, j] = pc.flags

    return SweepResult(
        delta_grid=delta_grid,
        f_grid=f_grid,
        drift=drift,
        diffusion=diff,
        drift_err=derr,
        diffusion_err=ferr,
        diffusion_floor=floor,
        flags=flags,
        failures=tuple(failures),
    )


def _guard(fn):
    def wrapped(idx):
        try:
            return fn(idx)
        except Exception as err:  # per-point failures recorded, sweep continues
            return idx, err

    return wrapped

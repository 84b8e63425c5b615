"""Command-line experiment runner.

Subcommands map to the model's standard measurements; configuration comes
from a flat key = value file (or JSON), every key overridable through the
FOCKSYNC_<KEY> environment. All rates are in units of gamma_a unless
gamma_a itself is set. Numeric output files are byte-reproducible for a
fixed config and seed; wall time and version go to a run_meta.json
sidecar.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .fockstab import stationary_distribution
from .liouville import (
    ModelParams,
    effective_gain_rate,
    liouvillian_single,
    liouvillian_two_mode,
)
from .observables import fock_stats, max_phase_density, phase_distribution, wigner_grid
from .phasedyn import (
    adler_predictions,
    adler_sde_oracle,
    arnold_tongue_sweep,
    phase_cumulants,
)
from .steady import SteadyStateError, TruncationError, steady_state

ENV_PREFIX = "FOCKSYNC_"


class ConfigError(ValueError):
    pass


_DEFAULTS = {
    "gamma_a": 1.0,
    "epsilon": 20.0,
    "n0": 10,
    "alpha_a": None,
    "delta": 0.0,
    "f": 0.0,
    "theta": 0.0,
    "e_tilde": 0.0,
    "gamma_b": 0.0,
    "alpha_b": None,
    "dim": None,
    "dim_a": 12,
    "dim_b": 5,
    "dq": 0.02,
    "delta_min": -0.25,
    "delta_max": 0.25,
    "delta_steps": 15,
    "f_min": 0.0,
    "f_max": 3.0,
    "f_steps": 15,
    "wigner_extent": None,
    "wigner_points": 0,
    "phase_points": 512,
    "sde_dt": None,
    "sde_t_final": 2000.0,
    "sde_n_traj": 400,
    "fit_window_low": None,
    "fit_window_high": None,
}

_INT_KEYS = {"n0", "dim", "dim_a", "dim_b", "delta_steps", "f_steps",
             "wigner_points", "phase_points", "sde_n_traj"}


def _coerce(key, raw):
    if raw is None or (isinstance(raw, str) and raw.strip().lower() in ("", "none")):
        return None
    if key in _INT_KEYS:
        return int(float(raw))
    return float(raw)


def load_config(path):
    """Flat key = value text or JSON; unknown keys are rejected."""
    text = Path(path).read_text()
    values = {}
    if text.lstrip().startswith("{"):
        values = json.loads(text)
    else:
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, raw = (part.strip() for part in line.split("=", 1))
            values[key.lower()] = raw
    cfg = dict(_DEFAULTS)
    for key, raw in values.items():
        if key not in _DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        cfg[key] = _coerce(key, raw)
    for key in _DEFAULTS:
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            cfg[key] = _coerce(key, env)
    if cfg["gamma_a"] is None or cfg["gamma_a"] <= 0:
        raise ConfigError("gamma_a must be positive")
    return cfg


def _params(cfg, f=None, delta=None, epsilon=None):
    return ModelParams(
        gamma_a=cfg["gamma_a"],
        epsilon=cfg["epsilon"] if epsilon is None else epsilon,
        n0=cfg["n0"],
        alpha_a=cfg["alpha_a"],
        delta=cfg["delta"] if delta is None else delta,
        f=cfg["f"] if f is None else f,
        theta=cfg["theta"],
        e_tilde=cfg["e_tilde"],
        gamma_b=cfg["gamma_b"],
        alpha_b=cfg["alpha_b"],
    )


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


class Writer:
    """Deterministic CSV/JSON writer with a self-describing header."""

    def __init__(self, out_dir, fmt, cfg, command):
        self.out = Path(out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.fmt = fmt
        self.cfg = cfg
        self.command = command

    def table(self, name, columns, rows):
        if self.fmt == "json":
            payload = {
                "command": self.command,
                "version": __version__,
                "config": {k: self.cfg[k] for k in sorted(self.cfg)},
                "columns": list(columns),
                "records": [[_serialize(v) for v in row] for row in rows],
            }
            path = self.out / f"{name}.json"
            path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")
            return path
        path = self.out / f"{name}.csv"
        lines = [f"# command = {self.command}", f"# version = {__version__}"]
        for key in sorted(self.cfg):
            lines.append(f"# {key} = {self.cfg[key]}")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
        return path

    def meta(self, wall_time, extra=None):
        payload = {
            "command": self.command,
            "version": __version__,
            "wall_time_s": wall_time,
        }
        if extra:
            payload.update(extra)
        (self.out / "run_meta.json").write_text(
            json.dumps(payload, sort_keys=True, indent=1) + "\n"
        )


def _serialize(v):
    if isinstance(v, float):
        return v
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _quality(flags):
    return "ok" if not flags else "+".join(sorted(flags))


def cmd_steady(cfg, writer):
    p = _params(cfg)
    L = liouvillian_single(p, 0.0, cfg["dim"])
    rho = steady_state(L)
    stats = fock_stats(rho)
    peak = max_phase_density(rho, cfg["phase_points"])
    writer.table(
        "populations",
        ["n", "p_n"],
        [(n, float(stats.p_n[n])) for n in range(stats.p_n.size)],
    )
    writer.table(
        "summary",
        ["gamma_a", "epsilon", "delta", "f", "theta", "nbar", "var",
         "var_over_nbar", "max_phase_density"],
        [(p.gamma_a, p.epsilon, p.delta, p.f, p.theta, stats.nbar, stats.var,
          stats.var / stats.nbar if stats.nbar > 0 else float("nan"), peak)],
    )
    if cfg["wigner_points"]:
        _write_wigner(cfg, writer, rho)
    return {}


def _write_wigner(cfg, writer, rho):
    wf = wigner_grid(rho, extent=cfg["wigner_extent"], n=cfg["wigner_points"])
    rows = []
    for i, pv in enumerate(wf.p):
        for j, xv in enumerate(wf.x):
            rows.append((float(xv), float(pv), float(wf.values[i, j])))
    writer.table("wigner", ["x", "p", "w"], rows)
    return wf


def cmd_wigner(cfg, writer):
    if not cfg["wigner_points"]:
        cfg["wigner_points"] = 201
    p = _params(cfg)
    rho = steady_state(liouvillian_single(p, 0.0, cfg["dim"]))
    wf = _write_wigner(cfg, writer, rho)
    writer.table("summary", ["wigner_min", "wigner_integral"],
                 [(wf.min(), wf.integral())])
    return {"wigner_min": wf.min()}


def cmd_phase_dist(cfg, writer):
    p = _params(cfg)
    rho = steady_state(liouvillian_single(p, 0.0, cfg["dim"]))
    dist = phase_distribution(rho, cfg["phase_points"])
    writer.table(
        "phase_distribution",
        ["phi", "p_phi"],
        [(float(x), float(v)) for x, v in zip(dist.phi, dist.values)],
    )
    return {}


def _grid(cfg, prefix):
    n = cfg[f"{prefix}_steps"]
    if n is None or n < 1:
        raise ConfigError(f"{prefix}_steps must be >= 1")
    return np.linspace(cfg[f"{prefix}_min"], cfg[f"{prefix}_max"], n)


def cmd_tongue(cfg, writer, threads=1):
    base = _params(cfg, f=0.0, delta=0.0)
    sweep = arnold_tongue_sweep(
        base, _grid(cfg, "delta"), _grid(cfg, "f"),
        dq=cfg["dq"], n_workers=threads,
    )
    rows = []
    for i, dl in enumerate(sweep.delta_grid):
        for j, fv in enumerate(sweep.f_grid):
            rows.append(
                (float(dl), float(fv), float(sweep.drift[i, j]),
                 float(sweep.diffusion[i, j]), _quality(sweep.flags[i, j]))
            )
    writer.table("tongue", ["delta", "f", "drift", "diffusion", "quality"], rows)
    return {"failures": len(sweep.failures)}


def cmd_kramers(cfg, writer):
    base = _params(cfg, delta=0.0)
    free = phase_cumulants(base.with_drive(f=0.0), dq=cfg["dq"], space=cfg["dim"])
    rows = []
    fs = [f for f in _grid(cfg, "f") if f > 0]
    if not fs:
        raise ConfigError("kramers needs a positive f grid")
    for fv in fs:
        pc = phase_cumulants(base.with_drive(f=float(fv)), dq=cfg["dq"])
        ln = math.log(pc.diffusion) if pc.diffusion > 0 else float("nan")
        rows.append((float(fv), pc.diffusion, ln, _quality(pc.flags)))
    writer.table("kramers", ["f", "diffusion", "ln_diffusion", "quality"], rows)

    lo = cfg["fit_window_low"]
    if lo is None:
        lo = 30.0 * free.diffusion_floor
    hi = cfg["fit_window_high"]
    if hi is None:
        hi = 0.1 * free.diffusion
    window = [(f, d) for f, d, ln, q in rows if lo <= d <= hi and math.isfinite(ln)]
    fit = {"slope": float("nan"), "intercept": float("nan"), "r2": float("nan")}
    if len(window) >= 3:
        xs = np.array([w[0] for w in window])
        ys = np.log([w[1] for w in window])
        slope, intercept = np.polyfit(xs, ys, 1)
        resid = ys - (slope * xs + intercept)
        r2 = 1.0 - resid.var() / ys.var() if ys.var() > 0 else float("nan")
        fit = {"slope": float(slope), "intercept": float(intercept), "r2": float(r2)}
    pred = adler_predictions(base.with_drive(f=1.0), diffusion=free.diffusion)
    self_consistent = 2.0 / (math.sqrt(pred.adler.nbar) * free.diffusion)
    n0_form = 8.0 * math.sqrt(cfg["n0"] / (cfg["gamma_a"] * cfg["epsilon"]))
    writer.table(
        "kramers_fit",
        ["slope", "intercept", "r2", "n_window", "free_diffusion",
         "kramers_exponent_self_consistent", "kramers_exponent_n0_form"],
        [(fit["slope"], fit["intercept"], fit["r2"], len(window),
          free.diffusion, self_consistent, n0_form)],
    )
    return fit


def cmd_adler(cfg, writer, seed=1234):
    p = _params(cfg)
    free = phase_cumulants(p.with_drive(f=0.0, delta=0.0), dq=cfg["dq"])
    pc = phase_cumulants(p, dq=cfg["dq"])
    pred = adler_predictions(p, diffusion=free.diffusion)
    sde = adler_sde_oracle(
        pred.adler, t_final=cfg["sde_t_final"], n_traj=cfg["sde_n_traj"],
        seed=seed, dt=cfg["sde_dt"],
    )
    writer.table(
        "adler",
        ["delta", "f", "drift_quantum", "diffusion_quantum", "drift_sde",
         "drift_sde_err", "diffusion_sde", "diffusion_sde_err",
         "gamma_plus", "gamma_minus", "n_slips", "quality"],
        [(p.delta, p.f, pc.drift, pc.diffusion, sde.drift, sde.drift_err,
          sde.diffusion, sde.diffusion_err, sde.rates.gamma_plus,
          sde.rates.gamma_minus, sde.n_plus + sde.n_minus,
          _quality(tuple(pc.flags) + tuple(sde.flags)))],
    )
    return {}


def cmd_coherent(cfg, writer):
    rows = []
    for dl in _grid(cfg, "delta"):
        for fv in _grid(cfg, "f"):
            p = _params(cfg, f=float(fv), delta=float(dl), epsilon=0.0)
            rho = steady_state(liouvillian_single(p, 0.0, cfg["dim"]))
            amp = fv / math.sqrt(dl**2 + cfg["gamma_a"] ** 2 / 4.0)
            rows.append(
                (float(dl), float(fv), float(amp),
                 max_phase_density(rho, cfg["phase_points"]))
            )
    writer.table(
        "coherent", ["delta", "f", "alpha_abs", "max_phase_density"], rows
    )
    return {}


def cmd_twomode(cfg, writer):
    if cfg["gamma_b"] is None or cfg["gamma_b"] <= 0:
        raise ConfigError("twomode needs gamma_b > 0")
    p = _params(cfg)
    L2 = liouvillian_two_mode(p, (cfg["dim_a"], cfg["dim_b"]))
    rho2 = steady_state(L2, check_truncation=False)
    ma, mb = cfg["dim_a"], cfg["dim_b"]
    rho_a = np.trace(
        rho2.reshape(ma, mb, ma, mb), axis1=1, axis2=3
    )
    p_reduced = np.diag(rho_a).real

    eps_eff = effective_gain_rate(cfg["e_tilde"], cfg["gamma_b"])
    p_eff = stationary_distribution(
        _params(cfg, epsilon=eps_eff, f=0.0, delta=0.0), ma
    )
    tv = 0.5 * float(np.abs(p_reduced - p_eff).sum())
    writer.table(
        "twomode_populations",
        ["n", "p_reduced", "p_effective"],
        [(n, float(p_reduced[n]), float(p_eff[n])) for n in range(ma)],
    )
    writer.table(
        "summary",
        ["e_tilde", "gamma_b", "epsilon_effective", "trace_distance"],
        [(cfg["e_tilde"], cfg["gamma_b"], eps_eff, tv)],
    )
    return {"trace_distance": tv}


_COMMANDS = {
    "steady": cmd_steady,
    "wigner": cmd_wigner,
    "phase-dist": cmd_phase_dist,
    "tongue": cmd_tongue,
    "kramers": cmd_kramers,
    "adler": cmd_adler,
    "coherent": cmd_coherent,
    "twomode": cmd_twomode,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    parser = _Parser(prog="focksync", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True)
        cmd.add_argument("--out", required=True)
        cmd.add_argument("--seed", type=int, default=1234)
        cmd.add_argument("--threads", type=int, default=1)
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as err:
        print(f"focksync: config error: {err}", file=sys.stderr)
        return 1

    writer = Writer(args.out, args.format, cfg, args.command)
    start = time.time()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if args.command == "tongue":
                extra = cmd_tongue(cfg, writer, threads=args.threads)
            elif args.command == "adler":
                extra = cmd_adler(cfg, writer, seed=args.seed)
            else:
                extra = _COMMANDS[args.command](cfg, writer)
    except (ConfigError, ValueError) as err:
        print(f"focksync: config error: {err}", file=sys.stderr)
        return 1
    except (SteadyStateError, TruncationError, FloatingPointError,
            np.linalg.LinAlgError, RuntimeError) as err:
        print(f"focksync: numerical failure: {err}", file=sys.stderr)
        return 2
    writer.meta(time.time() - start, extra)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Eliminating the fast mode of the two-mode model.

The pair-creation coupling plus a strongly damped partner mode acts on
the slow mode like the blockaded single-photon gain. This compares the
reduced number distribution of the full two-mode steady state with the
effective single-mode model at the elimination rate 4 e_tilde^2/gamma_b,
across the damping hierarchy.
"""

import math
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from focksync import (
    ModelParams,
    effective_gain_rate,
    liouvillian_two_mode,
    stationary_distribution,
    steady_state,
)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

n0, eps_eff = 2, 20.0
ma, mb = 12, 5

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))

ratios = np.array([10.0, 25.0, 50.0, 100.0, 250.0, 600.0])
distances = []
for gamma_b in ratios:
    e_tilde = math.sqrt(eps_eff * gamma_b / 4.0)
    assert abs(effective_gain_rate(e_tilde, gamma_b) - eps_eff) < 1e-12
    params = ModelParams(epsilon=1.0, n0=n0, e_tilde=e_tilde, gamma_b=gamma_b)
    rho = steady_state(liouvillian_two_mode(params, (ma, mb)), check_truncation=False)
    reduced = np.diag(np.trace(rho.reshape(ma, mb, ma, mb), axis1=1, axis2=3)).real
    target = stationary_distribution(ModelParams(epsilon=eps_eff, n0=n0), ma)
    tv = 0.5 * np.abs(reduced - target).sum()
    distances.append(tv)
    print(f"gamma_b = {gamma_b:6.0f}: total variation = {tv:.4f}")
    if gamma_b == 50.0:
        width = 0.35
        ax1.bar(np.arange(6) - width / 2, reduced[:6], width, label="reduced two-mode")
        ax1.bar(np.arange(6) + width / 2, target[:6], width, label="effective model")
        ax1.set_xlabel("photon number n")
        ax1.set_ylabel("population")
        ax1.set_title(f"gamma_b = 50, TV = {tv:.3f}")
        ax1.legend(frameon=False)

ax2.loglog(ratios, distances, "o-")
ax2.set_xlabel("gamma_b / gamma_a")
ax2.set_ylabel("total variation distance")
fig.tight_layout()
fig.savefig(OUT / "adiabatic_elimination.png", dpi=150)
print(f"wrote {OUT / 'adiabatic_elimination.png'}")

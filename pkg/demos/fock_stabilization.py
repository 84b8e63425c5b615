"""Stabilizing a Fock state with blockaded gain.

Competing single-photon loss (rate gamma) and nonlinear gain (rate eps)
pin the photon number just below the blockade level n0, where the gain
amplitude has its first zero. This script solves the steady state across
pumping strengths, compares the mean and variance with the closed-form
predictions, and plots the narrowing number distribution.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from focksync import (
    ModelParams,
    fock_stats,
    liouvillian_single,
    predicted_moments,
    steady_state,
)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

n0 = 10
pumpings = [8.0, 20.0, 80.0]

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))

print(f"target Fock level n0 = {n0}")
print(f"{'eps/gamma':>10} {'nbar':>8} {'pred':>8} {'var':>8} {'pred':>8} {'var/nbar':>9}")
rows = []
for eps in pumpings:
    params = ModelParams(epsilon=eps, n0=n0)
    rho = steady_state(liouvillian_single(params))
    stats = fock_stats(rho)
    pred = predicted_moments(n0, 1.0, eps)
    print(
        f"{eps:10.0f} {stats.nbar:8.3f} {pred.nbar_pred:8.3f} "
        f"{stats.var:8.3f} {pred.var_pred:8.3f} {stats.var / stats.nbar:9.3f}"
    )
    ax1.plot(stats.p_n, marker="o", ms=3, label=f"eps = {eps:.0f}")
    rows.append((eps, stats.nbar, stats.var))

ax1.axvline(n0, color="k", ls=":", lw=1)
ax1.set_xlabel("photon number n")
ax1.set_ylabel("population")
ax1.set_xlim(0, n0 + 6)
ax1.legend(frameon=False)

eps_scan = np.geomspace(3, 300, 25)
ratios = []
for eps in eps_scan:
    rho = steady_state(liouvillian_single(ModelParams(epsilon=float(eps), n0=n0)))
    stats = fock_stats(rho)
    ratios.append(stats.var / stats.nbar)
ax2.loglog(eps_scan, ratios, "o-", ms=3)
ax2.loglog(eps_scan, 1.0 / np.sqrt(eps_scan), "k--", lw=1, label="1/sqrt(eps)")
ax2.set_xlabel("eps / gamma")
ax2.set_ylabel("var / nbar")
ax2.legend(frameon=False)

fig.tight_layout()
fig.savefig(OUT / "fock_stabilization.png", dpi=150)
np.savetxt(
    OUT / "fock_stabilization.csv",
    np.array(rows),
    delimiter=",",
    header="eps,nbar,var",
    comments="",
)
print(f"wrote {OUT / 'fock_stabilization.png'}")

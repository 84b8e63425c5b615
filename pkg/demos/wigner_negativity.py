"""Wigner function of the stabilized cycle, undriven and phase-locked.

Without a drive the steady state is a rotationally symmetric ring with
interior fringes that dip below zero, the signature of a number-like
state. A weak resonant drive locks the phase and the ring collapses onto
the drive phase while the fringes, and their negativity, survive.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from focksync import ModelParams, fock_stats, liouvillian_single, steady_state, wigner_grid

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

n0, eps = 10, 20.0
fig, axes = plt.subplots(1, 2, figsize=(9, 4))

for ax, f in zip(axes, (0.0, 1.0)):
    params = ModelParams(epsilon=eps, n0=n0, f=f)
    rho = steady_state(liouvillian_single(params))
    stats = fock_stats(rho)
    extent = 1.2 * np.sqrt(stats.nbar) + 3.0
    wf = wigner_grid(rho, extent=extent, n=241)
    lim = np.abs(wf.values).max()
    im = ax.pcolormesh(wf.x, wf.p, wf.values, cmap="RdBu_r", vmin=-lim, vmax=lim)
    ax.set_title(f"f = {f:.1f}, min W = {wf.min():.4f}")
    ax.set_xlabel("Re alpha")
    ax.set_ylabel("Im alpha")
    ax.set_aspect("equal")
    fig.colorbar(im, ax=ax, shrink=0.8)
    print(f"f = {f}: nbar = {stats.nbar:.3f}, min W = {wf.min():.5f}")

fig.tight_layout()
fig.savefig(OUT / "wigner_negativity.png", dpi=150)
print(f"wrote {OUT / 'wigner_negativity.png'}")

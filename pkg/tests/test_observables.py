import math
import warnings

import numpy as np
import pytest
from scipy.special import gammaln

from focksync.liouville import ModelParams, liouvillian_single
from focksync.observables import (
    fock_stats,
    max_phase_density,
    phase_distribution,
    wigner,
    wigner_grid,
)
from focksync.steady import steady_state


def coherent_dm(m, alpha):
    n = np.arange(m)
    mag = np.exp(-abs(alpha) ** 2 / 2 + n * np.log(abs(alpha) + 1e-300) - 0.5 * gammaln(n + 1))
    vec = mag * np.exp(1j * n * np.angle(alpha))
    return np.outer(vec, vec.conj())


def fock_dm(m, k):
    rho = np.zeros((m, m), dtype=complex)
    rho[k, k] = 1.0
    return rho


def blockade_steady(n0, eps, f=0.0, delta=0.0, theta=0.0):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = ModelParams(epsilon=eps, n0=n0, f=f, delta=delta, theta=theta)
        return steady_state(liouvillian_single(p))


class TestFockStats:
    def test_fock_state(self):
        stats = fock_stats(fock_dm(8, 3))
        assert stats.p_n[3] == 1.0
        assert stats.nbar == 3.0
        assert stats.var == 0.0

    def test_coherent_is_poissonian(self):
        rho = coherent_dm(40, math.sqrt(2.0))
        stats = fock_stats(rho)
        assert stats.nbar == pytest.approx(2.0, abs=1e-8)
        assert stats.var == pytest.approx(2.0, abs=1e-8)

    def test_number_ratio_grows_with_drive_below_one(self):
        ratios = []
        for f in (0.0, 1.0, 2.0):
            stats = fock_stats(blockade_steady(50, 20.0, f=f))
            ratios.append(stats.var / stats.nbar)
        assert all(r < 1.0 for r in ratios)
        assert ratios[-1] > ratios[0]


class TestPhaseDistribution:
    def test_fock_state_is_uniform(self):
        dist = phase_distribution(fock_dm(6, 4))
        np.testing.assert_allclose(dist.values, 1.0, atol=1e-12)

    def test_weak_coherent_harmonic(self):
        # amplitude |a| e^{-i phi0} localizes the phase at phi0
        alpha = 0.04 * np.exp(-0.6j)
        dist = phase_distribution(coherent_dm(12, alpha), n_grid=256)
        expected = 1.0 + 2 * abs(alpha) * np.cos(dist.phi - 0.6)
        assert np.max(np.abs(dist.values - expected)) <= 5 * abs(alpha) ** 2

    def test_synchronized_cycle_peaks_at_drive_phase(self):
        rho = blockade_steady(10, 20.0, f=1.0)
        dist = phase_distribution(rho, n_grid=1024)
        peak = dist.phi[int(np.argmax(dist.values))]
        assert min(peak, 2 * np.pi - peak) <= 2 * np.pi / 1024 + 1e-12

    def test_normalization_and_positivity(self):
        for rho in (coherent_dm(25, 1.5), blockade_steady(5, 20.0, f=0.5)):
            dist = phase_distribution(rho)
            assert dist.coefficients[dist.lmax] == pytest.approx(1.0, abs=1e-12)
            assert dist.values.min() >= -1e-8
            # Fourier symmetry: P_{-l} = conj(P_l)
            np.testing.assert_allclose(
                dist.coefficients[::-1], dist.coefficients.conj(), atol=1e-14
            )

    def test_rotational_covariance(self):
        rho = blockade_steady(5, 20.0, f=0.8, theta=0.0)
        m = rho.shape[0]
        n_grid = 256
        shift = 16
        theta_rot = 2 * np.pi * shift / n_grid
        u = np.diag(np.exp(1j * theta_rot * np.arange(m)))
        rho_rot = u @ rho @ u.conj().T
        base = phase_distribution(rho, n_grid).values
        rot = phase_distribution(rho_rot, n_grid).values
        # e^{i theta n} rho e^{-i theta n} advances the distribution to
        # P(phi + theta)
        np.testing.assert_allclose(rot, np.roll(base, -shift), atol=1e-9)


class TestMaxPhaseDensity:
    def test_fock_state(self):
        assert max_phase_density(fock_dm(5, 2)) == pytest.approx(1.0, abs=1e-12)

    def test_weak_coherent(self):
        got = max_phase_density(coherent_dm(12, 0.05))
        assert got == pytest.approx(1.1, rel=0.02)

    def test_strong_coherent(self):
        got = max_phase_density(coherent_dm(60, 5.0))
        assert got == pytest.approx(math.sqrt(8 * math.pi) * 5.0, rel=0.05)

    def test_rotation_invariance(self):
        rho = coherent_dm(30, 1.2)
        m = rho.shape[0]
        u = np.diag(np.exp(1j * 0.713 * np.arange(m)))
        rotated = u @ rho @ u.conj().T
        assert max_phase_density(rotated) == pytest.approx(
            max_phase_density(rho), abs=1e-6
        )


class TestWigner:
    def test_vacuum_peak(self):
        assert wigner(fock_dm(10, 0), np.array(0j)) == pytest.approx(2 / np.pi)

    def test_fock_parity_at_origin(self):
        for n in (1, 2, 5):
            got = wigner(fock_dm(12, n), np.array(0j))
            assert got == pytest.approx((-1) ** n * 2 / np.pi, abs=1e-12)

    def test_normalization(self):
        wf = wigner_grid(coherent_dm(30, 1.0 + 0.5j), extent=7.0, n=141)
        assert wf.integral() == pytest.approx(1.0, abs=1e-3)

    def test_negativity_of_driven_cycle(self):
        rho = blockade_steady(10, 20.0, f=1.0)
        stats = fock_stats(rho)
        wf = wigner_grid(rho, extent=1.2 * math.sqrt(stats.nbar) + 3, n=201)
        assert wf.min() < -0.01

    def test_position_marginal_matches_hermite(self):
        # integrate out the momentum direction and compare against the
        # wavefunction density computed from Hermite functions
        alpha = 0.9 + 0.3j
        m = 25
        rho = coherent_dm(m, alpha)
        ys = np.linspace(-7.0, 7.0, 801)
        for x_re in (-0.5, 0.4, 1.2):
            vals = wigner(rho, x_re + 1j * ys)
            marginal = np.trapezoid(vals, ys)

            x = math.sqrt(2.0) * x_re
            psi = np.zeros(m)
            psi[0] = math.pi ** -0.25 * math.exp(-x * x / 2.0)
            if m > 1:
                psi[1] = math.sqrt(2.0) * x * psi[0]
            for n in range(1, m - 1):
                psi[n + 1] = math.sqrt(2.0 / (n + 1)) * x * psi[n] - math.sqrt(
                    n / (n + 1.0)
                ) * psi[n - 1]
            density = float(np.real(psi @ rho @ psi))
            # x = sqrt(2) Re alpha, so densities differ by the Jacobian
            assert marginal / math.sqrt(2.0) == pytest.approx(density, abs=1e-6)

    def test_rotational_covariance(self):
        rho = blockade_steady(5, 20.0, f=0.8)
        m = rho.shape[0]
        theta_rot = 0.37
        u = np.diag(np.exp(1j * theta_rot * np.arange(m)))
        rho_rot = u @ rho @ u.conj().T
        pts = np.array([1.5 + 0.2j, 0.7 - 1.1j, -0.4 + 0.9j])
        base = wigner(rho, pts)
        rot = wigner(rho_rot, pts * np.exp(1j * theta_rot))
        np.testing.assert_allclose(rot, base, atol=1e-9)

    def test_grid_default_extent(self):
        wf = wigner_grid(fock_dm(9, 1))
        assert wf.x.max() == pytest.approx(2 * math.sqrt(9))

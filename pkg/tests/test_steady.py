import numpy as np
import pytest

from focksync.fockstab import stationary_distribution
from focksync.fockspace import destroy
from focksync.liouville import ModelParams, liouvillian_single, trace_functional, vec
from focksync.steady import (
    TruncationError,
    lambda0_curve,
    leading_eigenvalue,
    steady_state,
)


def density_matrix_invariants(rho):
    assert np.linalg.norm(rho - rho.conj().T) <= 1e-10
    assert abs(np.trace(rho).real - 1.0) <= 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-9


class TestSteadyState:
    def test_pure_decay_vacuum(self):
        p = ModelParams(epsilon=0.0)
        rho = steady_state(liouvillian_single(p, 0.0, 12))
        expected = np.zeros((12, 12), complex)
        expected[0, 0] = 1.0
        np.testing.assert_allclose(rho, expected, atol=1e-12)

    def test_driven_cavity_photon_number(self):
        p = ModelParams(epsilon=0.0, delta=0.3, f=1.2)
        rho = steady_state(liouvillian_single(p))
        m = rho.shape[0]
        nbar = float(np.arange(m) @ np.diag(rho).real)
        nf = p.f**2 / (p.delta**2 + p.gamma_a**2 / 4)
        assert nbar == pytest.approx(nf, rel=1e-8)

    @pytest.mark.parametrize("n0,eps", [(5, 20.0), (10, 20.0), (20, 100.0)])
    def test_invariants_across_models(self, n0, eps):
        p = ModelParams(epsilon=eps, n0=n0)
        L = liouvillian_single(p)
        rho = steady_state(L)
        density_matrix_invariants(rho)
        # exact detailed-balance oracle for the undriven chain
        prod = stationary_distribution(p, L.hilbert_dims[0])
        assert 0.5 * np.abs(np.diag(rho).real - prod).sum() <= 1e-11

    def test_blockade_moments_near_closed_forms(self):
        # the large-n0 closed forms are ~20-45% accurate down at n0=5;
        # the solver value is the reference, the prediction the sanity band
        from focksync.fockstab import predicted_moments

        p = ModelParams(epsilon=20.0, n0=5)
        rho = steady_state(liouvillian_single(p))
        m = rho.shape[0]
        pn = np.diag(rho).real
        nbar = float(np.arange(m) @ pn)
        var = float((np.arange(m) ** 2) @ pn - nbar**2)
        pred = predicted_moments(5, 1.0, 20.0)
        assert nbar == pytest.approx(pred.nbar_pred, rel=0.25)
        assert var == pytest.approx(pred.var_pred, rel=0.50)

    def test_truncation_error(self):
        import warnings

        # a drive injecting ~9 photons cannot live in 10 levels
        p = ModelParams(epsilon=0.0, f=1.5)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            L = liouvillian_single(p, 0.0, 10)
        with pytest.raises(TruncationError):
            steady_state(L)

    def test_truncation_doubling(self):
        p = ModelParams(epsilon=20.0, n0=5)
        base = liouvillian_single(p)
        m = base.hilbert_dims[0]
        nbars = []
        for dim in (m, 2 * m):
            rho = steady_state(liouvillian_single(p, 0.0, dim))
            nbars.append(float(np.arange(dim) @ np.diag(rho).real))
        assert abs(nbars[1] - nbars[0]) / nbars[0] < 1e-6

    def test_rejects_deformed_generator(self):
        p = ModelParams(epsilon=20.0, n0=3)
        with pytest.raises(ValueError):
            steady_state(liouvillian_single(p, q=0.1))


class TestLeadingEigenvalue:
    def test_zero_mode(self):
        p = ModelParams(epsilon=20.0, n0=5, f=0.5, delta=0.1)
        L = liouvillian_single(p)
        rho = steady_state(L)
        res = leading_eigenvalue(L, guess=0.0, v0=vec(rho))
        assert abs(res.value) <= 1e-10 * L.norm
        assert res.residual <= 1e-10 * L.norm

    def test_perturbative_trace_oracle(self):
        # at f = 0 the first-order tilt has vanishing column sums, so
        # lambda0(q) equals Tr[L(q) rho_ss] with only higher-order error
        p = ModelParams(epsilon=20.0, n0=5)
        L0 = liouvillian_single(p)
        m = L0.hilbert_dims[0]
        rho = steady_state(L0)
        for q in (0.02, 0.05):
            Lq = liouvillian_single(p, q)
            oracle = complex(trace_functional(m) @ (Lq.matrix @ vec(rho)))
            res = leading_eigenvalue(Lq, guess=oracle, v0=vec(rho))
            assert res.value == pytest.approx(oracle, rel=0.02, abs=1e-12)

    def test_vacuum_counts_nothing(self):
        # pure decay: the vacuum stationary state never moves the phase
        p = ModelParams(epsilon=0.0)
        rho = steady_state(liouvillian_single(p, 0.0, 12))
        for q in (0.1, 0.3):
            Lq = liouvillian_single(p, q, 12)
            res = leading_eigenvalue(Lq, guess=0.0, v0=vec(rho))
            assert abs(res.value) <= 1e-12 * Lq.norm

    def test_conjugate_symmetry(self):
        p = ModelParams(epsilon=100.0, n0=20)
        track = lambda0_curve(p, [-0.1, 0.0, 0.1])
        lam_m, _, lam_p = track.lambda0
        assert abs(lam_m - np.conj(lam_p)) <= 1e-9


class TestLambdaCurve:
    def test_single_point(self):
        p = ModelParams(epsilon=20.0, n0=5)
        track = lambda0_curve(p, [0.0])
        assert track.lambda0.tolist() == [0.0]

    def test_requires_zero(self):
        p = ModelParams(epsilon=20.0, n0=5)
        with pytest.raises(ValueError):
            lambda0_curve(p, [0.1, 0.2])
        with pytest.raises(ValueError):
            lambda0_curve(p, [0.0, 0.6])

    def test_real_concave_curve_matches_coherence_decay(self):
        # independent oracle: the slowest eigenvalue of the one-offset
        # coherence sector of the undeformed generator is the phase
        # diffusion rate; the counting-field curvature must agree
        from focksync.specfun import kummer_1f1_neg

        p = ModelParams(epsilon=20.0, n0=5)
        L = liouvillian_single(p)
        m = L.hilbert_dims[0]
        track = lambda0_curve(p, [-0.1, -0.05, 0.0, 0.05, 0.1])
        lam = dict(zip(track.q_values, track.lambda0))
        assert max(abs(np.imag(v)) for v in track.lambda0) <= 1e-10
        assert lam[0.05].real < 0 and lam[0.1].real < 4 * lam[0.05].real * 0.9

        fvals = np.array([kummer_1f1_neg(float(n), p.alpha_a) for n in range(m)])
        block = np.zeros((m - 1, m - 1))
        for n in range(m - 1):
            if n + 1 < m - 1:
                block[n, n + 1] += p.gamma_a * np.sqrt((n + 2) * (n + 1))
            block[n, n] -= p.gamma_a * 0.5 * ((n + 1) + n)
            if n >= 1:
                block[n, n - 1] += (
                    p.epsilon * np.sqrt((n + 1) * n) * fvals[n] * fvals[n - 1]
                )
            gq = (n + 2) * fvals[n + 1] ** 2 if n + 1 <= m - 2 else 0.0
            g0 = (n + 1) * fvals[n] ** 2
            block[n, n] -= p.epsilon * 0.5 * (gq + g0)
        coherence_rate = -np.linalg.eigvals(block).real.max()
        curvature_rate = -lam[0.05].real / 0.05**2
        assert curvature_rate == pytest.approx(coherence_rate, rel=0.01)

    def test_branch_tracking_survives_metastable_spectator(self):
        # at strong pumping a second basin fits inside the truncation and
        # parks an eigenvalue near zero; overlap continuation must stay on
        # the stationary branch (whose curvature is large), not hop to it
        p = ModelParams(epsilon=100.0, n0=20)
        track = lambda0_curve(p, [0.0, 0.05])
        d_est = -track.lambda0[1].real / 0.05**2
        assert d_est > 0.3  # the spectator branch would give ~0.025

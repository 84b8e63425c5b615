import math

import numpy as np
import pytest
from scipy import special as sps

from focksync.specfun import (
    BesselConstants,
    KummerConvergenceError,
    bessel_constants,
    kummer_1f1_neg,
    laguerre,
    laguerre_first_zero,
    mehler_heine_f,
)


def laguerre_series_oracle(n, k, x):
    """Direct series definition with exact binomials (independent route)."""
    total = 0.0
    for i in range(n + 1):
        total += (-1.0) ** i * math.comb(n + k, n - i) * x**i / math.factorial(i)
    return total


class TestLaguerre:
    def test_degree_zero_is_one(self):
        assert laguerre(0, 1, 0.7) == 1.0

    def test_degree_one_closed_form(self):
        assert laguerre(1, 1, 0.5) == pytest.approx(1.5, abs=1e-15)

    def test_degree_two_closed_form(self):
        # (x^2 - 6x + 6)/2 at x = 3, cross-checked against the series route
        assert laguerre(2, 1, 3.0) == pytest.approx(-1.5, abs=1e-14)
        assert laguerre_series_oracle(2, 1, 3.0) == pytest.approx(-1.5, abs=1e-12)

    def test_against_series_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(0, 14))
            k = int(rng.integers(0, 4))
            x = float(rng.uniform(0.0, 6.0))
            ours = laguerre(n, k, x)
            ref = laguerre_series_oracle(n, k, x)
            assert ours == pytest.approx(ref, rel=1e-11, abs=1e-11)

    def test_against_scipy(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            n = int(rng.integers(0, 180))
            k = int(rng.integers(0, 3))
            x = float(rng.uniform(0.0, 10.0))
            ref = sps.eval_genlaguerre(n, k, x)
            assert laguerre(n, k, x) == pytest.approx(ref, rel=1e-10, abs=1e-10)

    def test_recurrence_residual(self):
        # (n+1) L_{n+1} - (2n+k+1-x) L_n + (n+k) L_{n-1} = 0
        rng = np.random.default_rng(3)
        for _ in range(120):
            n = int(rng.integers(1, 200))
            k = int(rng.integers(0, 3))
            x = float(rng.uniform(0.0, 10.0))
            lm1 = laguerre(n - 1, k, x)
            l0 = laguerre(n, k, x)
            lp1 = laguerre(n + 1, k, x)
            resid = (n + 1) * lp1 - (2 * n + k + 1 - x) * l0 + (n + k) * lm1
            assert abs(resid) <= 1e-12 * max(1.0, abs(l0))

    def test_vectorized_argument(self):
        x = np.linspace(0.0, 5.0, 11)
        vals = laguerre(3, 1, x)
        assert vals.shape == x.shape
        assert vals[0] == pytest.approx(laguerre(3, 1, 0.0))

    def test_rejects_absurd_degree(self):
        with pytest.raises(ValueError):
            laguerre(10**6 + 1, 0, 1.0)
        with pytest.raises(ValueError):
            laguerre(-1, 0, 1.0)


class TestKummer:
    def test_empty_series(self):
        assert kummer_1f1_neg(0.0, 1.0) == 1.0

    def test_terminating_series(self):
        assert kummer_1f1_neg(1.0, 0.8) == pytest.approx(0.6, abs=1e-15)

    def test_integer_consistency_single(self):
        ref = laguerre(5, 1, 1.0) / 6.0
        assert kummer_1f1_neg(5.0, 1.0) == pytest.approx(ref, rel=1e-12)

    def test_integer_consistency_sweep(self):
        # (n+1) 1F1(-n, 2, a) = L_n^(1)(a) over the full domain box
        rng = np.random.default_rng(23)
        for _ in range(150):
            n = int(rng.integers(0, 101))
            a = float(rng.uniform(1e-3, 4.0))
            lhs = kummer_1f1_neg(float(n), a) * (n + 1)
            rhs = laguerre(n, 1, a)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)

    def test_against_mpmath_noninteger(self):
        mpmath = pytest.importorskip("mpmath")
        rng = np.random.default_rng(5)
        for _ in range(25):
            x = float(rng.uniform(-0.5, 40.0))
            a = float(rng.uniform(0.05, 4.0))
            ref = float(mpmath.hyp1f1(-x, 2, a))
            assert kummer_1f1_neg(x, a) == pytest.approx(ref, rel=1e-9, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            kummer_1f1_neg(-0.6, 1.0)
        with pytest.raises(ValueError):
            kummer_1f1_neg(1.0, 0.0)

    def test_convergence_error_carries_partial(self):
        err = KummerConvergenceError("nope", partial=1.25)
        assert err.partial == 1.25


class TestLaguerreFirstZero:
    def test_n0_one(self):
        assert laguerre_first_zero(1) == pytest.approx(2.0, abs=1e-12)

    def test_n0_two(self):
        assert laguerre_first_zero(2) == pytest.approx(3.0 - math.sqrt(3.0), abs=1e-12)

    def test_large_n0_scaling(self):
        root = laguerre_first_zero(50)
        assert abs(root - 3.67 / 50) / (3.67 / 50) < 0.03

    def test_is_a_root_and_first(self):
        for n0 in (3, 7, 25, 80):
            root = laguerre_first_zero(n0)
            assert abs(laguerre(n0, 1, root)) < 1e-9 * (n0 + 1)
            # no sign change before the root
            probe = np.linspace(root * 0.05, root * 0.95, 19)
            assert np.all(laguerre(n0, 1, probe) > 0)

    def test_limit_matches_bessel_zero(self):
        bc = bessel_constants()
        target = bc.x11**2 / 4.0
        assert laguerre_first_zero(100) * 100 == pytest.approx(target, rel=0.01)


class TestBesselConstants:
    def test_values(self):
        bc = bessel_constants()
        assert isinstance(bc, BesselConstants)
        assert round(bc.x11, 2) == 3.83
        assert round(bc.j0_at_x11, 2) == -0.40

    def test_root_property(self):
        bc = bessel_constants()
        assert abs(sps.j1(bc.x11)) < 1e-10
        assert bc.j0_at_x11 < 0

    def test_against_scipy(self):
        bc = bessel_constants()
        assert bc.x11 == pytest.approx(sps.jn_zeros(1, 1)[0], abs=1e-10)
        assert bc.j0_at_x11 == pytest.approx(sps.j0(bc.x11), abs=1e-12)


class TestMehlerHeine:
    def test_direct_substitution(self):
        ref = math.exp(0.5) * sps.j1(math.sqrt(8.0))
        assert mehler_heine_f(1, 1.0) == pytest.approx(ref, rel=1e-12)

    def test_vanishes_at_matched_root(self):
        n0 = 50
        alpha = laguerre_first_zero(n0)
        assert abs(mehler_heine_f(n0, alpha)) < 0.01

    def test_tracks_kummer(self):
        assert mehler_heine_f(100, 0.0367) == pytest.approx(
            kummer_1f1_neg(100.0, 0.0367), rel=0.05
        )

    def test_tracks_kummer_near_blockade(self):
        # asymptotic-vs-exact agreement for n >= 30 with n*alpha near the zero
        for n in (30, 60, 120):
            for shift in (0.7, 1.0, 1.3):
                alpha = shift * 3.67 / n
                exact = kummer_1f1_neg(float(n), alpha)
                approx = mehler_heine_f(n, alpha)
                assert abs(approx - exact) <= 0.05 * max(abs(exact), 1e-3)

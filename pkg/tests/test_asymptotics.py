import math

import pytest

from twoqueue import (
    ModelParams,
    NoBifurcationError,
    NoLimitCycleError,
    Perturbation,
    approx_equilibrium,
    characteristic_crossing,
    critical_delay_modified,
    critical_delay_symmetric,
    equilibrium_coefficients,
    lindstedt_amplitude,
)

BASE = ModelParams(lam=10.0, mu=1.0, theta=1.0, alpha=0.0)

# frozen by independent hand evaluation of the printed formulas
DCR = 0.3617394710074713
WCR = 4.898979485566356
AMP_COEFFICIENT = 6.512412161076835


class TestEquilibriumCoefficients:
    def test_zero_perturbation_collapses(self):
        coeffs = equilibrium_coefficients(BASE, Perturbation())
        assert coeffs.q1_shift == 0.0 and coeffs.q2_shift == 0.0

    def test_componentwise_values(self):
        # at (lam, mu, theta) = (10, 1, 1): denominators 48 and 24
        cases = {
            "lam_hat": (14.0 / 48.0, 10.0 / 48.0),
            "mu_hat": (-140.0 / 48.0, -100.0 / 48.0),
            "theta_hat": (-100.0 / 48.0, 100.0 / 48.0),
            "alpha_hat": (10.0 / 24.0, -10.0 / 24.0),
        }
        for name, (want_a, want_b) in cases.items():
            coeffs = equilibrium_coefficients(BASE, Perturbation(**{name: 1.0}))
            assert math.isclose(coeffs.q1_shift, want_a, rel_tol=1e-14), name
            assert math.isclose(coeffs.q2_shift, want_b, rel_tol=1e-14), name

    @pytest.mark.parametrize(
        "params",
        [
            ModelParams(10.0, 1.0, 1.0),
            ModelParams(4.0, 0.5, 2.0),
            ModelParams(7.0, 2.0, 0.3),
            ModelParams(1.0, 3.0, 5.0),
        ],
    )
    def test_sign_structure(self, params):
        lam = equilibrium_coefficients(params, Perturbation(lam_hat=1.0))
        mu = equilibrium_coefficients(params, Perturbation(mu_hat=1.0))
        theta = equilibrium_coefficients(params, Perturbation(theta_hat=1.0))
        alpha = equilibrium_coefficients(params, Perturbation(alpha_hat=1.0))
        # arrival-rate terms: both positive, first queue's larger
        assert lam.q1_shift > lam.q2_shift > 0.0
        # service-rate terms: both negative, first queue's larger in magnitude
        assert mu.q1_shift < mu.q2_shift < 0.0
        # sensitivity and preference terms: equal magnitude, opposite signs
        assert theta.q1_shift == -theta.q2_shift and theta.q1_shift < 0.0
        assert alpha.q1_shift == -alpha.q2_shift and alpha.q1_shift > 0.0

    def test_approx_equilibrium_rows(self):
        flat = approx_equilibrium(BASE, Perturbation())
        assert (flat.q1, flat.q2) == (5.0, 5.0)
        row5 = approx_equilibrium(BASE, Perturbation(1.0, 0.1, 1.0, 1.0, 0.1))
        assert math.isclose(row5.q1, 4.833333333333333, abs_tol=5e-15)
        assert math.isclose(row5.q2, 5.166666666666667, abs_tol=5e-15)
        row2 = approx_equilibrium(BASE, Perturbation(mu_hat=0.1, epsilon=0.1))
        assert round(row2.q1, 4) == 4.9708
        assert round(row2.q2, 4) == 4.9792


class TestCriticalDelays:
    def test_symmetric_value(self):
        crit = critical_delay_symmetric(BASE)
        assert math.isclose(crit.delta, DCR, rel_tol=1e-15)
        assert math.isclose(crit.omega, WCR, rel_tol=1e-15)

    def test_boundary_raises(self):
        with pytest.raises(NoBifurcationError):
            critical_delay_symmetric(ModelParams(lam=2.0, mu=1.0, theta=1.0))
        with pytest.raises(NoBifurcationError):
            critical_delay_symmetric(ModelParams(lam=1.0, mu=1.0, theta=1.0))

    def test_hand_evaluated_case(self):
        # lam=4, mu=1, theta=1: omega = sqrt(3), delta = (2 pi / 3) / sqrt(3)
        crit = critical_delay_symmetric(ModelParams(4.0, 1.0, 1.0))
        assert math.isclose(crit.omega, 1.7320508075688772, rel_tol=1e-14)
        assert math.isclose(crit.delta, 1.2091995761561452, rel_tol=1e-14)

    def test_crossing_matches_symmetric(self):
        crit = critical_delay_symmetric(BASE)
        crossing = characteristic_crossing(5.0, 1.0)
        assert crossing.delta == crit.delta
        assert crossing.omega == crit.omega

    def test_crossing_hand_values(self):
        crossing = characteristic_crossing(2.0, 1.0)
        assert math.isclose(crossing.omega, 1.7320508075688772, rel_tol=1e-14)
        assert math.isclose(crossing.delta, 1.2091995761561452, rel_tol=1e-14)
        # the half-shifted gain for lam_hat=1, eps=0.1
        shifted = characteristic_crossing(5.025, 1.0)
        assert math.isclose(shifted.delta, 0.35965916490371375, rel_tol=1e-14)

    def test_crossing_requires_gain_above_decay(self):
        with pytest.raises(NoBifurcationError):
            characteristic_crossing(1.0, 1.0)
        with pytest.raises(NoBifurcationError):
            characteristic_crossing(0.5, 1.0)


class TestModifiedCriticalDelay:
    def test_zero_perturbation_collapse(self):
        mod = critical_delay_modified(BASE, Perturbation())
        assert mod.first_order == DCR
        assert mod.closed_form == DCR
        assert mod.omega == WCR
        assert mod.alpha_second_order == DCR  # zero alpha_hat contributes nothing

    @pytest.mark.parametrize(
        "pert, expected",
        [
            (Perturbation(lam_hat=1.0, epsilon=0.1), 0.3596470779293074),
            (Perturbation(mu_hat=1.0, epsilon=0.1), 0.36457642823873687),
            (Perturbation(theta_hat=1.0, epsilon=0.1), 0.34081554022583216),
            (Perturbation(alpha_hat=1.0, epsilon=0.1), DCR),
            (Perturbation(1.0, 1.0, 1.0, 1.0, 0.1), 0.3415601043789338),
        ],
    )
    def test_first_order_values(self, pert, expected):
        mod = critical_delay_modified(BASE, pert)
        assert math.isclose(mod.first_order, expected, rel_tol=1e-14)

    def test_direction_of_shifts(self):
        up = critical_delay_modified(BASE, Perturbation(mu_hat=1.0, epsilon=0.1))
        down_lam = critical_delay_modified(BASE, Perturbation(lam_hat=1.0, epsilon=0.1))
        down_theta = critical_delay_modified(BASE, Perturbation(theta_hat=1.0, epsilon=0.1))
        alpha_only = critical_delay_modified(BASE, Perturbation(alpha_hat=1.0, epsilon=0.1))
        assert up.first_order > DCR
        assert down_lam.first_order < DCR
        assert down_theta.first_order < DCR
        assert alpha_only.first_order == DCR
        assert alpha_only.alpha_second_order > DCR

    def test_alpha_second_order_value(self):
        mod = critical_delay_modified(BASE, Perturbation(alpha_hat=1.0, epsilon=0.1))
        assert math.isclose(mod.alpha_second_order, 0.3617685320224458, rel_tol=1e-14)
        # only attached when the preference offset is the sole perturbation
        mixed = critical_delay_modified(BASE, Perturbation(lam_hat=1.0, alpha_hat=1.0, epsilon=0.1))
        assert mixed.alpha_second_order is None

    def test_first_and_closed_agree_to_second_order(self):
        diffs = []
        for eps in (0.1, 0.05, 0.025):
            mod = critical_delay_modified(BASE, Perturbation(1.0, 1.0, 1.0, 1.0, eps))
            diffs.append(abs(mod.closed_form - mod.first_order))
        assert 3.0 <= diffs[0] / diffs[1] <= 5.0
        assert 3.0 <= diffs[1] / diffs[2] <= 5.0

    def test_perturbed_regime_check(self):
        params = ModelParams(lam=2.2, mu=1.0, theta=1.0)
        with pytest.raises(NoBifurcationError):
            critical_delay_modified(params, Perturbation(lam_hat=-3.0, epsilon=0.1))


class TestLindstedtAmplitude:
    PERT = Perturbation(1.0, 1.0, 1.0, 1.0, 0.1)

    def dmod(self):
        return critical_delay_modified(BASE, self.PERT).closed_form

    @pytest.mark.parametrize(
        "offset, expected",
        [
            (0.05, 1.4562196289664113),
            (0.1, 2.0594055490782153),
            (0.15, 2.522246384348924),
            (0.2, 2.9124392579328227),
        ],
    )
    def test_quoted_values(self, offset, expected):
        pred = lindstedt_amplitude(BASE, self.PERT, self.dmod() + offset)
        assert math.isclose(pred.amplitude, expected, rel_tol=1e-12)

    def test_zero_at_critical_delay(self):
        pred = lindstedt_amplitude(BASE, self.PERT, self.dmod())
        assert pred.amplitude == 0.0

    def test_square_root_law(self):
        dmod = self.dmod()
        for small in (0.01, 0.05, 0.2):
            lo = lindstedt_amplitude(BASE, self.PERT, dmod + small).amplitude
            hi = lindstedt_amplitude(BASE, self.PERT, dmod + 4.0 * small).amplitude
            # exact up to the rounding of (dmod + offset) - dmod
            assert abs(hi - 2.0 * lo) <= 4.0 * math.ulp(hi)

    def test_below_critical_raises(self):
        with pytest.raises(NoLimitCycleError):
            lindstedt_amplitude(BASE, self.PERT, self.dmod() - 1e-6)

    def test_symmetric_case_frequency(self):
        pred = lindstedt_amplitude(BASE, Perturbation(), DCR)
        assert pred.amplitude == 0.0
        assert pred.omega_correction is None
        assert pred.frequency == WCR

    def test_frequency_correction_sign(self):
        pred = lindstedt_amplitude(BASE, self.PERT, self.dmod() + 0.05)
        # the cycle slows as the delay grows past critical
        assert pred.frequency < critical_delay_modified(BASE, self.PERT).omega
        assert pred.omega_correction < 0.0

    def test_theta_away_from_one_still_valid(self):
        # exercises the (theta - 1) term of the denominator on both sides
        for theta in (0.5, 2.0):
            params = ModelParams(lam=10.0, mu=1.0, theta=theta)
            dmod = critical_delay_modified(params, Perturbation()).closed_form
            pred = lindstedt_amplitude(params, Perturbation(), dmod + 0.02)
            assert pred.amplitude > 0.0 and math.isfinite(pred.amplitude)

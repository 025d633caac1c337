import math

import numpy as np
import pytest

from twoqueue import (
    BracketError,
    HistorySpec,
    IntegrationConfig,
    MeasurementError,
    ModelParams,
    Perturbation,
    Stability,
    StabilitySettings,
    Trajectory,
    classify_stability,
    critical_delay_modified,
    epsilon_sweep,
    equilibrium_report,
    fixed_point_equilibrium,
    integrate,
    locate_hopf_empirically,
    measure_amplitude,
)

BASE = ModelParams(lam=10.0, mu=1.0, theta=1.0, alpha=0.0)
NO_PERT = Perturbation()


def synthetic_trajectory(t_end, h, build_q1, build_q2):
    n = int(round(t_end / h))
    times = np.arange(n + 1) * h
    return Trajectory(times, build_q1(times), build_q2(times), delta=100 * h, steps_per_delay=100)


class TestFixedPoint:
    def test_symmetric_point(self):
        star = fixed_point_equilibrium(BASE, NO_PERT)
        assert math.isclose(star.q1, 5.0, abs_tol=1e-12)
        assert math.isclose(star.q2, 5.0, abs_tol=1e-12)

    def test_arrival_perturbed_point(self):
        star = fixed_point_equilibrium(BASE, Perturbation(lam_hat=1.0, epsilon=0.1))
        assert round(star.q1, 4) == 5.0290
        assert round(star.q2, 4) == 5.0207

    def test_sensitivity_perturbed_point(self):
        star = fixed_point_equilibrium(BASE, Perturbation(theta_hat=1.0, epsilon=0.1))
        assert round(star.q1, 4) == 4.8000
        assert round(star.q2, 4) == 5.2000

    def test_residual_below_tolerance(self):
        report = equilibrium_report(BASE, Perturbation(1.0, 0.1, 1.0, 1.0, 0.1))
        assert report.residual < 1e-12


class TestEquilibriumReport:
    def test_zero_perturbation_errors_vanish(self):
        report = equilibrium_report(BASE, NO_PERT)
        assert report.error_q1 == 0.0
        assert report.error_q2 == 0.0

    def test_arrival_row_errors(self):
        # published error cells (2e-4, 1e-4) follow the rounded-column
        # convention; the true gaps agree with them to one rounding unit
        report = equilibrium_report(BASE, Perturbation(lam_hat=1.0, epsilon=0.1))
        assert 0.0 < report.error_q1 == pytest.approx(2e-4, abs=1e-4)
        assert 0.0 < report.error_q2 == pytest.approx(1e-4, abs=1e-4)

    def test_preference_row_errors_tiny(self):
        report = equilibrium_report(BASE, Perturbation(alpha_hat=1.0, epsilon=0.1))
        assert report.error_q1 < 5e-5
        assert report.error_q2 < 5e-5

    def test_error_fields_match_definition(self):
        report = equilibrium_report(BASE, Perturbation(theta_hat=1.0, epsilon=0.1))
        assert report.error_q1 == abs(report.approx.q1 - report.exact.q1)
        assert report.error_q2 == abs(report.approx.q2 - report.exact.q2)

    def test_second_order_error_scaling(self):
        # halving epsilon divides the first-order error by ~4
        errors = [
            equilibrium_report(BASE, Perturbation(theta_hat=1.0, epsilon=eps)).error_q1
            for eps in (0.05, 0.025, 0.0125)
        ]
        assert 3.0 <= errors[0] / errors[1] <= 5.0
        assert 3.0 <= errors[1] / errors[2] <= 5.0

    def test_directional_effects(self):
        base_level = 5.0
        up = fixed_point_equilibrium(BASE, Perturbation(lam_hat=1.0, epsilon=0.05))
        assert up.q1 > base_level and up.q2 > base_level and up.q1 > up.q2
        down = fixed_point_equilibrium(BASE, Perturbation(mu_hat=1.0, epsilon=0.05))
        assert down.q1 < base_level and down.q2 < base_level and down.q1 < down.q2
        tilt = fixed_point_equilibrium(BASE, Perturbation(theta_hat=1.0, epsilon=0.05))
        assert tilt.q1 < base_level < tilt.q2
        drop1, rise2 = base_level - tilt.q1, tilt.q2 - base_level
        assert abs(drop1 - rise2) < 0.1 * max(drop1, rise2)
        pref = fixed_point_equilibrium(BASE, Perturbation(alpha_hat=1.0, epsilon=0.05))
        assert pref.q2 < base_level < pref.q1


class TestEpsilonSweep:
    def test_monotone_errors_in_hat(self):
        values = [1.0 + 0.5 * k for k in range(9)]
        reports = epsilon_sweep(BASE, "lam_hat", values, Perturbation(epsilon=0.1))
        errors1 = [r.error_q1 for r in reports]
        errors2 = [r.error_q2 for r in reports]
        assert all(a <= b for a, b in zip(errors1, errors1[1:]))
        assert all(a <= b for a, b in zip(errors2, errors2[1:]))

    def test_zero_hat_gives_zero_error(self):
        (report,) = epsilon_sweep(BASE, "mu_hat", [0.0], Perturbation(epsilon=0.1))
        assert report.error_q1 == 0.0 and report.error_q2 == 0.0

    def test_unknown_hat_rejected(self):
        with pytest.raises(ValueError):
            epsilon_sweep(BASE, "gamma_hat", [1.0], Perturbation())


class TestMeasureAmplitude:
    def test_constant_trajectory(self):
        traj = synthetic_trajectory(60.0, 0.01, lambda t: np.full_like(t, 5.0), lambda t: np.full_like(t, 5.0))
        measured = measure_amplitude(traj, 0.5)
        assert measured.q1_amplitude == 0.0
        assert measured.q2_amplitude == 0.0
        assert measured.period_estimate is None

    def test_known_sine(self):
        period = 1.6
        traj = synthetic_trajectory(
            64.0,
            0.01,
            lambda t: 5.0 + 0.7 * np.sin(2 * np.pi * t / period),
            lambda t: 5.0 - 0.35 * np.sin(2 * np.pi * t / period),
        )
        measured = measure_amplitude(traj, 0.5)
        assert measured.q1_amplitude == pytest.approx(1.4, abs=1e-3)
        assert measured.q2_amplitude == pytest.approx(0.7, abs=1e-3)
        assert measured.period_estimate == pytest.approx(period, abs=0.02)
        assert measured.tail_start == pytest.approx(32.0)

    def test_monotone_tail_reports_zero(self):
        traj = synthetic_trajectory(
            60.0, 0.01, lambda t: 5.0 - 0.5 * np.exp(-0.01 * t), lambda t: 5.0 + 0.1 * t
        )
        measured = measure_amplitude(traj, 0.5)
        assert measured.q1_amplitude == 0.0
        assert measured.q2_amplitude == 0.0
        assert measured.period_estimate is None

    def test_bad_fraction_rejected(self):
        traj = synthetic_trajectory(10.0, 0.01, lambda t: t, lambda t: t)
        with pytest.raises(MeasurementError):
            measure_amplitude(traj, 1.5)

    def test_short_tail_rejected(self):
        period = 1.6
        traj = synthetic_trajectory(
            40.0,
            0.01,
            lambda t: 5.0 + np.sin(2 * np.pi * t / period),
            lambda t: 5.0 - np.sin(2 * np.pi * t / period),
        )
        # tail spans 4 time units: fewer than five 1.6-unit periods
        with pytest.raises(MeasurementError):
            measure_amplitude(traj, 0.9)

    def test_measured_limit_cycle(self):
        traj = integrate(BASE, NO_PERT, HistorySpec(4.99, 5.01), IntegrationConfig(0.4, 150.0))
        measured = measure_amplitude(traj, 0.8)
        assert 1.0 < measured.q1_amplitude < 1.4
        # near the bifurcation the cycle period is close to 2 pi / omega_cr
        assert measured.period_estimate == pytest.approx(2 * math.pi / 4.899, rel=0.15)


class TestClassifyStability:
    def test_subcritical_stable(self):
        result = classify_stability(BASE, NO_PERT, 0.25)
        assert result.classification is Stability.STABLE

    def test_supercritical_oscillating(self):
        result = classify_stability(BASE, NO_PERT, 0.4)
        assert result.classification is Stability.OSCILLATING
        assert result.late_amplitude > 1.0

    def test_zero_delay_stable(self):
        result = classify_stability(BASE, NO_PERT, 0.0, StabilitySettings(t_end=50.0))
        assert result.classification is Stability.STABLE

    def test_perturbed_sides_of_critical(self):
        pert = Perturbation(1.0, 1.0, 1.0, 1.0, 0.1)
        dmod = critical_delay_modified(BASE, pert).first_order
        below = classify_stability(BASE, pert, dmod - 0.05)
        above = classify_stability(BASE, pert, dmod + 0.05)
        assert below.classification is Stability.STABLE
        assert above.classification is Stability.OSCILLATING


class TestLocateHopf:
    def test_symmetric_location(self):
        report = locate_hopf_empirically(BASE, NO_PERT, (0.30, 0.42), tol=1e-3)
        assert abs(report.empirical_delta - 0.3617394710074713) < 5e-3
        assert 0.30 < report.empirical_delta < 0.42
        assert report.predicted.first_order == pytest.approx(0.3617394710074713)
        assert report.classification_margin == 0.02

    def test_tolerance_refines_bracket(self):
        coarse = locate_hopf_empirically(BASE, NO_PERT, (0.30, 0.42), tol=8e-3)
        fine = locate_hopf_empirically(BASE, NO_PERT, (0.30, 0.42), tol=1e-3)
        target = 0.3617394710074713
        assert abs(fine.empirical_delta - target) <= abs(coarse.empirical_delta - target) + 1e-9

    def test_invalid_bracket_rejected(self):
        with pytest.raises(BracketError):
            locate_hopf_empirically(BASE, NO_PERT, (0.10, 0.20))
        with pytest.raises(BracketError):
            locate_hopf_empirically(BASE, NO_PERT, (0.45, 0.60))

    def test_equilibrium_independent_of_delay(self):
        pert = Perturbation(lam_hat=1.0, epsilon=0.1)
        star = fixed_point_equilibrium(BASE, pert)
        for delta in (0.1, 0.25):
            traj = integrate(
                BASE,
                pert,
                HistorySpec(star.q1 - 0.01, star.q2 + 0.01),
                IntegrationConfig(delta, 100.0),
            )
            assert abs(traj.q1_samples[-1] - star.q1) < 1e-5
            assert abs(traj.q2_samples[-1] - star.q2) < 1e-5

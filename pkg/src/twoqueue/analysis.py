"""Bridges between the closed-form predictions and simulated trajectories.

Provides the exact equilibrium (Newton on the fixed-point equations),
tail-window amplitude and period measurement, a windowed decay/growth
stability classifier, and bisection on the delay to locate the empirical
Hopf point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .asymptotics import ModifiedCriticalDelay, approx_equilibrium, critical_delay_modified
from .engine import HistorySpec, IntegrationConfig, Trajectory, integrate
from .errors import BracketError, MeasurementError, ParameterError, SolverError
from .model import ModelParams, Perturbation, QueuePair, rhs

__all__ = [
    "EquilibriumReport",
    "AmplitudeMeasurement",
    "Stability",
    "StabilityResult",
    "StabilitySettings",
    "HopfReport",
    "fixed_point_equilibrium",
    "equilibrium_report",
    "epsilon_sweep",
    "measure_amplitude",
    "classify_stability",
    "locate_hopf_empirically",
]

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 100
FD_RELATIVE_STEP = 1e-7


@dataclass(frozen=True)
class EquilibriumReport:
    """First-order approximation vs. exact fixed point, with errors."""

    approx: QueuePair
    exact: QueuePair
    error_q1: float
    error_q2: float
    residual: float


@dataclass(frozen=True)
class AmplitudeMeasurement:
    """Peak-to-peak amplitudes and period estimated over a trajectory tail."""

    q1_amplitude: float
    q2_amplitude: float
    period_estimate: float | None
    tail_start: float


class Stability(enum.Enum):
    STABLE = "stable"
    OSCILLATING = "oscillating"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class StabilityResult:
    classification: Stability
    early_amplitude: float
    late_amplitude: float


@dataclass(frozen=True)
class StabilitySettings:
    """Simulation settings for the decay/growth classifier."""

    t_end: float = 200.0
    steps_per_delay: int = 200
    margin: float = 0.02
    history_offset: float = 0.01
    backend: str | None = None


@dataclass(frozen=True)
class HopfReport:
    """Predicted critical delays next to the bisection estimate."""

    predicted: ModifiedCriticalDelay
    empirical_delta: float
    classification_margin: float


def _rhs_at(params, pert, x):
    value = QueuePair(x[0], x[1])
    return np.array(rhs(params, pert, value, value))


def fixed_point_equilibrium(
    params: ModelParams,
    pert: Perturbation,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> QueuePair:
    """Exact equilibrium: the root of the rates with current = delayed state.

    Equilibria of the delay system do not depend on the delay, so this is a
    two-dimensional root-find. Newton iteration with a forward-difference
    Jacobian, started from the symmetric point (lam/(2mu), lam/(2mu)).
    """
    base = params.lam / (2.0 * params.mu)
    x = np.array([base, base])
    f = _rhs_at(params, pert, x)
    for _ in range(max_iter):
        if np.max(np.abs(f)) < tol:
            return QueuePair(float(x[0]), float(x[1]))
        jac = np.empty((2, 2))
        for j in range(2):
            step = FD_RELATIVE_STEP * max(1.0, abs(x[j]))
            xs = x.copy()
            xs[j] += step
            jac[:, j] = (_rhs_at(params, pert, xs) - f) / step
        x = x - np.linalg.solve(jac, f)
        f = _rhs_at(params, pert, x)
    raise SolverError(
        f"Newton did not reach residual {tol:g} in {max_iter} iterations",
        last_iterate=QueuePair(float(x[0]), float(x[1])),
    )


def equilibrium_report(params: ModelParams, pert: Perturbation) -> EquilibriumReport:
    """Compare the first-order equilibrium against the exact fixed point."""
    approx = approx_equilibrium(params, pert)
    exact = fixed_point_equilibrium(params, pert)
    residual = float(np.max(np.abs(_rhs_at(params, pert, (exact.q1, exact.q2)))))
    return EquilibriumReport(
        approx=approx,
        exact=exact,
        error_q1=abs(approx.q1 - exact.q1),
        error_q2=abs(approx.q2 - exact.q2),
        residual=residual,
    )


def epsilon_sweep(
    params: ModelParams,
    hat_name: str,
    hat_values,
    fixed_pert: Perturbation,
) -> list[EquilibriumReport]:
    """Equilibrium reports as one perturbation component sweeps over values.

    hat_name is one of lam_hat, mu_hat, theta_hat, alpha_hat; the other
    components (and epsilon) are taken from fixed_pert.
    """
    if hat_name not in ("lam_hat", "mu_hat", "theta_hat", "alpha_hat"):
        raise ParameterError(f"unknown perturbation component {hat_name!r}")
    return [
        equilibrium_report(params, replace(fixed_pert, **{hat_name: float(v)}))
        for v in hat_values
    ]


def _local_maxima(values: np.ndarray) -> np.ndarray:
    interior = (values[1:-1] > values[:-2]) & (values[1:-1] > values[2:])
    return np.nonzero(interior)[0] + 1


def measure_amplitude(traj: Trajectory, tail_fraction: float) -> AmplitudeMeasurement:
    """Peak-to-peak amplitudes over the trajectory tail, plus the period.

    The tail is [tail_fraction * t_end, t_end]. The period is the mean
    spacing of discrete local maxima of q1 in the tail. A non-oscillating
    tail (no interior maxima) reports zero amplitudes and no period; a tail
    shorter than five estimated periods raises MeasurementError.
    """
    if not (0.0 < tail_fraction < 1.0):
        raise MeasurementError(f"tail_fraction must be in (0, 1), got {tail_fraction}")
    t_end = traj.t_end
    tail_start = tail_fraction * t_end
    sel = traj.times >= tail_start
    if int(np.count_nonzero(sel)) < 8:
        raise MeasurementError("tail too short: fewer than 8 samples")
    q1 = traj.q1_samples[sel]
    q2 = traj.q2_samples[sel]

    peaks = _local_maxima(q1)
    if len(peaks) == 0:
        return AmplitudeMeasurement(0.0, 0.0, None, tail_start)

    period = None
    if len(peaks) >= 2:
        period = float(np.mean(np.diff(peaks))) * traj.step
        if t_end - tail_start < 5.0 * period:
            raise MeasurementError(
                f"tail spans {t_end - tail_start:g} < 5 periods ({period:g} each)"
            )
    return AmplitudeMeasurement(
        float(q1.max() - q1.min()),
        float(q2.max() - q2.min()),
        period,
        tail_start,
    )


def _window_p2p(times, values, t_lo, t_hi):
    sel = (times >= t_lo) & (times <= t_hi)
    window = values[sel]
    return float(window.max() - window.min())


def _ode_trajectory(params, pert, history, t_end, h):
    """RK4 for the zero-delay limit (delayed argument = current state)."""
    n = int(math.ceil(t_end / h))
    q1 = np.empty(n + 1)
    q2 = np.empty(n + 1)
    q1[0], q2[0] = history.q1_init, history.q2_init
    for k in range(n):
        y = QueuePair(q1[k], q2[k])
        k1 = rhs(params, pert, y, y)
        y2 = QueuePair(q1[k] + 0.5 * h * k1[0], q2[k] + 0.5 * h * k1[1])
        k2 = rhs(params, pert, y2, y2)
        y3 = QueuePair(q1[k] + 0.5 * h * k2[0], q2[k] + 0.5 * h * k2[1])
        k3 = rhs(params, pert, y3, y3)
        y4 = QueuePair(q1[k] + h * k3[0], q2[k] + h * k3[1])
        k4 = rhs(params, pert, y4, y4)
        q1[k + 1] = q1[k] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        q2[k + 1] = q2[k] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    times = np.arange(n + 1) * h
    return times, q1, q2


def classify_stability(
    params: ModelParams,
    pert: Perturbation,
    delta: float,
    settings: StabilitySettings | None = None,
) -> StabilityResult:
    """Decide whether the equilibrium attracts or a sustained cycle develops.

    Integrates from the equilibrium offset by -/+ history_offset and
    compares peak-to-peak amplitudes over the windows [0.6, 0.8]*t_end and
    [0.8, 1.0]*t_end (largest of the two queues). Decision rules, in order:

    * both windows below offset/10        -> settled, STABLE
    * late/early ratio below 1 - margin   -> decaying, STABLE
    * ratio above 1 + margin              -> growing, OSCILLATING
    * both windows above 5x the offset    -> saturated cycle, OSCILLATING
    * otherwise                           -> INCONCLUSIVE

    The saturated-cycle rule is needed because a limit cycle reached well
    before the measurement windows shows a ratio of ~1.
    """
    s = settings or StabilitySettings()
    star = fixed_point_equilibrium(params, pert)
    history = HistorySpec(star.q1 - s.history_offset, star.q2 + s.history_offset)
    if delta == 0.0:
        times, q1, q2 = _ode_trajectory(params, pert, history, s.t_end, h=0.01)
    else:
        traj = integrate(
            params,
            pert,
            history,
            IntegrationConfig(delta, s.t_end, s.steps_per_delay),
            backend=s.backend,
        )
        times, q1, q2 = traj.times, traj.q1_samples, traj.q2_samples

    early = max(
        _window_p2p(times, q1, 0.6 * s.t_end, 0.8 * s.t_end),
        _window_p2p(times, q2, 0.6 * s.t_end, 0.8 * s.t_end),
    )
    late = max(
        _window_p2p(times, q1, 0.8 * s.t_end, s.t_end),
        _window_p2p(times, q2, 0.8 * s.t_end, s.t_end),
    )

    scale = 2.0 * s.history_offset
    if early < scale / 10.0 and late < scale / 10.0:
        return StabilityResult(Stability.STABLE, early, late)
    ratio = late / early if early > 0 else math.inf
    if ratio < 1.0 - s.margin:
        return StabilityResult(Stability.STABLE, early, late)
    if ratio > 1.0 + s.margin:
        return StabilityResult(Stability.OSCILLATING, early, late)
    if early > 5.0 * scale and late > 5.0 * scale:
        return StabilityResult(Stability.OSCILLATING, early, late)
    return StabilityResult(Stability.INCONCLUSIVE, early, late)


def _classify_resolved(params, pert, delta, settings):
    """Classify, retrying once with a doubled horizon on an inconclusive call."""
    result = classify_stability(params, pert, delta, settings)
    if result.classification is Stability.INCONCLUSIVE:
        extended = replace(settings, t_end=2.0 * settings.t_end)
        result = classify_stability(params, pert, delta, extended)
    return result


def locate_hopf_empirically(
    params: ModelParams,
    pert: Perturbation,
    bracket: tuple[float, float],
    tol: float = 1e-3,
    settings: StabilitySettings | None = None,
) -> HopfReport:
    """Bisect on the delay for the stability change, next to the predictions.

    The lower bracket end must classify stable and the upper oscillating.
    A midpoint still inconclusive after the doubled-horizon retry counts as
    not-yet-oscillating, moving the bracket toward the oscillating side.
    """
    s = settings or StabilitySettings()
    lo, hi = bracket
    if not (0 < lo < hi):
        raise BracketError(f"need 0 < delta_lo < delta_hi, got ({lo}, {hi})")
    predicted = critical_delay_modified(params, pert)

    c_lo = _classify_resolved(params, pert, lo, s)
    if c_lo.classification is not Stability.STABLE:
        raise BracketError(
            f"lower bracket end {lo:g} classified {c_lo.classification.value}, expected stable"
        )
    c_hi = _classify_resolved(params, pert, hi, s)
    if c_hi.classification is not Stability.OSCILLATING:
        raise BracketError(
            f"upper bracket end {hi:g} classified {c_hi.classification.value}, expected oscillating"
        )

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        result = _classify_resolved(params, pert, mid, s)
        if result.classification is Stability.OSCILLATING:
            hi = mid
        else:
            lo = mid
    return HopfReport(predicted, 0.5 * (lo + hi), s.margin)

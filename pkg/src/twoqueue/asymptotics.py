"""Closed-form asymptotic predictions for the perturbed two-queue system.

Everything here is an explicit formula in the model parameters: the
first-order equilibrium shift, the critical delay of the symmetric system,
two variants of the perturbed critical delay (a first-order expansion and
a closed form in half-shifted parameters), the scalar characteristic-root
crossing they both reduce to, and the limit-cycle amplitude/frequency
approximation near the bifurcation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidRegimeError, NoBifurcationError, NoLimitCycleError
from .model import ModelParams, Perturbation, QueuePair, effective_params

__all__ = [
    "EquilibriumCoefficients",
    "CriticalDelay",
    "ModifiedCriticalDelay",
    "AmplitudePrediction",
    "equilibrium_coefficients",
    "approx_equilibrium",
    "critical_delay_symmetric",
    "critical_delay_modified",
    "characteristic_crossing",
    "lindstedt_amplitude",
]


@dataclass(frozen=True)
class EquilibriumCoefficients:
    """First-order equilibrium shifts per unit epsilon for each queue."""

    q1_shift: float
    q2_shift: float


@dataclass(frozen=True)
class CriticalDelay:
    """Delay and angular frequency at which the equilibrium loses stability."""

    delta: float
    omega: float


@dataclass(frozen=True)
class ModifiedCriticalDelay:
    """Perturbed critical delay in its two asymptotically equivalent forms.

    first_order        -- base critical delay plus the first-order shift
    closed_form        -- arccos form in the half-shifted parameters
    omega              -- crossing frequency of the closed form
    alpha_second_order -- second-order value including the preference-offset
                          contribution; only defined when the preference
                          offset is the sole perturbed parameter, else None
    """

    first_order: float
    closed_form: float
    omega: float
    alpha_second_order: float | None = None


@dataclass(frozen=True)
class AmplitudePrediction:
    """Limit-cycle amplitude and frequency prediction near the bifurcation.

    amplitude        -- predicted peak-to-peak oscillation width (customers)
    omega_correction -- first-order frequency correction per unit epsilon;
                        None for the unperturbed system (epsilon = 0)
    frequency        -- predicted angular frequency of the cycle
    """

    amplitude: float
    omega_correction: float | None
    frequency: float


def equilibrium_coefficients(params: ModelParams, pert: Perturbation) -> EquilibriumCoefficients:
    """First-order (in epsilon) equilibrium shifts (a, b) for the two queues.

    a = (lt+4m)/(4m(lt+2m))*lam_hat - l(lt+4m)/(4m^2(lt+2m))*mu_hat
        - l^2/(4m(lt+2m))*theta_hat + l/(2(lt+2m))*alpha_hat
    b = lt/(4m(lt+2m))*lam_hat - l^2 t/(4m^2(lt+2m))*mu_hat
        + l^2/(4m(lt+2m))*theta_hat - l/(2(lt+2m))*alpha_hat

    with l = lam, m = mu, t = theta, lt = lam*theta.
    """
    lam, mu, theta = params.lam, params.mu, params.theta
    lt = lam * theta
    denom = lt + 2.0 * mu
    a = (
        (lt + 4.0 * mu) / (4.0 * mu * denom) * pert.lam_hat
        - lam * (lt + 4.0 * mu) / (4.0 * mu * mu * denom) * pert.mu_hat
        - lam * lam / (4.0 * mu * denom) * pert.theta_hat
        + lam / (2.0 * denom) * pert.alpha_hat
    )
    b = (
        lt / (4.0 * mu * denom) * pert.lam_hat
        - lam * lam * theta / (4.0 * mu * mu * denom) * pert.mu_hat
        + lam * lam / (4.0 * mu * denom) * pert.theta_hat
        - lam / (2.0 * denom) * pert.alpha_hat
    )
    return EquilibriumCoefficients(a, b)


def approx_equilibrium(params: ModelParams, pert: Perturbation) -> QueuePair:
    """First-order equilibrium (lam/(2 mu) + a*eps, lam/(2 mu) + b*eps)."""
    coeffs = equilibrium_coefficients(params, pert)
    base = params.lam / (2.0 * params.mu)
    return QueuePair(
        base + coeffs.q1_shift * pert.epsilon,
        base + coeffs.q2_shift * pert.epsilon,
    )


def characteristic_crossing(effective_gain: float, mu: float) -> CriticalDelay:
    """Imaginary-axis crossing of r + C e^{-r delta} + mu = 0.

    For gain C > mu the root pair crosses at omega = sqrt(C^2 - mu^2) and
    delta = arccos(-mu/C) / omega. Both perturbed-critical-delay variants
    reduce to this scalar crossing.
    """
    c = effective_gain
    if not (c > mu):
        raise NoBifurcationError(
            f"no crossing: effective gain {c:g} must exceed the decay rate {mu:g}"
        )
    omega = math.sqrt(c * c - mu * mu)
    delta = math.acos(-mu / c) / omega
    return CriticalDelay(delta, omega)


def critical_delay_symmetric(params: ModelParams) -> CriticalDelay:
    """Critical delay of the symmetric system.

    Requires lam*theta > 2*mu; below that the equilibrium is stable for
    every delay (at this order) and NoBifurcationError is raised.
    omega = sqrt(lam^2 theta^2 - 4 mu^2)/2, delta = arccos(-2mu/(lam theta))/omega.
    """
    lam, mu, theta = params.lam, params.mu, params.theta
    if not (lam * theta > 2.0 * mu):
        raise NoBifurcationError(
            f"stable for all delays: need lam*theta > 2*mu, got {lam * theta:g} <= {2 * mu:g}"
        )
    return characteristic_crossing(lam * theta / 2.0, mu)


def _barred(params: ModelParams, pert: Perturbation) -> tuple[float, float, float]:
    """Half-shifted parameters entering the closed-form expressions."""
    e2 = pert.epsilon / 2.0
    return (
        params.lam + e2 * pert.lam_hat,
        params.mu + e2 * pert.mu_hat,
        params.theta + e2 * pert.theta_hat,
    )


def critical_delay_modified(params: ModelParams, pert: Perturbation) -> ModifiedCriticalDelay:
    """Perturbed critical delay, first-order and closed-form variants.

    First order:
        delta_cr - eps*( (mu + d(mu^2+w^2))/(2 lam w^2) * lam_hat
                        - (1 + mu d)/(2 w^2)            * mu_hat
                        + (mu + d(mu^2+w^2))/(2 th w^2) * theta_hat )
    with d = delta_cr, w = omega_cr. Closed form: the symmetric formula
    evaluated at the half-shifted parameters. When only the preference
    offset is perturbed, the second-order value
        delta_cr + (4mu^3 + mu^2 lam^2 th^2 d)/(4 w^2 (lam th + 2mu)^2)
                   * eps^2 * alpha_hat^2
    is attached as alpha_second_order.
    """
    lam, mu, theta = params.lam, params.mu, params.theta
    base = critical_delay_symmetric(params)
    lam_p, mu_p, theta_p, _ = effective_params(params, pert)
    if not (lam_p * theta_p > 2.0 * mu_p):
        raise NoBifurcationError(
            "perturbed system is stable for all delays: "
            f"need perturbed lam*theta > 2*mu, got {lam_p * theta_p:g} <= {2 * mu_p:g}"
        )

    d0, w0 = base.delta, base.omega
    w2 = w0 * w0
    shift = (
        (mu + d0 * (mu * mu + w2)) / (2.0 * lam * w2) * pert.lam_hat
        - (1.0 + mu * d0) / (2.0 * w2) * pert.mu_hat
        + (mu + d0 * (mu * mu + w2)) / (2.0 * theta * w2) * pert.theta_hat
    )
    first_order = d0 - pert.epsilon * shift

    lam_b, mu_b, theta_b = _barred(params, pert)
    closed = characteristic_crossing(lam_b * theta_b / 2.0, mu_b)

    alpha_second = None
    if pert.lam_hat == 0.0 and pert.mu_hat == 0.0 and pert.theta_hat == 0.0:
        coeff = (4.0 * mu**3 + mu * mu * lam * lam * theta * theta * d0) / (
            4.0 * w2 * (lam * theta + 2.0 * mu) ** 2
        )
        alpha_second = d0 + coeff * pert.epsilon**2 * pert.alpha_hat**2

    return ModifiedCriticalDelay(first_order, closed.delta, closed.omega, alpha_second)


def lindstedt_amplitude(params: ModelParams, pert: Perturbation, delta: float) -> AmplitudePrediction:
    """Limit-cycle amplitude and frequency prediction at the given delay.

    The amplitude is sqrt(delta - delta_mod) times a parameter-dependent
    coefficient; delta_mod here is the closed-form variant, whose
    half-shifted parameters also appear throughout the coefficient. Raises
    NoLimitCycleError below delta_mod and InvalidRegimeError if the
    coefficient's denominator is not positive.
    """
    lam, theta = params.lam, params.theta
    critical_delay_symmetric(params)  # regime check on the base parameters
    lam_b, mu_b, theta_b = _barred(params, pert)
    crossing = characteristic_crossing(lam_b * theta_b / 2.0, mu_b)
    d0, w0 = crossing.delta, crossing.omega

    if delta < d0:
        raise NoLimitCycleError(
            f"no limit cycle: delta {delta:g} is below the critical delay {d0:.6g}"
        )

    gain2 = lam_b * lam_b * theta_b * theta_b - 4.0 * mu_b * mu_b
    lt_b = lam_b * theta_b
    acos_term = math.acos(-2.0 * mu_b / lt_b)
    denom = (
        2.0 * lam_b * lam_b * mu_b * theta * theta * theta_b * theta_b
        - 8.0 * mu_b**3 * theta * theta
        + (
            lam * theta * theta * lt_b
            + 4.0 * lam * theta * theta / lt_b * mu_b * mu_b * (theta - 1.0)
        )
        * math.sqrt(gain2)
        * acos_term
    )
    if not (denom > 0.0):
        raise InvalidRegimeError(
            f"amplitude formula invalid here: non-positive denominator {denom:g}"
        )
    coefficient = math.sqrt(8.0 * gain2 * gain2 / denom)
    amplitude = math.sqrt(delta - d0) * coefficient

    # frequency correction: eps*omega_1 stays finite as eps -> 0 because
    # the amplitude and detuning scalings carry the eps factors
    phase = w0 * d0
    total_correction = -(
        w0 * (delta - d0) + amplitude * amplitude * theta * theta * math.cos(phase) / (16.0 * math.sin(phase))
    ) / d0
    omega_correction = total_correction / pert.epsilon if pert.epsilon > 0 else None
    return AmplitudePrediction(amplitude, omega_correction, w0 + total_correction)

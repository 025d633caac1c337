"""Core model definitions for the asymmetric two-queue fluid system.

Two parallel infinite-server queues share a stream of arriving customers.
Each arrival joins queue i with a multinomial-logit probability computed
from the queue lengths observed a fixed lag ago, so the state evolves as a
pair of delay differential equations:

    dq1/dt = (lam + eps*lam_hat) * p1(q(t - delay)) - (mu + eps*mu_hat) * q1(t)
    dq2/dt =  lam                * p2(q(t - delay)) -  mu               * q2(t)

where p1 uses sensitivity theta + eps*theta_hat and preference
alpha + eps*alpha_hat, while p2 uses the unperturbed theta and alpha.
Only the first queue's parameters are perturbed; eps = 0 recovers the
symmetric system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ParameterError

__all__ = [
    "ModelParams",
    "Perturbation",
    "QueuePair",
    "effective_params",
    "choice_probabilities",
    "rhs",
]


@dataclass(frozen=True)
class ModelParams:
    """Symmetric base parameters.

    lam   -- arrival rate (customers/time, > 0)
    mu    -- service rate (1/time, > 0)
    theta -- customer sensitivity to queue length (1/customer, >= 0)
    alpha -- preference offset (dimensionless); common to both queues, so
             it cancels in the choice probabilities unless perturbed
    """

    lam: float
    mu: float
    theta: float
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("lam", "mu", "theta", "alpha"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.lam <= 0:
            raise ParameterError(f"arrival rate lam must be > 0, got {self.lam}")
        if self.mu <= 0:
            raise ParameterError(f"service rate mu must be > 0, got {self.mu}")
        if self.theta < 0:
            raise ParameterError(f"sensitivity theta must be >= 0, got {self.theta}")


@dataclass(frozen=True)
class Perturbation:
    """First-queue parameter offsets, scaled by epsilon.

    The default instance (all zeros) leaves the system symmetric.
    Admissibility of the combined parameters is checked jointly with a
    ModelParams via effective_params().
    """

    lam_hat: float = 0.0
    mu_hat: float = 0.0
    theta_hat: float = 0.0
    alpha_hat: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        for name in ("lam_hat", "mu_hat", "theta_hat", "alpha_hat", "epsilon"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.epsilon < 0:
            raise ParameterError(f"epsilon must be >= 0, got {self.epsilon}")


@dataclass(frozen=True)
class QueuePair:
    """Fluid queue lengths (q1, q2).

    Values are real-valued fluid quantities; transiently negative values
    are admissible and deliberately not clamped.
    """

    q1: float
    q2: float

    def __post_init__(self):
        if not (math.isfinite(self.q1) and math.isfinite(self.q2)):
            raise DomainError(f"queue lengths must be finite, got ({self.q1}, {self.q2})")


def effective_params(params: ModelParams, pert: Perturbation) -> tuple[float, float, float, float]:
    """Perturbed first-queue parameters (lam', mu', theta', alpha').

    Raises ParameterError if the perturbed values leave the admissible
    region (lam' > 0, mu' > 0, theta' >= 0).
    """
    eps = pert.epsilon
    lam_p = params.lam + eps * pert.lam_hat
    mu_p = params.mu + eps * pert.mu_hat
    theta_p = params.theta + eps * pert.theta_hat
    alpha_p = params.alpha + eps * pert.alpha_hat
    if lam_p <= 0:
        raise ParameterError(f"perturbed arrival rate must stay > 0, got {lam_p}")
    if mu_p <= 0:
        raise ParameterError(f"perturbed service rate must stay > 0, got {mu_p}")
    if theta_p < 0:
        raise ParameterError(f"perturbed sensitivity must stay >= 0, got {theta_p}")
    return lam_p, mu_p, theta_p, alpha_p


def choice_probabilities(
    params: ModelParams, pert: Perturbation, delayed: QueuePair
) -> tuple[float, float]:
    """Logit join probabilities given the delayed queue lengths.

    The exponents are shifted by their maximum before exponentiating, so
    large |theta * q| cannot overflow; p1 + p2 == 1 up to rounding.
    """
    _, _, theta_p, alpha_p = effective_params(params, pert)
    e1 = alpha_p - theta_p * delayed.q1
    e2 = params.alpha - params.theta * delayed.q2
    m = e1 if e1 > e2 else e2
    w1 = math.exp(e1 - m)
    w2 = math.exp(e2 - m)
    s = w1 + w2
    return w1 / s, w2 / s


def rhs(
    params: ModelParams, pert: Perturbation, current: QueuePair, delayed: QueuePair
) -> tuple[float, float]:
    """Instantaneous queue-length rates (dq1/dt, dq2/dt)."""
    lam_p, mu_p, _theta_p, _alpha_p = effective_params(params, pert)
    p1, p2 = choice_probabilities(params, pert, delayed)
    dq1 = lam_p * p1 - mu_p * current.q1
    dq2 = params.lam * p2 - params.mu * current.q2
    return dq1, dq2

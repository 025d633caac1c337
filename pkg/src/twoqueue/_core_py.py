"""Pure-Python stepping kernel; fallback when the compiled core is absent.

This mirrors twoqueue._core operation-for-operation (same expressions in
the same order), so both backends produce bit-identical trajectories.
Any change here must be applied to _core.pyx as well.
"""

import math

import numpy as np

BACKEND = "python"


def rk4_delay_path(
    lam,
    mu,
    theta,
    alpha,
    lam_hat,
    mu_hat,
    theta_hat,
    alpha_hat,
    epsilon,
    q1_init,
    q2_init,
    h,
    n_delay,
    n_steps,
    guard,
):
    """March the two-queue system n_steps classic RK4 steps of size h.

    The delay equals n_delay * h, so every stage's delayed argument lies on
    a stored grid node or exactly halfway between two; halfway values come
    from cubic Hermite interpolation using the stored node derivatives.
    The constant initial history (q1_init, q2_init) supplies values for
    t <= 0.

    Returns (q1, q2, n_good): float64 arrays over the grid 0..n_steps*h and
    the index of the last valid state. n_good == n_steps means success; a
    smaller value means the state left [-guard, guard] (or went non-finite)
    on the following step.
    """
    exp = math.exp
    lam_p = lam + epsilon * lam_hat
    mu_p = mu + epsilon * mu_hat
    theta_p = theta + epsilon * theta_hat
    alpha_p = alpha + epsilon * alpha_hat
    h6 = h / 6.0

    q1 = [0.0] * (n_steps + 1)
    q2 = [0.0] * (n_steps + 1)
    d1 = [0.0] * (n_steps + 1)
    d2 = [0.0] * (n_steps + 1)
    q1[0] = q1_init
    q2[0] = q2_init

    for k in range(n_steps):
        i = k - n_delay
        j = i + 1
        if i < 0:
            za1 = q1_init
            za2 = q2_init
        else:
            za1 = q1[i]
            za2 = q2[i]
        if j < 0:
            zb1 = q1_init
            zb2 = q2_init
        else:
            zb1 = q1[j]
            zb2 = q2[j]

        y1 = q1[k]
        y2 = q2[k]

        # stage 1; the slope here is also the stored node derivative
        e1 = alpha_p - theta_p * za1
        e2 = alpha - theta * za2
        m = e1 if e1 > e2 else e2
        w1 = exp(e1 - m)
        w2 = exp(e2 - m)
        s = w1 + w2
        p1a = w1 / s
        p2a = w2 / s
        k1a = lam_p * p1a - mu_p * y1
        k1b = lam * p2a - mu * y2
        d1[k] = k1a
        d2[k] = k1b

        # delayed value at the stage-2/3 midpoint
        if i < 0:
            zm1 = q1_init
            zm2 = q2_init
        else:
            zm1 = 0.5 * (q1[i] + q1[j]) + 0.125 * h * (d1[i] - d1[j])
            zm2 = 0.5 * (q2[i] + q2[j]) + 0.125 * h * (d2[i] - d2[j])

        # the choice probabilities depend only on the delayed argument, so
        # stages 2 and 3 share one logit evaluation
        e1 = alpha_p - theta_p * zm1
        e2 = alpha - theta * zm2
        m = e1 if e1 > e2 else e2
        w1 = exp(e1 - m)
        w2 = exp(e2 - m)
        s = w1 + w2
        p1m = w1 / s
        p2m = w2 / s
        k2a = lam_p * p1m - mu_p * (y1 + 0.5 * h * k1a)
        k2b = lam * p2m - mu * (y2 + 0.5 * h * k1b)
        k3a = lam_p * p1m - mu_p * (y1 + 0.5 * h * k2a)
        k3b = lam * p2m - mu * (y2 + 0.5 * h * k2b)

        e1 = alpha_p - theta_p * zb1
        e2 = alpha - theta * zb2
        m = e1 if e1 > e2 else e2
        w1 = exp(e1 - m)
        w2 = exp(e2 - m)
        s = w1 + w2
        p1b = w1 / s
        p2b = w2 / s
        k4a = lam_p * p1b - mu_p * (y1 + h * k3a)
        k4b = lam * p2b - mu * (y2 + h * k3b)

        v1 = y1 + h6 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        v2 = y2 + h6 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        # abs(nan) <= guard is False, so this also catches non-finite states
        if not (abs(v1) <= guard and abs(v2) <= guard):
            return np.array(q1[: k + 1]), np.array(q2[: k + 1]), k
        q1[k + 1] = v1
        q2[k + 1] = v2

    return np.array(q1), np.array(q2), n_steps

# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: initializedcheck=False
# cython: cdivision=True
"""Compiled stepping kernel for the two-queue delay system.

Same contract and operation order as _core_py.rk4_delay_path; built with
-ffp-contract=off so results are bit-identical to the fallback.
"""

from libc.math cimport exp, fabs

import numpy as np

BACKEND = "compiled"


def rk4_delay_path(
    double lam,
    double mu,
    double theta,
    double alpha,
    double lam_hat,
    double mu_hat,
    double theta_hat,
    double alpha_hat,
    double epsilon,
    double q1_init,
    double q2_init,
    double h,
    long n_delay,
    long n_steps,
    double guard,
):
    """See _core_py.rk4_delay_path; identical semantics, compiled."""
    cdef double lam_p = lam + epsilon * lam_hat
    cdef double mu_p = mu + epsilon * mu_hat
    cdef double theta_p = theta + epsilon * theta_hat
    cdef double alpha_p = alpha + epsilon * alpha_hat
    cdef double h6 = h / 6.0

    q1_arr = np.zeros(n_steps + 1)
    q2_arr = np.zeros(n_steps + 1)
    d1_arr = np.zeros(n_steps + 1)
    d2_arr = np.zeros(n_steps + 1)
    cdef double[::1] q1 = q1_arr
    cdef double[::1] q2 = q2_arr
    cdef double[::1] d1 = d1_arr
    cdef double[::1] d2 = d2_arr
    q1[0] = q1_init
    q2[0] = q2_init

    cdef long k, i, j
    cdef double za1, za2, zb1, zb2, zm1, zm2
    cdef double y1, y2, e1, e2, m, w1, w2, s
    cdef double p1a, p2a, p1m, p2m, p1b, p2b
    cdef double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b, v1, v2

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

        if i < 0:
            zm1 = q1_init
            zm2 = q2_init
        else:
            zm1 = 0.5 * (q1[i] + q1[j]) + 0.125 * h * (d1[i] - d1[j])
            zm2 = 0.5 * (q2[i] + q2[j]) + 0.125 * h * (d2[i] - d2[j])

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
        if not (fabs(v1) <= guard and fabs(v2) <= guard):
            return q1_arr[: k + 1], q2_arr[: k + 1], k
        q1[k + 1] = v1
        q2[k + 1] = v2

    return q1_arr, q2_arr, n_steps

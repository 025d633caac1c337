"""Cross-checks between the compiled kernel and the pure-Python fallback."""

import numpy as np
import pytest

from twoqueue import (
    HistorySpec,
    IntegrationConfig,
    ModelParams,
    Perturbation,
    available_backends,
    default_backend,
    integrate,
)

BASE = ModelParams(lam=10.0, mu=1.0, theta=1.0, alpha=0.0)

needs_both = pytest.mark.skipif(
    "compiled" not in available_backends(), reason="compiled core not built"
)


def test_python_backend_always_available():
    assert "python" in available_backends()
    assert default_backend() in available_backends()


@needs_both
@pytest.mark.parametrize(
    "pert, delta, t_end",
    [
        (Perturbation(), 0.4, 40.0),
        (Perturbation(1.0, 1.0, 1.0, 1.0, 0.1), 0.39, 40.0),
        (Perturbation(mu_hat=0.3, epsilon=0.05), 0.25, 30.0),
    ],
)
def test_backends_bit_identical(pert, delta, t_end):
    history = HistorySpec(4.99, 5.01)
    config = IntegrationConfig(delta, t_end, 200)
    compiled = integrate(BASE, pert, history, config, backend="compiled")
    python = integrate(BASE, pert, history, config, backend="python")
    assert np.array_equal(compiled.q1_samples, python.q1_samples)
    assert np.array_equal(compiled.q2_samples, python.q2_samples)
    assert np.array_equal(compiled.times, python.times)

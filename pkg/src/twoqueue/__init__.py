"""Asymmetric two-queue fluid model with delayed-information customer choice.

Simulation (fixed-step RK4 by the method of steps, compiled kernel with a
pure-Python fallback), closed-form asymptotics (equilibrium shifts,
critical delays, limit-cycle amplitude), and analysis utilities (exact
equilibrium, amplitude measurement, empirical Hopf location).
"""

from .analysis import (
    AmplitudeMeasurement,
    EquilibriumReport,
    HopfReport,
    Stability,
    StabilityResult,
    StabilitySettings,
    classify_stability,
    epsilon_sweep,
    equilibrium_report,
    fixed_point_equilibrium,
    locate_hopf_empirically,
    measure_amplitude,
)
from .asymptotics import (
    AmplitudePrediction,
    CriticalDelay,
    EquilibriumCoefficients,
    ModifiedCriticalDelay,
    approx_equilibrium,
    characteristic_crossing,
    critical_delay_modified,
    critical_delay_symmetric,
    equilibrium_coefficients,
    lindstedt_amplitude,
)
from .engine import (
    HistorySpec,
    IntegrationConfig,
    Trajectory,
    available_backends,
    convergence_order,
    default_backend,
    integrate,
    trajectory_csv,
)
from .errors import (
    BracketError,
    ConfigError,
    DomainError,
    IntegrationDivergedError,
    InvalidRegimeError,
    MeasurementError,
    NoBifurcationError,
    NoLimitCycleError,
    NumericalError,
    ParameterError,
    RegimeError,
    SolverError,
    TwoQueueError,
)
from .model import (
    ModelParams,
    Perturbation,
    QueuePair,
    choice_probabilities,
    effective_params,
    rhs,
)

__version__ = "0.1.0"

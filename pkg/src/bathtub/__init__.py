"""Spectral toolkit for the one-dimensional bathtub oscillator.

Exact eigenvalues from the angle-function quantization condition, the
leading-order action quantization with its oscillatory correction series,
an independent finite-difference oracle, smoothed counting sums against
periodic-orbit amplitudes, and the small-time heat-trace analysis.
"""

from .errors import (
    BathtubError,
    ConfigError,
    ConvergenceError,
    CoverageError,
    DomainError,
    IsolationError,
)
from .heat import (
    exact_heat_trace,
    extract_log_coefficient,
    predicted_log_coefficient,
    reference_trace,
)
from .model import (
    ModelParams,
    PeriodicOrbit,
    action_S,
    action_inverse,
    orbit_catalog,
    period_T,
    potential,
)
from .oracle import GridSpec, build_operator, lowest_eigenvalues, oracle_eigenvalues, sturm_count
from .quantization import (
    CorrectionTerm,
    EigenRecord,
    IndexTriple,
    TrigPoly2,
    bohr_sommerfeld,
    correction_polynomials,
    correction_series,
    delta_exact,
    eigen_records,
    eigenvalue_exact,
    eigenvalues_exact,
    index_set_generate,
    phase_Phi,
)
from .special import (
    AngleValue,
    cap_F,
    cap_F_asymptotic,
    cap_F_log_derivative,
    digamma,
    log_gamma,
    r_series,
    theta_tilde,
)
from .traces import (
    BumpSpec,
    CountingResult,
    TestPair,
    counting_sum,
    default_chi,
    isolation_half_width,
    prediction_reflected,
    prediction_transmitted,
    scaling_exponent,
)

__version__ = "1.0.0"

"""Self-homodyne statistics of an accelerated time delay or mirror acting on
the Minkowski vacuum, with band-limited detector corrections and an
independent Gaussian covariance-matrix oracle."""
from .errors import (
    DomainError,
    NonConvergenceError,
    RindlerHomodyneError,
    UnsupportedScenarioError,
    ValidityWindowError,
)
from .homodyne import (
    DisplacementConfig,
    HomodyneResult,
    purification_equal_amplitude,
    purification_ratio,
    quadrature_amplitude_ideal,
    variance_ideal,
    variance_single_frequency,
    variance_vacuum,
)
from .modes import (
    AccelerationFrame,
    DetectorBand,
    WavepacketMode,
    band_overlap,
    normalize_wavepacket,
    squeeze_param_r,
    unruh_coefficient_A,
)
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec
from .practical import (
    PracticalResult,
    guard_conditions,
    particle_count_practical,
    quadrature_amplitude_practical,
    variance_practical,
)
from .scenarios import Identity, Mirror, TimeDelay, correlation_kernel, squeeze_decomposition

__all__ = [
    "AccelerationFrame", "DEFAULT_QUADRATURE", "DetectorBand", "DisplacementConfig", "DomainError",
    "HomodyneResult", "Identity", "Mirror", "NonConvergenceError", "PracticalResult",
    "QuadratureSpec", "RindlerHomodyneError", "TimeDelay", "UnsupportedScenarioError",
    "ValidityWindowError", "WavepacketMode", "band_overlap", "correlation_kernel",
    "guard_conditions", "normalize_wavepacket", "particle_count_practical",
    "purification_equal_amplitude", "purification_ratio", "quadrature_amplitude_ideal",
    "quadrature_amplitude_practical", "squeeze_decomposition", "squeeze_param_r",
    "unruh_coefficient_A", "variance_ideal", "variance_practical", "variance_single_frequency",
    "variance_vacuum",
]

"""Self-similarly corrected Padé extrapolation of truncated power series."""

from .series import PowerSeries
from .pade import INFINITE, PadeApproximant, pade_eval, pade_fit, pade_limit
from .selfsim import build_factor_approximant, build_iterated_root, root_amplitude
from .corpus import Problem, control_for, generate_coefficients, get_problem, registry
from .scheme import (
    AmplitudeSequence,
    corrected_amplitudes,
    error_table,
    hard_sphere_eos,
    membrane_pressure,
    standard_amplitudes,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeSequence", "INFINITE", "PadeApproximant", "PowerSeries", "Problem",
    "build_factor_approximant", "build_iterated_root", "control_for", "corrected_amplitudes",
    "error_table", "generate_coefficients", "get_problem", "hard_sphere_eos", "membrane_pressure",
    "pade_eval", "pade_fit", "pade_limit", "registry", "root_amplitude", "standard_amplitudes",
]

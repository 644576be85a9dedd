"""Spectral solver for 1-D heat conduction via variational potentials.

Solves classical Fourier and finite-propagation-speed (telegrapher-type)
heat conduction by decomposing the initial temperature into spatial
Fourier modes, evolving each mode's variational potential in closed
form, and reconstructing real-space snapshots.  A finite-difference
reference solver validates the spectral pipeline.
"""

from ._kernels import BACKEND_NAME, available_backends
from .errors import (ConfigError, DegenerateRatesError, FrontDetectionError,
                     GridMismatchError, ParameterError, RegimeError, StabilityError,
                     StepError, SymmetryError, VheatError, ZeroModeError)
from .fd_oracle import OracleConfig, cfl_limit, default_oracle_config, fd_solve, wavefront_speed
from .model import (MaterialParams, ModeParams, classify_regime, derive_mode_params,
                    diffusive_rate)
from .mode_solver import (LagrangianDensity, ModeInitialData, ModeSolution,
                          PotentialInitialState, coefficients_closed_form,
                          coefficients_from_linear_system, el_residual, evaluate_potential,
                          lagrangian_density, mode_temperature, mode_temperature_rate,
                          potential_initial_conditions, potential_to_observable)
from .profile import PiecewiseProfile, Segment, SpectralAmplitude
from .spectral_field import (FieldSnapshot, SpectralGrid, build_grid, l2_difference,
                             solve_field, spatial_mean, truncated_profile_field)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME", "available_backends", "__version__",
    "VheatError", "ParameterError", "RegimeError", "ZeroModeError", "DegenerateRatesError",
    "StepError", "StabilityError", "SymmetryError", "GridMismatchError",
    "FrontDetectionError", "ConfigError",
    "MaterialParams", "ModeParams", "classify_regime", "derive_mode_params", "diffusive_rate",
    "PiecewiseProfile", "Segment", "SpectralAmplitude",
    "ModeInitialData", "PotentialInitialState", "ModeSolution", "LagrangianDensity",
    "potential_initial_conditions", "coefficients_closed_form",
    "coefficients_from_linear_system", "evaluate_potential", "potential_to_observable",
    "mode_temperature", "mode_temperature_rate", "lagrangian_density", "el_residual",
    "SpectralGrid", "FieldSnapshot", "build_grid", "solve_field", "spatial_mean",
    "l2_difference", "truncated_profile_field",
    "OracleConfig", "default_oracle_config", "cfl_limit", "fd_solve", "wavefront_speed",
]

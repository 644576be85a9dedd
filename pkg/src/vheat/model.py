"""Material constants and per-wavenumber oscillator parameters.

The half-Fourier transform turns the telegrapher-type heat equation

    tau * T_tt + rho * c_v * T_t - conductivity * T_xx = 0

into an independent damped oscillator for every wavenumber k:

    T_tt + 2*lam * T_t + omega_sq * T = 0

with ``2*lam = rho*c_v/tau`` and ``omega_sq = (conductivity/tau) * k**2``.
This module derives those per-mode parameters and classifies the damping
regime that decides which closed form downstream code may use.

Unit note: the relaxation parameter ``tau`` is treated as a time in
seconds so that ``rho*c_v/tau`` is a rate.  Positions live on a domain
normalized to length ``domain_length`` (default 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ParameterError

# Damping regime tags.
OVERDAMPED = "overdamped"
NEAR_CRITICAL = "near_critical"
UNDERDAMPED = "underdamped"
ZERO_MODE = "zero_mode"

#: Default relative half-width of the near-critical band: a mode is
#: near-critical when |omega_sq - lam**2| <= eps_c * lam**2, i.e. when
#: |gamma|**2 / lam**2 <= eps_c.  Inside that band the generic closed
#: forms divide by quantities that cancel catastrophically.
DEFAULT_CRITICAL_BAND = 1e-8


@dataclass(frozen=True)
class MaterialParams:
    """Physical constants of the conducting medium.

    Attributes
    ----------
    rho : float
        Mass density [kg/m^3].
    c_v : float
        Specific heat [J/(kg K)].
    conductivity : float
        Heat conductivity [W/(m K)].
    tau : float
        Relaxation parameter [s].  Small tau approaches classical
        diffusive conduction; large tau gives wave-like propagation.
    domain_length : float
        Spatial period of the model domain (dimensionless units).
    """

    rho: float
    c_v: float
    conductivity: float
    tau: float
    domain_length: float = 1.0

    def __post_init__(self):
        for name in ("rho", "c_v", "conductivity", "tau", "domain_length"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ParameterError(f"material parameter {name} must be finite and > 0, got {value!r}")

    @property
    def damping(self) -> float:
        """Per-mode damping rate lam = rho*c_v/(2*tau) [1/s]."""
        return self.rho * self.c_v / (2.0 * self.tau)

    @property
    def diffusivity(self) -> float:
        """Thermal diffusivity alpha = conductivity/(rho*c_v)."""
        return self.conductivity / (self.rho * self.c_v)

    @property
    def wave_speed(self) -> float:
        """Finite propagation speed sqrt(conductivity/tau) of the telegrapher form."""
        return math.sqrt(self.conductivity / self.tau)


@dataclass(frozen=True)
class ModeParams:
    """Oscillator parameters of one spectral mode.

    ``gamma = sqrt(lam**2 - omega_sq)`` is kept as a complex number so the
    overdamped (gamma real) and underdamped (gamma imaginary) regimes share
    one code path; the regime tag only gates the near-critical and k = 0
    special cases.
    """

    k: float
    lam: float
    omega_sq: float
    gamma: complex
    regime: str

    @property
    def fast_rate(self) -> complex:
        """Decay rate lam + gamma of the fast branch."""
        return self.lam + self.gamma

    @property
    def slow_rate(self) -> complex:
        """Decay rate lam - gamma of the slow branch.

        Evaluated as omega_sq/(lam + gamma), which is algebraically equal
        but avoids the cancellation that makes the literal subtraction
        lose digits when omega << lam (the deep Fourier limit).
        """
        if self.omega_sq == 0.0:
            return 0.0 + 0.0j
        return self.omega_sq / (self.lam + self.gamma)


def classify_regime(lam: float, omega_sq: float, eps_c: float = DEFAULT_CRITICAL_BAND) -> str:
    """Classify the damping regime of a mode.

    Parameters
    ----------
    lam : float
        Damping rate, > 0.
    omega_sq : float
        Squared oscillator frequency, >= 0.  Zero only for the k = 0 mode.
    eps_c : float
        Relative width of the near-critical band, 0 < eps_c < 1.
    """
    if not (math.isfinite(lam) and lam > 0):
        raise ParameterError(f"lam must be finite and > 0, got {lam!r}")
    if not (math.isfinite(omega_sq) and omega_sq >= 0):
        raise ParameterError(f"omega_sq must be finite and >= 0, got {omega_sq!r}")
    if not (0.0 < eps_c < 1.0):
        raise ParameterError(f"eps_c must lie in (0, 1), got {eps_c!r}")
    if omega_sq == 0.0:
        return ZERO_MODE
    lam_sq = lam * lam
    if omega_sq < lam_sq * (1.0 - eps_c):
        return OVERDAMPED
    if omega_sq > lam_sq * (1.0 + eps_c):
        return UNDERDAMPED
    return NEAR_CRITICAL


def derive_mode_params(material: MaterialParams, k: float,
                       eps_c: float = DEFAULT_CRITICAL_BAND) -> ModeParams:
    """Derive the oscillator parameters of the mode with wavenumber k >= 0.

    Negative k is rejected here; spectral reconstruction handles it by
    conjugate symmetry and only ever derives parameters for |k|.
    """
    if not (isinstance(k, (int, float)) and math.isfinite(k)):
        raise ParameterError(f"wavenumber must be finite, got {k!r}")
    if k < 0:
        raise ParameterError(f"wavenumber must be >= 0, got {k!r}")
    lam = material.damping
    omega_sq = (material.conductivity / material.tau) * k * k
    gamma = cmath.sqrt(complex(lam * lam - omega_sq, 0.0))
    regime = classify_regime(lam, omega_sq, eps_c)
    return ModeParams(k=float(k), lam=lam, omega_sq=omega_sq, gamma=gamma, regime=regime)


def diffusive_rate(material: MaterialParams, k: float) -> float:
    """Classical Fourier decay rate alpha * k**2 of mode k.

    This is the tau -> 0 limit of the slow branch rate lam - gamma and
    serves as the reference value for diffusive-limit tests.
    """
    if not (isinstance(k, (int, float)) and math.isfinite(k)):
        raise ParameterError(f"wavenumber must be finite, got {k!r}")
    return material.diffusivity * k * k

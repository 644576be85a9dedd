"""Closed-form solution of one spectral mode via its variational potential.

The observable mode amplitude T(t) obeys the damped-oscillator equation
``T'' + 2*lam*T' + omega_sq*T = 0``.  Instead of solving it directly, the
method introduces a potential q with

    T = q'' - 2*lam*q' + omega_sq*q        (adjoint image)

whose Euler-Lagrange equation of the quadratic Lagrangian
``L = (q'' - 2*lam*q' + omega_sq*q)**2 / 2`` is fourth order:

    q'''' + (2*omega_sq - 4*lam**2)*q'' + omega_sq**2 * q = 0

with the four exponential branches exp(r*t), r in {-(lam+gamma),
-(lam-gamma), +(lam+gamma), +(lam-gamma)} and gamma = sqrt(lam**2 -
omega_sq).  The growing branches solve the adjoint (time-reversed
damping) operator; the adjoint image maps them to zero, so they carry no
observable content.  Choosing the potential's initial data as

    q(0)    = (2*lam*T0 + S0) / (4*lam*omega_sq)
    q'(0)   = -T0 / (4*lam)
    q''(0)  = -S0 / (4*lam)
    q'''(0) = (omega_sq*T0 + 2*lam*S0) / (4*lam)

makes the growing-branch coefficients vanish identically, which
``coefficients_from_linear_system`` verifies numerically by solving the
full 4x4 system without assuming it.  Composing the surviving branches
with the adjoint image recovers

    T(t) = [((gamma-lam)*T0 - S0) * exp(-(lam+gamma)*t)
            + ((gamma+lam)*T0 + S0) * exp(-(lam-gamma)*t)] / (2*gamma),

which ``mode_temperature`` evaluates directly, with series limit forms
for the near-critical band and the k = 0 mode where the generic
denominators vanish.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateRatesError, ParameterError, RegimeError, StepError, ZeroModeError
from .model import ModeParams, NEAR_CRITICAL, OVERDAMPED, UNDERDAMPED, ZERO_MODE

#: Terms kept in the near-critical series of cosh(g*t) and sinh(g*t)/(g*t).
SERIES_TERMS = 6
#: Largest |gamma*t| the truncated series is used for; beyond it the
#: generic formula is accurate enough again (error ~ eps/|gamma*t|).
SERIES_RANGE = 0.5


@dataclass(frozen=True)
class ModeInitialData:
    """Observable initial data of one mode: T(0) and T'(0)."""

    T0: complex
    S0: complex = 0.0

    def __post_init__(self):
        for name in ("T0", "S0"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ParameterError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class PotentialInitialState:
    """Potential and its first three time derivatives at t = 0."""

    q0: complex
    q1: complex
    q2: complex
    q3: complex

    def as_vector(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3], dtype=complex)


@dataclass(frozen=True)
class ModeSolution:
    """Four-branch exponential solution of one mode's potential.

    ``rates`` are ordered (-(lam+gamma), -(lam-gamma), +(lam+gamma),
    +(lam-gamma)) and ``coeffs`` are the matching (a1, a2, b1, b2).
    Physical solutions have b1 = b2 = 0.
    """

    rates: tuple[complex, complex, complex, complex]
    coeffs: tuple[complex, complex, complex, complex]
    mode: ModeParams


class LagrangianDensity(NamedTuple):
    """Pointwise Lagrangian value; ``value`` is 0.5*|A|^2 for the adjoint
    image A, ``complex_square`` the analytic continuation 0.5*A^2 (the two
    agree for real modes)."""

    value: float
    complex_square: complex


def potential_initial_conditions(init: ModeInitialData, mode: ModeParams) -> PotentialInitialState:
    """Potential initial data that eliminates the growing branches."""
    if mode.omega_sq == 0.0 or mode.regime == ZERO_MODE:
        raise ZeroModeError("k = 0 has omega = 0; use mode_temperature's zero-mode path")
    lam = mode.lam
    w2 = mode.omega_sq
    T0, S0 = complex(init.T0), complex(init.S0)
    return PotentialInitialState(
        q0=(2.0 * lam * T0 + S0) / (4.0 * lam * w2),
        q1=-T0 / (4.0 * lam),
        q2=-S0 / (4.0 * lam),
        q3=(w2 * T0 + 2.0 * lam * S0) / (4.0 * lam),
    )


def coefficients_closed_form(init: ModeInitialData, mode: ModeParams) -> ModeSolution:
    """Branch coefficients (a1, a2, 0, 0) of the decaying solution.

    Only valid away from the critical point: the formulas divide by gamma
    and by lam - gamma.  ``a2``'s denominator 8*gamma*lam*(lam-gamma) is
    evaluated as 8*gamma*lam*omega_sq/(lam+gamma) to stay accurate deep in
    the Fourier regime where lam - gamma underflows relative precision.
    """
    if mode.regime not in (OVERDAMPED, UNDERDAMPED):
        raise RegimeError(f"closed-form coefficients need an overdamped or underdamped mode, got {mode.regime}")
    lam, g = mode.lam, mode.gamma
    T0, S0 = complex(init.T0), complex(init.S0)
    # (g - lam) = -slow_rate, written that way to dodge the cancellation
    # of lam - sqrt(lam^2 - omega_sq) for omega << lam.
    a1 = -(mode.slow_rate * T0 + S0) / (8.0 * g * lam * (lam + g))
    a2 = ((g + lam) * T0 + S0) * (lam + g) / (8.0 * g * lam * mode.omega_sq)
    rates = (-(lam + g), -mode.slow_rate, lam + g, mode.slow_rate)
    return ModeSolution(rates=rates, coeffs=(a1, a2, 0.0 + 0.0j, 0.0 + 0.0j), mode=mode)


def coefficients_from_linear_system(state: PotentialInitialState, mode: ModeParams) -> ModeSolution:
    """All four branch coefficients from the 4x4 initial-value system.

    Matches q, q', q'', q''' at t = 0 against the four exponential
    branches without assuming the growing ones vanish; this is the
    independent check that the special initial conditions really do
    eliminate them.
    """
    if mode.regime in (NEAR_CRITICAL, ZERO_MODE):
        raise DegenerateRatesError(f"rates coalesce in the {mode.regime} regime; 4x4 solve is ill posed")
    lam, g = mode.lam, mode.gamma
    rates = np.array([-(lam + g), -mode.slow_rate, lam + g, mode.slow_rate], dtype=complex)
    scale = np.max(np.abs(rates))
    min_sep = min(abs(rates[i] - rates[j]) for i in range(4) for j in range(i + 1, 4))
    if scale == 0.0 or min_sep < 1e-9 * scale:
        raise DegenerateRatesError(f"rates {rates} are too close for a well-posed 4x4 solve")
    # Vandermonde rows: p-th derivative of exp(r*t) at 0 is r**p.
    matrix = np.vander(rates, 4, increasing=True).T
    try:
        coeffs = np.linalg.solve(matrix, state.as_vector())
    except np.linalg.LinAlgError as exc:
        raise DegenerateRatesError(str(exc)) from exc
    return ModeSolution(rates=tuple(rates), coeffs=tuple(coeffs), mode=mode)


def evaluate_potential(sol: ModeSolution, t: float, derivative_order: int = 0) -> complex:
    """Potential (or one of its first three derivatives) at time t."""
    if derivative_order not in (0, 1, 2, 3):
        raise ParameterError(f"derivative_order must be 0..3, got {derivative_order!r}")
    total = 0.0 + 0.0j
    for c, r in zip(sol.coeffs, sol.rates):
        if c == 0.0:
            continue
        total += c * r ** derivative_order * cmath.exp(r * t)
    return total


def potential_to_observable(q0: complex, q1: complex, q2: complex, mode: ModeParams) -> complex:
    """Adjoint image q'' - 2*lam*q' + omega_sq*q, i.e. the observable."""
    return complex(q2) - 2.0 * mode.lam * complex(q1) + mode.omega_sq * complex(q0)


def lagrangian_density(q0: complex, q1: complex, q2: complex, mode: ModeParams) -> LagrangianDensity:
    """Lagrangian value 0.5*(adjoint image)^2 at one instant."""
    a = potential_to_observable(q0, q1, q2, mode)
    return LagrangianDensity(value=0.5 * abs(a) ** 2, complex_square=0.5 * a * a)


def _cosh_sinhc_series(z_sq: float) -> tuple[float, float]:
    # cosh(z) and sinh(z)/z as truncated even series in z**2.
    cosh = 0.0
    sinhc = 0.0
    term_c = 1.0
    term_s = 1.0
    for m in range(SERIES_TERMS):
        cosh += term_c
        sinhc += term_s
        term_c *= z_sq / ((2 * m + 1) * (2 * m + 2))
        term_s *= z_sq / ((2 * m + 2) * (2 * m + 3))
    return cosh, sinhc


def _generic_temperature(T0: complex, S0: complex, lam: float, gamma: complex,
                         omega_sq: float, t: float) -> complex:
    slow = omega_sq / (lam + gamma)
    c_fast = -(slow * T0 + S0) / (2.0 * gamma)
    c_slow = ((gamma + lam) * T0 + S0) / (2.0 * gamma)
    return c_fast * cmath.exp(-(lam + gamma) * t) + c_slow * cmath.exp(-slow * t)


def _generic_temperature_rate(T0: complex, S0: complex, lam: float, gamma: complex,
                              omega_sq: float, t: float) -> complex:
    slow = omega_sq / (lam + gamma)
    c_fast = -(slow * T0 + S0) / (2.0 * gamma)
    c_slow = ((gamma + lam) * T0 + S0) / (2.0 * gamma)
    return (-(lam + gamma) * c_fast * cmath.exp(-(lam + gamma) * t)
            - slow * c_slow * cmath.exp(-slow * t))


def _critical_temperature(T0: complex, S0: complex, lam: float, gamma_sq: float,
                          t: float) -> complex:
    # exp(-lam*t) * [T0*cosh(g*t) + (lam*T0 + S0)*t*sinh(g*t)/(g*t)],
    # series in (g*t)**2 so gamma may be real, imaginary or zero.
    cosh, sinhc = _cosh_sinhc_series(gamma_sq * t * t)
    return cmath.exp(-lam * t) * (T0 * cosh + (lam * T0 + S0) * t * sinhc)


def _critical_temperature_rate(T0: complex, S0: complex, lam: float, gamma_sq: float,
                               t: float) -> complex:
    cosh, sinhc = _cosh_sinhc_series(gamma_sq * t * t)
    b = lam * T0 + S0
    return cmath.exp(-lam * t) * ((b - lam * T0) * cosh + (gamma_sq * T0 - lam * b) * t * sinhc)


def mode_temperature(init: ModeInitialData, mode: ModeParams, t: float) -> complex:
    """Observable mode amplitude T(t), valid in every damping regime."""
    if t < 0:
        raise ParameterError(f"time must be >= 0, got {t!r}")
    T0, S0 = complex(init.T0), complex(init.S0)
    lam = mode.lam
    if mode.regime == ZERO_MODE:
        return T0 - S0 * math.expm1(-2.0 * lam * t) / (2.0 * lam)
    if mode.regime == NEAR_CRITICAL and abs(mode.gamma) * t <= SERIES_RANGE:
        return _critical_temperature(T0, S0, lam, lam * lam - mode.omega_sq, t)
    return _generic_temperature(T0, S0, lam, mode.gamma, mode.omega_sq, t)


def mode_temperature_rate(init: ModeInitialData, mode: ModeParams, t: float) -> complex:
    """Analytic time derivative of mode_temperature."""
    if t < 0:
        raise ParameterError(f"time must be >= 0, got {t!r}")
    T0, S0 = complex(init.T0), complex(init.S0)
    lam = mode.lam
    if mode.regime == ZERO_MODE:
        return S0 * math.exp(-2.0 * lam * t)
    if mode.regime == NEAR_CRITICAL and abs(mode.gamma) * t <= SERIES_RANGE:
        return _critical_temperature_rate(T0, S0, lam, lam * lam - mode.omega_sq, t)
    return _generic_temperature_rate(T0, S0, lam, mode.gamma, mode.omega_sq, t)


# Second-derivative stencils used by el_residual, (offsets, weights, error order).
_STENCILS_D2 = {
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    4: ((-2, -1, 0, 1, 2), (-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12)),
}
_STENCILS_D4 = {
    2: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
    4: ((-3, -2, -1, 0, 1, 2, 3),
        (-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6)),
}


def el_residual(sol: ModeSolution, t_grid: Sequence[float], h: float, order: int = 2) -> float:
    """Finite-difference residual of the fourth-order Euler-Lagrange operator.

    Applies ``d4/dt4 + (2*omega_sq - 4*lam**2)*d2/dt2 + omega_sq**2`` to
    the solution's potential on ``t_grid`` with step ``h`` (central
    stencils of the given error order) and returns the maximum absolute
    residual normalized by max |omega_sq**2 * q|.  Exact solutions give a
    residual that shrinks as O(h**order).
    """
    if order not in _STENCILS_D2:
        raise ParameterError(f"stencil order must be one of {sorted(_STENCILS_D2)}, got {order!r}")
    if h <= 0:
        raise ParameterError(f"step must be > 0, got {h!r}")
    max_rate = max(abs(r) for r in sol.rates)
    if max_rate * h >= 1.0:
        raise StepError(f"step {h} is unstable for rates up to {max_rate:.3g} (rate*h >= 1)")
    ts = [float(t) for t in t_grid]
    if not ts:
        raise ParameterError("t_grid must be nonempty")
    lam, w2 = sol.mode.lam, sol.mode.omega_sq
    a2 = 2.0 * w2 - 4.0 * lam * lam
    off2, wgt2 = _STENCILS_D2[order]
    off4, wgt4 = _STENCILS_D4[order]
    worst = 0.0
    scale = 0.0
    for t in ts:
        q = evaluate_potential(sol, t)
        d2 = sum(w * evaluate_potential(sol, t + o * h) for o, w in zip(off2, wgt2)) / h**2
        d4 = sum(w * evaluate_potential(sol, t + o * h) for o, w in zip(off4, wgt4)) / h**4
        worst = max(worst, abs(d4 + a2 * d2 + w2 * w2 * q))
        scale = max(scale, abs(w2 * w2 * q))
    if scale == 0.0:
        return worst
    return worst / scale

import cmath

import numpy as np
import pytest

from vheat.model import MaterialParams, ModeParams, classify_regime
from vheat.profile import PiecewiseProfile


@pytest.fixture
def silicon():
    return MaterialParams(rho=2300.0, c_v=700.0, conductivity=149.0, tau=1e-4)


@pytest.fixture
def bar_profile():
    """Three-block profile: 5 / 10 / 20 degC with breakpoints 0.3 and 0.7."""
    return PiecewiseProfile.from_tuples([(0.0, 0.3, 5.0), (0.3, 0.7, 10.0), (0.7, 1.0, 20.0)])


def make_mode(lam, omega_sq, k=1.0, eps_c=1e-8):
    """ModeParams straight from (lam, omega_sq) for synthetic-mode tests."""
    gamma = cmath.sqrt(complex(lam * lam - omega_sq, 0.0))
    return ModeParams(k=k, lam=lam, omega_sq=omega_sq, gamma=gamma,
                      regime=classify_regime(lam, omega_sq, eps_c))


def random_nondegenerate_modes(rng, count):
    """Modes spread over both regimes, kept clear of critical damping."""
    modes = []
    for _ in range(count):
        lam = 10.0 ** rng.uniform(-2.0, 4.0)
        if rng.random() < 0.5:
            ratio = rng.uniform(0.05, 0.9)
        else:
            ratio = rng.uniform(1.1, 25.0)
        modes.append(make_mode(lam, ratio * lam * lam))
    return modes


def random_amplitude(rng, scale=1.0):
    return complex(rng.normal(), rng.normal()) * scale


def envelope(mode, init, t):
    """Magnitude scale of the two-branch solution at time t.

    Used as the comparison denominator: at oscillation zero crossings the
    value itself is arbitrarily small while roundoff stays proportional
    to this envelope.
    """
    lam, g = mode.lam, mode.gamma
    T0, S0 = complex(init.T0), complex(init.S0)
    c_fast = -(mode.slow_rate * T0 + S0) / (2.0 * g)
    c_slow = ((g + lam) * T0 + S0) / (2.0 * g)
    return (abs(c_fast) * np.exp(-(lam + g.real) * t)
            + abs(c_slow) * np.exp(-(mode.slow_rate.real) * t))

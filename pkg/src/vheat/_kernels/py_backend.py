"""Pure NumPy implementation of the hot kernels.

Semantics are shared with the compiled backend in ``_ckernels.pyx``:


``mode_temperatures``
    Evaluate every mode's closed-form amplitude on a time grid.
``assemble_field``
    Inverse spectral sum with the fixed pairing order (n, -n) ascending
    in |n|, returning the real field and its relative imaginary residual.
``trapezoidal_run``
    Implicit trapezoidal (Crank-Nicolson) integration of the damped wave
    system on a periodic grid; one cyclic tridiagonal solve per step.
``explicit_run``
    Explicit leapfrog integration of the same system.

Regime codes used by ``mode_temperatures``: 0 = zero mode (k = 0),
1 = generic (overdamped/underdamped), 2 = near critical.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

NAME = "numpy"

REGIME_ZERO = 0
REGIME_GENERIC = 1
REGIME_NEAR_CRITICAL = 2

_SERIES_TERMS = 6
_SERIES_RANGE = 0.5


def _series_cosh_sinhc(z_sq):
    cosh = np.zeros_like(z_sq)
    sinhc = np.zeros_like(z_sq)
    term_c = np.ones_like(z_sq)
    term_s = np.ones_like(z_sq)
    for m in range(_SERIES_TERMS):
        cosh += term_c
        sinhc += term_s
        term_c = term_c * z_sq / ((2 * m + 1) * (2 * m + 2))
        term_s = term_s * z_sq / ((2 * m + 2) * (2 * m + 3))
    return cosh, sinhc


def mode_temperatures(lam, omega_sq, gamma, regime, T0, S0, times):
    """Closed-form amplitudes, shape (len(times), len(omega_sq))."""
    omega_sq = np.asarray(omega_sq, dtype=float)
    gamma = np.asarray(gamma, dtype=complex)
    regime = np.asarray(regime, dtype=np.uint8)
    T0 = np.asarray(T0, dtype=complex)
    S0 = np.asarray(S0, dtype=complex)
    ts = np.asarray(times, dtype=float)[:, None]
    out = np.empty((ts.shape[0], omega_sq.shape[0]), dtype=complex)

    with np.errstate(under="ignore"):
        generic = regime != REGIME_ZERO
        if np.any(generic):
            g = gamma[generic]
            w2 = omega_sq[generic]
            slow = w2 / (lam + g)
            c_fast = -(slow * T0[generic] + S0[generic]) / (2.0 * g)
            c_slow = ((g + lam) * T0[generic] + S0[generic]) / (2.0 * g)
            vals = (c_fast * np.exp(-(lam + g) * ts)
                    + c_slow * np.exp(-slow * ts))
            near = regime[generic] == REGIME_NEAR_CRITICAL
            if np.any(near):
                g_sq = lam * lam - w2[near]
                z_sq = g_sq * ts * ts
                cosh, sinhc = _series_cosh_sinhc(z_sq)
                b = lam * T0[generic][near] + S0[generic][near]
                series = np.exp(-lam * ts) * (T0[generic][near] * cosh + b * ts * sinhc)
                use = np.abs(gamma[generic][near]) * ts <= _SERIES_RANGE
                vals[:, near] = np.where(use, series, vals[:, near])
            out[:, generic] = vals
        zero = ~generic
        if np.any(zero):
            decay = -np.expm1(-2.0 * lam * ts)
            out[:, zero] = T0[zero] + S0[zero] * decay / (2.0 * lam)
    return out


def assemble_field(ttilde, xs, length):
    """Inverse spectral sum T(x) = (1/L) * sum_n T_n * exp(i*k_n*x).

    ``ttilde`` holds one row per time and one column per mode index
    n = -N..N.  The +n/-n contributions are added pairwise, ascending in
    n, which keeps the summation order fixed and hence the output
    bit-reproducible.  Returns the real field and, per row, the largest
    imaginary part relative to the largest real part.
    """
    ttilde = np.asarray(ttilde, dtype=complex)
    xs = np.asarray(xs, dtype=float)
    n_side = (ttilde.shape[1] - 1) // 2
    acc = np.repeat(ttilde[:, n_side][:, None], xs.shape[0], axis=1)
    base = 2.0 * np.pi / length
    for n in range(1, n_side + 1):
        phase = np.exp(1j * (base * n) * xs)
        acc += ttilde[:, n_side + n][:, None] * phase + ttilde[:, n_side - n][:, None] * np.conj(phase)
    acc /= length
    real_max = np.max(np.abs(acc.real), axis=1)
    imag_max = np.max(np.abs(acc.imag), axis=1)
    resid = imag_max / np.maximum(real_max, 1e-300)
    return np.ascontiguousarray(acc.real), resid


def trapezoidal_run(T, V, dx, dt, c2, damp, record_steps):
    """Crank-Nicolson stepping of T'' + damp*T' = c2*T_xx, periodic grid.

    Written as the first-order system (T, V = T'), both updated with the
    trapezoidal rule; eliminating V leaves one constant-coefficient
    cyclic tridiagonal solve per step, factorized once.
    """
    T = np.array(T, dtype=float)
    V = np.array(V, dtype=float)
    n = T.shape[0]
    beta = 0.5 * damp * dt
    w = 0.5 * c2 * dt
    theta = dt * w / (2.0 * (1.0 + beta))
    r = theta / dx**2

    main = np.full(n, 1.0 + 2.0 * r)
    off = np.full(n - 1, -r)
    matrix = sp.lil_matrix((n, n))
    matrix.setdiag(main)
    matrix.setdiag(off, 1)
    matrix.setdiag(off, -1)
    matrix[0, n - 1] = -r
    matrix[n - 1, 0] = -r
    solver = spla.splu(matrix.tocsc())

    def lap(u):
        return (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / dx**2

    record_steps = np.asarray(record_steps, dtype=np.int64)
    records = np.empty((record_steps.shape[0], n), dtype=float)
    lookup = {int(s): i for i, s in enumerate(record_steps)}
    if 0 in lookup:
        records[lookup[0]] = T
    last = int(record_steps.max(initial=0))
    for step in range(1, last + 1):
        lap_t = lap(T)
        rhs = T + dt * V / (1.0 + beta) + theta * lap_t
        T_new = solver.solve(rhs)
        V = (V * (1.0 - beta) + w * (lap_t + lap(T_new))) / (1.0 + beta)
        T = T_new
        if step in lookup:
            records[lookup[step]] = T
    return records


def explicit_run(T, V, dx, dt, c2, damp, record_steps):
    """Leapfrog stepping of T'' + damp*T' = c2*T_xx, periodic grid.

    Second-order central differences in both time and space; the damping
    term is time-centered so it does not restrict stability beyond the
    wave CFL bound.  First step from the Taylor expansion with the
    initial rate V.
    """
    T_prev = np.array(T, dtype=float)
    V = np.asarray(V, dtype=float)
    n = T_prev.shape[0]

    def lap(u):
        return (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / dx**2

    record_steps = np.asarray(record_steps, dtype=np.int64)
    records = np.empty((record_steps.shape[0], n), dtype=float)
    lookup = {int(s): i for i, s in enumerate(record_steps)}
    if 0 in lookup:
        records[lookup[0]] = T_prev
    last = int(record_steps.max(initial=0))
    if last == 0:
        return records

    accel = c2 * lap(T_prev) - damp * V
    T_cur = T_prev + dt * V + 0.5 * dt * dt * accel
    if 1 in lookup:
        records[lookup[1]] = T_cur
    a = 1.0 / dt**2 + 0.5 * damp / dt
    b = 1.0 / dt**2 - 0.5 * damp / dt
    for step in range(2, last + 1):
        T_next = (c2 * lap(T_cur) + 2.0 * T_cur / dt**2 - b * T_prev) / a
        T_prev, T_cur = T_cur, T_next
        if step in lookup:
            records[lookup[step]] = T_cur
    return records

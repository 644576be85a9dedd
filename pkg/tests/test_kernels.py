"""Backend equivalence and independent verification of the compiled kernels."""

import numpy as np
import pytest

from conftest import make_mode, random_nondegenerate_modes
from vheat._kernels import available_backends, get_backend
from vheat.mode_solver import ModeInitialData, mode_temperature

BACKENDS = available_backends()


def _regime_code(mode):
    return {"zero_mode": 0, "overdamped": 1, "underdamped": 1, "near_critical": 2}[mode.regime]


def _mode_batch(rng, lam, count):
    modes = [make_mode(lam, 0.0)]
    modes += [make_mode(lam, lam * lam * (1.0 + s * 3e-9)) for s in (-1.0, 1.0)]
    while len(modes) < count:
        ratio = rng.uniform(0.05, 0.9) if rng.random() < 0.5 else rng.uniform(1.1, 25.0)
        modes.append(make_mode(lam, ratio * lam * lam))
    return modes


@pytest.mark.parametrize("name", BACKENDS)
def test_mode_temperatures_match_scalar_reference(name):
    backend = get_backend(name)
    rng = np.random.default_rng(3)
    lam = 2.0
    modes = _mode_batch(rng, lam, 40)
    t0 = rng.normal(size=40) + 1j * rng.normal(size=40)
    s0 = rng.normal(size=40) + 1j * rng.normal(size=40)
    times = np.linspace(0.0, 4.0, 9)
    out = backend.mode_temperatures(
        lam,
        np.array([m.omega_sq for m in modes]),
        np.array([m.gamma for m in modes]),
        np.array([_regime_code(m) for m in modes], dtype=np.uint8),
        t0, s0, times)
    for c, mode in enumerate(modes):
        init = ModeInitialData(t0[c], s0[c])
        for r, t in enumerate(times):
            ref = mode_temperature(init, mode, float(t))
            assert abs(out[r, c] - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("name", BACKENDS)
def test_assemble_field_matches_direct_sum(name):
    backend = get_backend(name)
    rng = np.random.default_rng(4)
    n_side, n_x, length = 40, 37, 2.0
    cols = 2 * n_side + 1
    base = rng.normal(size=(3, n_side + 1)) + 1j * rng.normal(size=(3, n_side + 1))
    base[:, 0] = base[:, 0].real  # k = 0 must be real for a real field
    ttilde = np.concatenate([np.conj(base[:, :0:-1]), base], axis=1)
    assert ttilde.shape == (3, cols)
    xs = rng.uniform(0.0, length, size=n_x)
    temps, resid = backend.assemble_field(ttilde, xs, length)
    ks = 2.0 * np.pi * np.arange(-n_side, n_side + 1) / length
    direct = (ttilde[:, None, :] * np.exp(1j * np.outer(xs, ks))[None, :, :]).sum(axis=2) / length
    assert np.allclose(temps, direct.real, atol=1e-10 * np.max(np.abs(direct)))
    assert np.all(resid <= 1e-12)


@pytest.mark.parametrize("name", BACKENDS)
def test_assemble_field_flags_asymmetric_input(name):
    backend = get_backend(name)
    ttilde = np.zeros((1, 7), dtype=complex)
    ttilde[0, 3] = 1.0      # k = 0
    ttilde[0, 5] = 2.0 + 1j  # +2k without its conjugate partner
    _, resid = backend.assemble_field(ttilde, np.arange(16) / 16.0, 1.0)
    assert resid[0] > 0.1


@pytest.mark.parametrize("name", BACKENDS)
def test_trapezoidal_matches_dense_reference(name):
    # independent check of the cyclic solve: step the same update with a
    # dense periodic Laplacian and numpy.linalg.solve
    backend = get_backend(name)
    rng = np.random.default_rng(5)
    n, dx, dt, c2, damp = 16, 1.0 / 16, 7e-3, 3.0, 2.5
    T = rng.normal(size=n)
    V = rng.normal(size=n)
    lap = (np.roll(np.eye(n), 1, axis=1) - 2.0 * np.eye(n) + np.roll(np.eye(n), -1, axis=1)) / dx**2
    beta, w = 0.5 * damp * dt, 0.5 * c2 * dt
    theta = dt * w / (2.0 * (1.0 + beta))
    lhs = np.eye(n) - theta * lap
    T_ref, V_ref = T.copy(), V.copy()
    for _ in range(25):
        rhs = T_ref + dt * V_ref / (1.0 + beta) + theta * (lap @ T_ref)
        T_new = np.linalg.solve(lhs, rhs)
        V_ref = (V_ref * (1.0 - beta) + w * (lap @ T_ref + lap @ T_new)) / (1.0 + beta)
        T_ref = T_new
    out = backend.trapezoidal_run(T, V, dx, dt, c2, damp, np.array([25], dtype=np.int64))
    assert np.allclose(out[0], T_ref, atol=1e-12)


@pytest.mark.parametrize("name", BACKENDS)
def test_explicit_matches_dense_reference(name):
    backend = get_backend(name)
    rng = np.random.default_rng(6)
    n, dx, c2, damp = 16, 1.0 / 16, 0.04, 0.04
    dt = 0.5 * dx / np.sqrt(c2)
    T = rng.normal(size=n)
    V = rng.normal(size=n)
    lap = (np.roll(np.eye(n), 1, axis=1) - 2.0 * np.eye(n) + np.roll(np.eye(n), -1, axis=1)) / dx**2
    T_prev = T.copy()
    T_cur = T_prev + dt * V + 0.5 * dt * dt * (c2 * (lap @ T_prev) - damp * V)
    a = 1.0 / dt**2 + 0.5 * damp / dt
    b = 1.0 / dt**2 - 0.5 * damp / dt
    for _ in range(2, 21):
        T_next = (c2 * (lap @ T_cur) + 2.0 * T_cur / dt**2 - b * T_prev) / a
        T_prev, T_cur = T_cur, T_next
    out = backend.explicit_run(T, V, dx, dt, c2, damp, np.array([20], dtype=np.int64))
    assert np.allclose(out[0], T_cur, atol=1e-11)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
class TestBackendParity:
    def test_mode_temperatures(self):
        rng = np.random.default_rng(7)
        lam = 5.0
        modes = _mode_batch(rng, lam, 60)
        t0 = rng.normal(size=60) + 1j * rng.normal(size=60)
        s0 = rng.normal(size=60) + 1j * rng.normal(size=60)
        times = np.linspace(0.0, 2.0, 6)
        args = (lam, np.array([m.omega_sq for m in modes]), np.array([m.gamma for m in modes]),
                np.array([_regime_code(m) for m in modes], dtype=np.uint8), t0, s0, times)
        a = get_backend("cython").mode_temperatures(*args)
        b = get_backend("numpy").mode_temperatures(*args)
        assert np.allclose(a, b, rtol=0.0, atol=1e-13 * np.max(np.abs(b)))

    def test_assemble_field(self):
        rng = np.random.default_rng(8)
        ttilde = rng.normal(size=(4, 513)) + 1j * rng.normal(size=(4, 513))
        xs = np.arange(256) / 256.0
        ta, ra = get_backend("cython").assemble_field(ttilde, xs, 1.0)
        tb, rb = get_backend("numpy").assemble_field(ttilde, xs, 1.0)
        scale = np.max(np.abs(tb))
        assert np.allclose(ta, tb, rtol=0.0, atol=1e-10 * scale)
        assert np.allclose(ra, rb, rtol=0.0, atol=1e-10)

    @pytest.mark.parametrize("kernel", ["trapezoidal_run", "explicit_run"])
    def test_steppers(self, kernel):
        rng = np.random.default_rng(9)
        n = 128
        T = rng.normal(size=n)
        V = rng.normal(size=n)
        rec = np.array([0, 7, 40], dtype=np.int64)
        args = (T, V, 1.0 / n, 1e-3, 2.0, 1.5, rec)
        a = getattr(get_backend("cython"), kernel)(*args)
        b = getattr(get_backend("numpy"), kernel)(*args)
        assert np.allclose(a, b, rtol=0.0, atol=1e-11)


def test_forced_backend_selection(monkeypatch):
    import importlib

    import vheat._kernels as kernels
    monkeypatch.setenv("VHEAT_BACKEND", "python")
    reloaded = importlib.reload(kernels)
    try:
        assert reloaded.BACKEND_NAME == "numpy"
        monkeypatch.setenv("VHEAT_BACKEND", "nonsense")
        with pytest.raises(ImportError):
            importlib.reload(kernels)
    finally:
        monkeypatch.delenv("VHEAT_BACKEND")
        importlib.reload(kernels)

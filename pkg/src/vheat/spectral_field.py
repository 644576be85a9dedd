"""Full space-time temperature field from per-mode closed forms.

The field is reconstructed as a periodic Fourier series on [0, L):

    T(x, t) = (1/L) * sum_{n=-N..N} T_n(t) * exp(i*k_n*x),   k_n = 2*pi*n/L

with T_n(0) = T0(k_n) taken from the profile's exact continuous
transform, so the series is the Fourier series of the profile's periodic
extension.  Each T_n(t) evolves by the closed forms in ``mode_solver``
(evaluated in bulk by the kernel backend); the +n/-n contributions are
summed pairwise in ascending |n| so results are bit-reproducible.

The summed field is kept complex until the end: its imaginary part must
vanish for Hermitian-symmetric data, so a non-negligible residual means
a transform or conjugation bug (or asymmetric user-supplied S0 data) and
raises instead of being silently dropped.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import GridMismatchError, ParameterError, SymmetryError
from .model import MaterialParams, NEAR_CRITICAL, ZERO_MODE, derive_mode_params
from .profile import PiecewiseProfile

#: Snapshots whose relative imaginary residual exceeds this are rejected.
SYMMETRY_TOLERANCE = 1e-6

#: Columns below which threading is pure overhead.
_MIN_COLUMNS_PER_WORKER = 64


@dataclass(frozen=True)
class SpectralGrid:
    """Mode set k_n = 2*pi*n/L, n = -N..N, plus a uniform output grid."""

    length: float
    n_modes: int
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0):
            raise ParameterError(f"domain length must be finite and > 0, got {self.length!r}")
        if self.n_modes < 1:
            raise ParameterError(f"n_modes must be >= 1, got {self.n_modes!r}")
        if self.n_points < 2:
            raise ParameterError(f"n_points must be >= 2, got {self.n_points!r}")

    @property
    def mode_indices(self) -> np.ndarray:
        return np.arange(-self.n_modes, self.n_modes + 1)

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * self.mode_indices / self.length

    @property
    def xs(self) -> np.ndarray:
        return np.arange(self.n_points) * (self.length / self.n_points)


def build_grid(length: float, n_modes: int, n_points: int) -> SpectralGrid:
    """Validated grid with a symmetric mode set including k = 0."""
    return SpectralGrid(length=float(length), n_modes=int(n_modes), n_points=int(n_points))


@dataclass(frozen=True)
class FieldSnapshot:
    """Real temperature samples on a spatial grid at one time."""

    t: float
    xs: np.ndarray
    temps: np.ndarray
    imag_residual: float = 0.0

    def __post_init__(self):
        if len(self.temps) != len(self.xs):
            raise ParameterError("temps and xs must have the same length")
        if not np.all(np.isfinite(self.temps)):
            raise ParameterError("snapshot temperatures must be finite")


def spatial_mean(snapshot: FieldSnapshot) -> float:
    """Arithmetic mean over the uniform grid."""
    if len(snapshot.temps) == 0:
        raise ParameterError("snapshot is empty")
    return float(np.mean(snapshot.temps))


def l2_difference(a: FieldSnapshot, b: FieldSnapshot) -> float:
    """Relative L2 norm ||a - b|| / ||b|| over a shared grid."""
    if len(a.xs) != len(b.xs) or not np.allclose(a.xs, b.xs, rtol=0.0, atol=0.0):
        raise GridMismatchError("snapshots live on different spatial grids")
    denom = float(np.linalg.norm(b.temps))
    if denom == 0.0:
        return float(np.linalg.norm(a.temps - b.temps))
    return float(np.linalg.norm(a.temps - b.temps)) / denom


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("VHEAT_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ParameterError(f"VHEAT_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def _mode_arrays(material: MaterialParams, grid: SpectralGrid):
    n = grid.n_modes
    cols = 2 * n + 1
    omega_sq = np.empty(cols)
    gamma = np.empty(cols, dtype=complex)
    codes = np.empty(cols, dtype=np.uint8)
    for idx in range(n + 1):
        params = derive_mode_params(material, 2.0 * np.pi * idx / grid.length)
        if params.regime == ZERO_MODE:
            code = _kernels.REGIME_ZERO
        elif params.regime == NEAR_CRITICAL:
            code = _kernels.REGIME_NEAR_CRITICAL
        else:
            code = _kernels.REGIME_GENERIC
        for col in (n + idx, n - idx):
            omega_sq[col] = params.omega_sq
            gamma[col] = params.gamma
            codes[col] = code
    return omega_sq, gamma, codes


def _evolve_modes(lam, omega_sq, gamma, codes, t0, s0, times, workers):
    backend = _kernels.backend
    cols = omega_sq.shape[0]
    if workers <= 1 or cols < 2 * _MIN_COLUMNS_PER_WORKER:
        return backend.mode_temperatures(lam, omega_sq, gamma, codes, t0, s0, times)
    out = np.empty((len(times), cols), dtype=complex)
    chunk = max(_MIN_COLUMNS_PER_WORKER, -(-cols // workers))
    spans = [(lo, min(lo + chunk, cols)) for lo in range(0, cols, chunk)]

    def work(span):
        lo, hi = span
        out[:, lo:hi] = backend.mode_temperatures(
            lam, omega_sq[lo:hi], gamma[lo:hi], codes[lo:hi], t0[lo:hi], s0[lo:hi], times)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(work, spans))
    return out


def solve_field(material: MaterialParams, profile: PiecewiseProfile, grid: SpectralGrid,
                times: Sequence[float], s0: str | Sequence[complex] = "zero",
                workers: int | None = None) -> list[FieldSnapshot]:
    """Solve every mode and reconstruct snapshots at the requested times.

    ``s0`` is either the string ``"zero"`` (the default initial rate) or
    an explicit sequence of 2*n_modes+1 complex rates ordered by mode
    index n = -N..N.  Explicit values that break Hermitian symmetry make
    the reconstruction raise :class:`SymmetryError`.
    """
    times = [float(t) for t in times]
    if not times:
        raise ParameterError("times must be nonempty")
    if any(t < 0 for t in times):
        raise ParameterError("times must be >= 0")
    if sorted(times) != times:
        raise ParameterError("times must be sorted ascending")
    if profile.length != grid.length:
        raise ParameterError(
            f"profile covers [0, {profile.length}] but the grid expects length {grid.length}")

    ks = grid.wavenumbers
    t0 = np.array([profile.transform(k).value for k in ks], dtype=complex)
    if isinstance(s0, str):
        if s0 != "zero":
            raise ParameterError(f"s0 policy must be 'zero' or an explicit sequence, got {s0!r}")
        s0_arr = np.zeros(len(ks), dtype=complex)
    else:
        s0_arr = np.asarray(list(s0), dtype=complex)
        if s0_arr.shape != ks.shape:
            raise ParameterError(f"explicit s0 needs {len(ks)} entries, got {s0_arr.shape[0]}")

    omega_sq, gamma, codes = _mode_arrays(material, grid)
    ttilde = _evolve_modes(material.damping, omega_sq, gamma, codes, t0, s0_arr,
                           np.asarray(times), _worker_count(workers))
    temps, resid = _kernels.backend.assemble_field(ttilde, grid.xs, grid.length)

    snapshots = []
    for row, t in enumerate(times):
        if resid[row] > SYMMETRY_TOLERANCE:
            raise SymmetryError(
                f"imaginary residual {resid[row]:.3e} at t={t} exceeds {SYMMETRY_TOLERANCE}; "
                "spectral data is not Hermitian-symmetric")
        snapshots.append(FieldSnapshot(t=t, xs=grid.xs, temps=temps[row].copy(),
                                       imag_residual=float(resid[row])))
    return snapshots


def truncated_profile_field(profile: PiecewiseProfile, n_modes: int, xs: np.ndarray,
                            length: float | None = None) -> np.ndarray:
    """Evaluate the profile's truncated Fourier series on arbitrary points.

    This is the t = 0 field the spectral solver represents; it is the
    consistent initial condition for cross-validation runs of the
    finite-difference oracle.
    """
    length = profile.length if length is None else length
    idx = np.arange(-n_modes, n_modes + 1)
    ks = 2.0 * np.pi * idx / length
    t0 = np.array([[profile.transform(k).value for k in ks]], dtype=complex)
    temps, resid = _kernels.backend.assemble_field(t0, np.asarray(xs, dtype=float), length)
    if resid[0] > SYMMETRY_TOLERANCE:
        raise SymmetryError(f"imaginary residual {resid[0]:.3e} in truncated profile")
    return temps[0]

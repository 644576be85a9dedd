"""Independent finite-difference reference solver.

Discretizes the second-order-in-time conduction equation

    tau * T_tt + rho*c_v * T_t = conductivity * T_xx

directly on a periodic grid (periodic to match the spectral
reconstruction, so comparisons measure method error only) as the
first-order system (T, V = T_t).  Two schemes are available:

* ``trapezoidal`` -- implicit trapezoidal rule, unconditionally stable;
  the default, since realistic relaxation times make the damping rate
  enormous (~1e10/s for silicon) and any explicit step hopeless.
* ``explicit`` -- leapfrog with time-centered damping, limited by the
  wave CFL bound; used in the large-tau wave regime where fronts must
  not be smeared by implicit damping.

The oracle shares no code with the spectral path beyond the snapshot
container, which is the point: agreement between the two is evidence,
not tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._kernels import backend
from .errors import FrontDetectionError, ParameterError, StabilityError
from .model import MaterialParams
from .profile import PiecewiseProfile
from .spectral_field import FieldSnapshot

TRAPEZOIDAL = "trapezoidal"
EXPLICIT = "explicit"

#: Explicit steps must stay below this fraction of the CFL limit.
CFL_SAFETY = 0.9

#: Snapshots between recorded steps are interpolated linearly in time;
#: steps near-exactly on a record time are used directly.
_STEP_SNAP = 1e-9


@dataclass(frozen=True)
class OracleConfig:
    """Resolution and scheme of one oracle run."""

    n_cells: int
    dt: float
    scheme: str = TRAPEZOIDAL

    def __post_init__(self):
        if self.n_cells < 4:
            raise ParameterError(f"n_cells must be >= 4, got {self.n_cells!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ParameterError(f"dt must be finite and > 0, got {self.dt!r}")
        if self.scheme not in (TRAPEZOIDAL, EXPLICIT):
            raise ParameterError(f"scheme must be '{TRAPEZOIDAL}' or '{EXPLICIT}', got {self.scheme!r}")


def default_oracle_config(times: Sequence[float], n_points: int) -> OracleConfig:
    """Trapezoidal configuration sized for cross-validation runs.

    Four cells per output point keeps node extraction exact, and the step
    is small enough that both the scheme and the linear time
    interpolation stay far below the 1e-3 comparison tolerance.
    """
    t_max = max(times) if len(times) else 0.0
    dt = min(5e-3, t_max / 1000.0) if t_max > 0 else 1e-3
    return OracleConfig(n_cells=4 * int(n_points), dt=dt, scheme=TRAPEZOIDAL)


def cfl_limit(material: MaterialParams, n_cells: int) -> float:
    """Largest stable explicit step: min of the wave bound dx/c and the
    damping bound 1/lam."""
    dx = material.domain_length / n_cells
    return min(dx / material.wave_speed, 1.0 / material.damping)


def _field_on_nodes(init, xs: np.ndarray, what: str) -> np.ndarray:
    if isinstance(init, PiecewiseProfile):
        return np.array([init.sample(float(x)) for x in xs])
    if callable(init):
        values = np.asarray(init(xs), dtype=float)
    else:
        values = np.asarray(init, dtype=float)
    if values.shape != xs.shape:
        raise ParameterError(f"{what} must provide {xs.shape[0]} values, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ParameterError(f"{what} contains non-finite values")
    return values


def fd_solve(material: MaterialParams, init, config: OracleConfig,
             times: Sequence[float], v0=None,
             sample_xs: np.ndarray | None = None) -> list[FieldSnapshot]:
    """Integrate the conduction equation and report snapshots.

    ``init`` is a :class:`PiecewiseProfile`, a vectorized callable
    ``xs -> T`` or an array on the cell grid; ``v0`` (initial T_t, the
    inverse-transformed S0 data) defaults to zero in the same formats.
    Snapshots are taken on ``sample_xs`` (default: the cell grid), by
    exact node extraction when the points coincide with cells and by
    periodic linear interpolation otherwise.
    """
    times = [float(t) for t in times]
    if not times:
        raise ParameterError("times must be nonempty")
    if any(t < 0 for t in times):
        raise ParameterError("times must be >= 0")
    if sorted(times) != times:
        raise ParameterError("times must be sorted ascending")

    length = material.domain_length
    if isinstance(init, PiecewiseProfile) and init.length != length:
        raise ParameterError(
            f"profile covers [0, {init.length}] but the material domain has length {length}")
    if config.scheme == EXPLICIT:
        limit = CFL_SAFETY * cfl_limit(material, config.n_cells)
        if config.dt > limit:
            raise StabilityError(
                f"explicit dt={config.dt:.3e} exceeds {CFL_SAFETY} * CFL limit {limit / CFL_SAFETY:.3e}")

    n = config.n_cells
    dx = length / n
    cell_xs = np.arange(n) * dx
    temp0 = _field_on_nodes(init, cell_xs, "initial temperature")
    rate0 = np.zeros(n) if v0 is None else _field_on_nodes(v0, cell_xs, "initial rate")

    # Map each requested time onto bracketing whole steps.
    dt = config.dt
    plans = []
    needed = set()
    for t in times:
        s = t / dt
        lo = int(math.floor(s))
        if abs(s - round(s)) < _STEP_SNAP * max(1.0, abs(s)):
            lo = int(round(s))
            plans.append((t, lo, lo, 0.0))
            needed.add(lo)
        else:
            plans.append((t, lo, lo + 1, s - lo))
            needed.update((lo, lo + 1))
    record_steps = np.array(sorted(needed), dtype=np.int64)
    where = {int(s): i for i, s in enumerate(record_steps)}

    c2 = material.conductivity / material.tau
    damp = material.rho * material.c_v / material.tau
    if config.scheme == TRAPEZOIDAL:
        records = backend.trapezoidal_run(temp0, rate0, dx, dt, c2, damp, record_steps)
    else:
        records = backend.explicit_run(temp0, rate0, dx, dt, c2, damp, record_steps)

    snapshots = []
    out_xs = cell_xs if sample_xs is None else np.asarray(sample_xs, dtype=float)
    for t, lo, hi, weight in plans:
        if weight == 0.0:
            row = records[where[lo]]
        else:
            row = (1.0 - weight) * records[where[lo]] + weight * records[where[hi]]
        snapshots.append(FieldSnapshot(t=t, xs=out_xs,
                                       temps=_resample(row, cell_xs, out_xs, length)))
    return snapshots


def _resample(row: np.ndarray, cell_xs: np.ndarray, out_xs: np.ndarray, length: float) -> np.ndarray:
    if out_xs is cell_xs:
        return row.copy()
    dx = cell_xs[1] - cell_xs[0]
    pos = out_xs / dx
    idx = np.rint(pos).astype(int)
    if np.all(np.abs(pos - idx) < 1e-9) and idx.min() >= 0 and idx.max() < len(cell_xs):
        return row[idx].copy()
    xp = np.append(cell_xs, length)
    fp = np.append(row, row[:1])
    return np.interp(np.mod(out_xs, length), xp, fp)


def wavefront_speed(snapshots: Sequence[FieldSnapshot], threshold: float) -> float:
    """Propagation speed of the rightmost threshold crossing.

    For every snapshot the front is the largest x whose temperature
    exceeds ``threshold``; the speed is the least-squares slope of front
    position against time.  Raises when a snapshot has no crossing or
    fewer than two snapshots are given.
    """
    if len(snapshots) < 2:
        raise FrontDetectionError("need at least two snapshots to fit a front speed")
    ts = []
    fronts = []
    for snap in snapshots:
        above = np.nonzero(snap.temps > threshold)[0]
        if len(above) == 0:
            raise FrontDetectionError(f"no value above threshold {threshold} at t={snap.t}")
        ts.append(snap.t)
        fronts.append(snap.xs[above.max()])
    return float(np.polyfit(ts, fronts, 1)[0])

"""Command-line front end: JSON config in, CSV snapshots and metrics out.

Config schema (see ``configs/silicon_bar.json`` for a complete example)::

    {
      "material": {"rho": ..., "c_v": ..., "conductivity": ..., "tau": ...,
                   "domain_length": 1.0},
      "profile":  [{"from": 0.0, "to": 0.3, "value": 5.0}, ...],
      "grid":     {"n_modes": 512, "n_points": 1024},
      "times":    [0, 2, 8, 30],
      "s0":       "zero",
      "outputs":  {"csv_path": "out.csv", "plot_script_path": "out.gp"},
      "compare":  {"n_cells": 4096, "dt": 0.005, "scheme": "trapezoidal"}
    }

``grid``, ``s0``, ``domain_length``, ``plot_script_path`` and ``compare``
are optional.  Unknown keys are rejected with their full path.  Flags
override config values (flags > config > defaults).

Exit status: 0 success, 1 configuration/solver/io error, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .errors import ConfigError, VheatError
from .fd_oracle import OracleConfig, default_oracle_config, fd_solve
from .model import MaterialParams
from .profile import PiecewiseProfile
from .spectral_field import (FieldSnapshot, build_grid, l2_difference, solve_field,
                             truncated_profile_field)

DEFAULT_N_MODES = 512
DEFAULT_N_POINTS = 1024

_TOP_KEYS = {"material", "profile", "grid", "times", "s0", "outputs", "compare"}
_MATERIAL_KEYS = {"rho", "c_v", "conductivity", "tau", "domain_length"}
_GRID_KEYS = {"n_modes", "n_points"}
_SEGMENT_KEYS = {"from", "to", "value"}
_OUTPUT_KEYS = {"csv_path", "plot_script_path"}
_COMPARE_KEYS = {"n_cells", "dt", "scheme"}


@dataclass(frozen=True)
class RunConfig:
    """Fully validated problem description."""

    material: MaterialParams
    profile: PiecewiseProfile
    times: tuple[float, ...]
    csv_path: str
    n_modes: int = DEFAULT_N_MODES
    n_points: int = DEFAULT_N_POINTS
    s0: str = "zero"
    plot_script_path: str | None = None
    compare: OracleConfig | None = None


def _reject_unknown(obj: dict, allowed: set, path: str) -> None:
    for key in obj:
        if key not in allowed:
            where = f"{path}.{key}" if path else key
            raise ConfigError(f"unknown key {where}")


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        where = f"{path}.{key}" if path else key
        raise ConfigError(f"missing required field {where}")
    return obj[key]


def _number(value, path: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{path} must be a number, got {value!r}")
    return float(value)


def parse_config(text: bytes | str) -> RunConfig:
    """Parse and validate a JSON run configuration."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError(f"config is not valid UTF-8: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "")

    mat_raw = _require(raw, "material", "")
    if not isinstance(mat_raw, dict):
        raise ConfigError("material must be an object")
    _reject_unknown(mat_raw, _MATERIAL_KEYS, "material")
    material = MaterialParams(
        rho=_number(_require(mat_raw, "rho", "material"), "material.rho"),
        c_v=_number(_require(mat_raw, "c_v", "material"), "material.c_v"),
        conductivity=_number(_require(mat_raw, "conductivity", "material"), "material.conductivity"),
        tau=_number(_require(mat_raw, "tau", "material"), "material.tau"),
        domain_length=_number(mat_raw.get("domain_length", 1.0), "material.domain_length"),
    )

    prof_raw = _require(raw, "profile", "")
    if not isinstance(prof_raw, list) or not prof_raw:
        raise ConfigError("profile must be a nonempty array of segments")
    segments = []
    for i, seg in enumerate(prof_raw):
        if not isinstance(seg, dict):
            raise ConfigError(f"profile[{i}] must be an object")
        _reject_unknown(seg, _SEGMENT_KEYS, f"profile[{i}]")
        segments.append((_number(_require(seg, "from", f"profile[{i}]"), f"profile[{i}].from"),
                         _number(_require(seg, "to", f"profile[{i}]"), f"profile[{i}].to"),
                         _number(_require(seg, "value", f"profile[{i}]"), f"profile[{i}].value")))
    profile = PiecewiseProfile.from_tuples(segments)
    if profile.length != material.domain_length:
        raise ConfigError(
            f"profile covers [0, {profile.length}] but domain_length is {material.domain_length}")

    times_raw = _require(raw, "times", "")
    if not isinstance(times_raw, list) or not times_raw:
        raise ConfigError("times must be nonempty")
    times = tuple(_number(t, f"times[{i}]") for i, t in enumerate(times_raw))
    if any(t < 0 for t in times):
        raise ConfigError("times must be >= 0")
    if list(times) != sorted(times):
        raise ConfigError("times must be sorted ascending")

    n_modes, n_points = DEFAULT_N_MODES, DEFAULT_N_POINTS
    if "grid" in raw:
        grid_raw = raw["grid"]
        if not isinstance(grid_raw, dict):
            raise ConfigError("grid must be an object")
        _reject_unknown(grid_raw, _GRID_KEYS, "grid")
        if "n_modes" in grid_raw:
            n_modes = int(_number(grid_raw["n_modes"], "grid.n_modes"))
        if "n_points" in grid_raw:
            n_points = int(_number(grid_raw["n_points"], "grid.n_points"))

    s0 = raw.get("s0", "zero")
    if s0 != "zero":
        raise ConfigError(f"s0 must be \"zero\", got {s0!r}")

    out_raw = _require(raw, "outputs", "")
    if not isinstance(out_raw, dict):
        raise ConfigError("outputs must be an object")
    _reject_unknown(out_raw, _OUTPUT_KEYS, "outputs")
    csv_path = _require(out_raw, "csv_path", "outputs")
    if not isinstance(csv_path, str) or not csv_path:
        raise ConfigError("outputs.csv_path must be a nonempty string")
    plot_path = out_raw.get("plot_script_path")
    if plot_path is not None and (not isinstance(plot_path, str) or not plot_path):
        raise ConfigError("outputs.plot_script_path must be a nonempty string")

    compare = None
    if "compare" in raw:
        cmp_raw = raw["compare"]
        if not isinstance(cmp_raw, dict):
            raise ConfigError("compare must be an object")
        _reject_unknown(cmp_raw, _COMPARE_KEYS, "compare")
        defaults = default_oracle_config(times, n_points)
        compare = OracleConfig(
            n_cells=int(_number(cmp_raw.get("n_cells", defaults.n_cells), "compare.n_cells")),
            dt=_number(cmp_raw.get("dt", defaults.dt), "compare.dt"),
            scheme=cmp_raw.get("scheme", defaults.scheme),
        )

    return RunConfig(material=material, profile=profile, times=times, csv_path=csv_path,
                     n_modes=n_modes, n_points=n_points, s0="zero",
                     plot_script_path=plot_path, compare=compare)


def serialize_config(config: RunConfig) -> str:
    """JSON text that parses back to an equal RunConfig."""
    raw: dict = {
        "material": {
            "rho": config.material.rho,
            "c_v": config.material.c_v,
            "conductivity": config.material.conductivity,
            "tau": config.material.tau,
            "domain_length": config.material.domain_length,
        },
        "profile": [{"from": s.start, "to": s.end, "value": s.value}
                    for s in config.profile.segments],
        "grid": {"n_modes": config.n_modes, "n_points": config.n_points},
        "times": list(config.times),
        "s0": config.s0,
        "outputs": {"csv_path": config.csv_path},
    }
    if config.plot_script_path is not None:
        raw["outputs"]["plot_script_path"] = config.plot_script_path
    if config.compare is not None:
        raw["compare"] = {"n_cells": config.compare.n_cells, "dt": config.compare.dt,
                          "scheme": config.compare.scheme}
    return json.dumps(raw, indent=2)


def _format_row(t: float, x: float, value: float) -> str:
    return f"{t:.17g},{x:.17g},{value:.17g}"


def _write_csv(path: str, snapshots: Sequence[FieldSnapshot], config: RunConfig,
               value_column: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# n_modes={config.n_modes}\n")
            fh.write(f"# n_points={config.n_points}\n")
            fh.write(f"t,x,{value_column}\n")
            for snap in snapshots:
                for x, v in zip(snap.xs, snap.temps):
                    fh.write(_format_row(snap.t, float(x), float(v)) + "\n")
    except BaseException:
        if os.path.exists(path):
            os.unlink(path)
        raise


def _write_plot_script(path: str, csv_path: str, times: Sequence[float]) -> None:
    lines = [
        "# temperature snapshots; render with: gnuplot -persist " + path,
        "set datafile separator ','",
        "set xlabel 'system size [a.u.]'",
        "set ylabel 'temperature [°C]'",
        "set key top left",
    ]
    curves = []
    for t in times:
        label = f"{t:.17g}"
        curves.append(f"  '{csv_path}' using 2:(strcol(1) eq '{label}' ? $3 : 1/0) "
                      f"with lines title 't = {t:g} s'")
    lines.append("plot \\")
    lines.append(", \\\n".join(curves))
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except BaseException:
        if os.path.exists(path):
            os.unlink(path)
        raise


def _fd_sibling_path(csv_path: str) -> str:
    stem, ext = os.path.splitext(csv_path)
    return f"{stem}_fd{ext or '.csv'}"


def run(config: RunConfig, force_compare: bool = False, quiet: bool = False) -> None:
    """Solve, write artifacts, and (optionally) report oracle metrics.

    Raises on any failure; partially written files are removed.  The
    comparison initializes the oracle from the truncated-series t = 0
    field so that both solvers integrate the same initial data and the
    reported numbers measure method error alone.
    """
    grid = build_grid(config.material.domain_length, config.n_modes, config.n_points)
    snapshots = solve_field(config.material, config.profile, grid, config.times, s0=config.s0)

    comparisons = None
    if force_compare or config.compare is not None:
        oracle_cfg = config.compare or default_oracle_config(config.times, config.n_points)
        band_limited = lambda xs: truncated_profile_field(config.profile, config.n_modes, xs)
        fd_snaps = fd_solve(config.material, band_limited, oracle_cfg, config.times,
                            sample_xs=grid.xs)
        comparisons = [(spec.t, l2_difference(spec, fd), fd)
                       for spec, fd in zip(snapshots, fd_snaps)]

    _write_csv(config.csv_path, snapshots, config, "temperature")
    if not quiet:
        print(f"wrote {config.csv_path}")
    if comparisons is not None:
        fd_path = _fd_sibling_path(config.csv_path)
        _write_csv(fd_path, [fd for _, _, fd in comparisons], config, "temperature_fd")
        if not quiet:
            print(f"wrote {fd_path}")
        for t, rel, _ in comparisons:
            print(f"t={t:g} rel_L2={rel:.6e}")
    if config.plot_script_path is not None:
        _write_plot_script(config.plot_script_path, config.csv_path, config.times)
        if not quiet:
            print(f"wrote {config.plot_script_path}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vheat",
        description="Spectral solver for 1-D Fourier / telegrapher-type heat conduction")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (("run", "solve the configured problem and write CSV snapshots"),
                        ("compare", "run and force a finite-difference oracle comparison")):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("config", help="path to JSON configuration")
        p.add_argument("--modes", type=int, default=None,
                       help=f"override grid.n_modes (default {DEFAULT_N_MODES})")
        p.add_argument("--points", type=int, default=None,
                       help=f"override grid.n_points (default {DEFAULT_N_POINTS})")
        p.add_argument("--quiet", action="store_true", help="suppress informational output")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, "rb") as fh:
            config = parse_config(fh.read())
        if args.modes is not None:
            config = dataclasses.replace(config, n_modes=args.modes)
        if args.points is not None:
            config = dataclasses.replace(config, n_points=args.points)
        run(config, force_compare=(args.command == "compare"), quiet=args.quiet)
    except (VheatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

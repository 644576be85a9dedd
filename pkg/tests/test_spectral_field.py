import numpy as np
import pytest

from vheat.errors import GridMismatchError, ParameterError, SymmetryError
from vheat.model import MaterialParams
from vheat.profile import PiecewiseProfile
from vheat.spectral_field import (FieldSnapshot, build_grid, l2_difference, solve_field,
                                  spatial_mean, truncated_profile_field)


class TestBuildGrid:
    def test_symmetric_modes_and_uniform_points(self):
        grid = build_grid(1.0, 2, 4)
        assert np.allclose(grid.wavenumbers, 2.0 * np.pi * np.array([-2, -1, 0, 1, 2]))
        assert np.allclose(grid.xs, [0.0, 0.25, 0.5, 0.75])

    def test_length_scales_wavenumbers(self):
        grid = build_grid(2.0, 1, 2)
        assert np.allclose(grid.wavenumbers, np.pi * np.array([-1, 0, 1]))

    def test_invalid_counts(self):
        with pytest.raises(ParameterError):
            build_grid(1.0, 2, 0)
        with pytest.raises(ParameterError):
            build_grid(1.0, 0, 16)
        with pytest.raises(ParameterError):
            build_grid(-1.0, 2, 16)


class TestSnapshots:
    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ParameterError):
            FieldSnapshot(t=0.0, xs=np.arange(3.0), temps=np.arange(4.0))

    def test_spatial_mean(self):
        snap = FieldSnapshot(t=0.0, xs=np.arange(2.0), temps=np.array([4.0, 6.0]))
        assert spatial_mean(snap) == 5.0
        const = FieldSnapshot(t=0.0, xs=np.arange(4.0), temps=np.full(4, 7.0))
        assert spatial_mean(const) == 7.0

    def test_l2_difference(self):
        xs = np.arange(8.0)
        a = FieldSnapshot(t=0.0, xs=xs, temps=np.full(8, 11.0))
        b = FieldSnapshot(t=0.0, xs=xs, temps=np.full(8, 10.0))
        assert l2_difference(a, b) == pytest.approx(0.1, rel=1e-12)
        assert l2_difference(a, a) == 0.0
        other = FieldSnapshot(t=0.0, xs=xs + 1.0, temps=np.full(8, 10.0))
        with pytest.raises(GridMismatchError):
            l2_difference(a, other)


class TestSolveField:
    def test_uniform_profile_stays_constant(self, silicon):
        uniform = PiecewiseProfile.from_tuples([(0.0, 1.0, 7.0)])
        grid = build_grid(1.0, 32, 64)
        for snap in solve_field(silicon, uniform, grid, [0.0, 1.0, 10.0]):
            assert np.allclose(snap.temps, 7.0, atol=1e-10)

    def test_initial_snapshot_matches_direct_series(self, silicon, bar_profile):
        # independent oracle for the truncated sum: plain vectorized
        # evaluation of (1/L) sum T0(k_n) exp(i k_n x)
        grid = build_grid(1.0, 96, 128)
        snap = solve_field(silicon, bar_profile, grid, [0.0])[0]
        ks = grid.wavenumbers
        t0 = np.array([bar_profile.transform(k).value for k in ks])
        direct = (t0[None, :] * np.exp(1j * np.outer(grid.xs, ks))).sum(axis=1).real
        assert np.allclose(snap.temps, direct, atol=1e-10)

    def test_initial_snapshot_converges_to_profile_away_from_jumps(self, silicon, bar_profile):
        grid = build_grid(1.0, 512, 1024)
        snap = solve_field(silicon, bar_profile, grid, [0.0])[0]
        samples = np.array([bar_profile.sample(float(x)) for x in grid.xs])
        breakpoints = np.array([0.0, 0.3, 0.7, 1.0])
        dist = np.abs(grid.xs[:, None] - breakpoints[None, :])
        dist = np.minimum(dist, 1.0 - dist).min(axis=1)
        err = np.abs(snap.temps - samples)
        # measured truncation error of the N=512 partial sum at this
        # distance band is 0.0719; it shrinks to 0.028 at 0.05*L
        assert err[dist >= 0.02].max() <= 0.075
        assert err[dist >= 0.05].max() <= 0.03

    def test_mean_is_conserved(self, silicon, bar_profile):
        grid = build_grid(1.0, 128, 256)
        for snap in solve_field(silicon, bar_profile, grid, [0.0, 2.0, 8.0, 30.0]):
            assert abs(spatial_mean(snap) - 11.5) <= 1e-8 * 11.5

    def test_maximum_principle_after_smoothing(self, silicon, bar_profile):
        grid = build_grid(1.0, 512, 1024)
        for snap in solve_field(silicon, bar_profile, grid, [0.5, 2.0, 8.0, 30.0]):
            assert snap.temps.min() >= 5.0 - 0.5
            assert snap.temps.max() <= 20.0 + 0.5

    def test_mode_doubling_halves_truncation_error(self, silicon, bar_profile):
        t = 0.1
        coarse = solve_field(silicon, bar_profile, build_grid(1.0, 64, 1024), [t])[0]
        coarse_ref = solve_field(silicon, bar_profile, build_grid(1.0, 256, 1024), [t])[0]
        fine = solve_field(silicon, bar_profile, build_grid(1.0, 128, 1024), [t])[0]
        fine_ref = solve_field(silicon, bar_profile, build_grid(1.0, 512, 1024), [t])[0]
        err_coarse = l2_difference(coarse, coarse_ref)
        err_fine = l2_difference(fine, fine_ref)
        assert err_fine <= 0.5 * err_coarse

    def test_imaginary_residual_metadata(self, silicon, bar_profile):
        grid = build_grid(1.0, 64, 128)
        for snap in solve_field(silicon, bar_profile, grid, [0.0, 1.0]):
            assert snap.imag_residual <= 1e-9

    def test_asymmetric_s0_raises_symmetry_error(self, silicon, bar_profile):
        grid = build_grid(1.0, 16, 64)
        s0 = np.zeros(33, dtype=complex)
        s0[16 + 3] = 1e6  # +k entry without the conjugate -k partner
        with pytest.raises(SymmetryError):
            solve_field(silicon, bar_profile, grid, [0.0, 2.0], s0=s0)

    def test_hermitian_explicit_s0_accepted(self, silicon, bar_profile):
        grid = build_grid(1.0, 16, 64)
        s0 = np.zeros(33, dtype=complex)
        s0[16 + 3] = 1e5 * (1.0 + 0.5j)
        s0[16 - 3] = 1e5 * (1.0 - 0.5j)
        snaps = solve_field(silicon, bar_profile, grid, [0.0, 2.0], s0=s0)
        assert snaps[0].imag_residual <= 1e-9

    def test_input_validation(self, silicon, bar_profile):
        grid = build_grid(1.0, 8, 16)
        with pytest.raises(ParameterError):
            solve_field(silicon, bar_profile, grid, [])
        with pytest.raises(ParameterError):
            solve_field(silicon, bar_profile, grid, [2.0, 1.0])
        with pytest.raises(ParameterError):
            solve_field(silicon, bar_profile, grid, [-1.0])
        with pytest.raises(ParameterError):
            solve_field(silicon, bar_profile, grid, [0.0], s0="nonzero")
        with pytest.raises(ParameterError):
            solve_field(silicon, bar_profile, grid, [0.0], s0=np.zeros(5, dtype=complex))
        short = PiecewiseProfile.from_tuples([(0.0, 0.5, 1.0)])
        with pytest.raises(ParameterError):
            solve_field(silicon, short, grid, [0.0])

    def test_worker_count_does_not_change_results(self, silicon, bar_profile):
        grid = build_grid(1.0, 192, 256)
        serial = solve_field(silicon, bar_profile, grid, [0.0, 2.0], workers=1)
        threaded = solve_field(silicon, bar_profile, grid, [0.0, 2.0], workers=4)
        for a, b in zip(serial, threaded):
            assert np.array_equal(a.temps, b.temps)

    def test_thread_env_cap(self, silicon, bar_profile, monkeypatch):
        grid = build_grid(1.0, 32, 64)
        monkeypatch.setenv("VHEAT_THREADS", "2")
        snaps = solve_field(silicon, bar_profile, grid, [1.0])
        assert len(snaps) == 1
        monkeypatch.setenv("VHEAT_THREADS", "two")
        with pytest.raises(ParameterError):
            solve_field(silicon, bar_profile, grid, [1.0])


def test_truncated_profile_field_matches_t0_snapshot(silicon, bar_profile):
    grid = build_grid(1.0, 64, 128)
    snap = solve_field(silicon, bar_profile, grid, [0.0])[0]
    direct = truncated_profile_field(bar_profile, 64, grid.xs)
    assert np.allclose(snap.temps, direct, atol=1e-11)

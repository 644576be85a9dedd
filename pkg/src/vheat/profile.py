"""Piecewise-constant initial temperature profiles and their spectral content.

A profile is a list of constant-temperature segments covering [0, L]
without gaps.  Its continuous spatial Fourier transform

    T0(k) = integral_0^L T(x) * exp(-i*k*x) dx

has the exact closed form ``-i*C*(exp(-i*k*a) - exp(-i*k*b))/k`` per
segment (a, b, C), which is what this module evaluates; no numerical
quadrature is involved outside the test oracles.
"""

from __future__ import annotations

import cmath
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParameterError

#: Below |k|*L = SMALL_K_SWITCH the direct formula divides two tiny
#: quantities and loses ~8 digits; a short Taylor series is used instead.
SMALL_K_SWITCH = 1e-4
_SERIES_TERMS = 4


@dataclass(frozen=True)
class Segment:
    """One constant block: temperature ``value`` on [start, end)."""

    start: float
    end: float
    value: float


@dataclass(frozen=True)
class SpectralAmplitude:
    """Complex transform value at one wavenumber."""

    k: float
    value: complex


@dataclass(frozen=True)
class PiecewiseProfile:
    """Piecewise-constant temperature profile on [0, L].

    Segments must be sorted, contiguous, start at 0 and have finite
    values.  Sampling follows the half-open convention: an interior
    breakpoint belongs to the segment to its right, and x = L returns
    the last segment's value.
    """

    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = self.segments
        if not segs:
            raise ParameterError("profile needs at least one segment")
        if segs[0].start != 0.0:
            raise ParameterError(f"profile must start at 0, got {segs[0].start!r}")
        for seg in segs:
            if not (math.isfinite(seg.start) and math.isfinite(seg.end) and math.isfinite(seg.value)):
                raise ParameterError(f"segment {seg} has a non-finite field")
            if not seg.start < seg.end:
                raise ParameterError(f"segment {seg} must have start < end")
        for left, right in zip(segs, segs[1:]):
            if left.end < right.start:
                raise ParameterError(f"profile has a gap: [{left.end}, {right.start})")
            if left.end > right.start:
                raise ParameterError(f"profile segments overlap at [{right.start}, {left.end})")

    @classmethod
    def from_tuples(cls, tuples: Iterable[tuple[float, float, float]]) -> "PiecewiseProfile":
        return cls(tuple(Segment(float(a), float(b), float(c)) for a, b, c in tuples))

    @property
    def length(self) -> float:
        """Domain length L = end of the last segment."""
        return self.segments[-1].end

    @property
    def integral(self) -> float:
        """Integral of the profile over [0, L]; equals T0(0)."""
        return sum(s.value * (s.end - s.start) for s in self.segments)

    def sample(self, x: float) -> float:
        """Temperature at position x in [0, L]."""
        if not (0.0 <= x <= self.length):
            raise ParameterError(f"position {x!r} outside [0, {self.length}]")
        starts = [s.start for s in self.segments]
        return self.segments[bisect_right(starts, x) - 1].value

    def transform(self, k: float) -> SpectralAmplitude:
        """Exact continuous Fourier transform T0(k) of the profile.

        Negative k is mirrored through the Hermitian symmetry
        T0(-k) = conj(T0(k)), which holds exactly for real-valued
        profiles; computing it that way preserves the symmetry to the
        last bit in floating point.
        """
        if not math.isfinite(k):
            raise ParameterError(f"wavenumber must be finite, got {k!r}")
        if k < 0:
            return SpectralAmplitude(k, self._transform_nonneg(-k).conjugate())
        return SpectralAmplitude(k, self._transform_nonneg(k))

    def transform_grid(self, ks: Sequence[float]) -> list[SpectralAmplitude]:
        """Elementwise transform over a wavenumber grid."""
        return [self.transform(float(k)) for k in ks]

    def _transform_nonneg(self, k: float) -> complex:
        if k == 0.0:
            return complex(self.integral)
        if k * self.length < SMALL_K_SWITCH:
            return self._transform_series(k)
        total = 0.0 + 0.0j
        for seg in self.segments:
            total += -1j * seg.value * (cmath.exp(-1j * k * seg.start) - cmath.exp(-1j * k * seg.end)) / k
        return total

    def _transform_series(self, k: float) -> complex:
        # integral_a^b exp(-i*k*x) dx = sum_n (-i*k)^n (b^(n+1)-a^(n+1)) / (n+1)!
        total = 0.0 + 0.0j
        for seg in self.segments:
            term = 0.0 + 0.0j
            power = 1.0 + 0.0j
            factorial = 1.0
            for n in range(_SERIES_TERMS):
                factorial *= n + 1
                term += power * (seg.end ** (n + 1) - seg.start ** (n + 1)) / factorial
                power *= -1j * k
            total += seg.value * term
        return total

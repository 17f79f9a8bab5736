"""Two-grating Mach-Zehnder atom interferometer in the imaging-theorem picture.

Intensities are in arbitrary units: the single-slit envelope and overall
constants of the grating transform are dropped, so only ratios, periods and
visibilities are meaningful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .units import HBAR

MIN_SAMPLES_PER_PERIOD = 16


@dataclass(frozen=True)
class GratingSpec:
    n_slits: int
    period: float
    p0: float

    def __post_init__(self):
        if int(self.n_slits) != self.n_slits or self.n_slits < 2:
            raise ValidationError(f"need at least two slits, got {self.n_slits}")
        if not self.period > 0:
            raise ValidationError("grating period must be positive")
        if not self.p0 > 0:
            raise ValidationError("beam momentum must be positive")

    @property
    def p_g(self) -> float:
        """Grating momentum 2 pi hbar / d."""
        return 2.0 * math.pi * HBAR / self.period


@dataclass(frozen=True)
class InterferometerGeometry:
    """Grating separation ``L``, path separation ``w`` and de Broglie wavelength.

    ``w`` may be left out; it is then implied by ``w / L = lambda / d``.
    """

    L: float
    wavelength: float
    w: float | None = None

    def __post_init__(self):
        if not (self.L > 0 and self.wavelength > 0):
            raise ValidationError("L and wavelength must be positive")
        if self.w is not None and not self.w > 0:
            raise ValidationError("w must be positive")

    @property
    def p0(self) -> float:
        return 2.0 * math.pi * HBAR / self.wavelength

    def separation(self, spec: GratingSpec) -> float:
        return self.w if self.w is not None else self.L * self.wavelength / spec.period

    def time_of_flight(self, mass: float) -> float:
        """Flight time from the first grating to the recombination plane, 2L/(p0/m)."""
        return 2.0 * self.L * mass / self.p0


@dataclass(frozen=True)
class GeometryCheck:
    lambda_over_d: float
    pg_over_p0: float
    w_over_L: float
    rtol: float

    @property
    def max_relative_deviation(self) -> float:
        ref = self.lambda_over_d
        return max(abs(self.pg_over_p0 / ref - 1), abs(self.w_over_L / ref - 1))

    @property
    def passed(self) -> bool:
        return self.max_relative_deviation <= self.rtol


@dataclass(frozen=True)
class FringeProfile:
    x_samples: np.ndarray
    intensity: np.ndarray
    period: float

    def peak_positions(self) -> np.ndarray:
        """Local maxima refined by a parabola through the three nearest samples."""
        y = self.intensity
        idx = np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])) + 1
        dx = self.x_samples[1] - self.x_samples[0]
        a, b, c = y[idx - 1], y[idx], y[idx + 1]
        denom = a - 2 * b + c
        shift = np.where(denom != 0, 0.5 * (a - c) / np.where(denom != 0, denom, 1), 0.0)
        return self.x_samples[idx] + shift * dx

    def measured_period(self) -> float:
        peaks = self.peak_positions()
        if peaks.size < 2:
            raise ValidationError("need at least two fringe maxima to measure a period")
        return float(np.mean(np.diff(peaks)))

    def visibility(self) -> float:
        hi, lo = float(self.intensity.max()), float(self.intensity.min())
        return (hi - lo) / (hi + lo)


def check_geometry(
    spec: GratingSpec, geometry: InterferometerGeometry, rtol: float = 1e-9
) -> GeometryCheck:
    """Compare lambda/d, p_g/p0 and w/L (with ``spec.p0`` as the beam momentum)."""
    return GeometryCheck(
        geometry.wavelength / spec.period,
        spec.p_g / spec.p0,
        geometry.separation(spec) / geometry.L,
        rtol,
    )


def grating_momentum_wf(spec: GratingSpec, p_x):
    """Multi-slit factor ``sin(N p d/2hbar) / sin(p d/2hbar)``.

    The phase of each principal maximum is referenced to the grating origin
    so that every diffraction order has the value ``+N`` (for even ``N`` the
    bare ratio alternates sign between orders). The factor is periodic in
    ``p_x`` with period ``p_g``.
    """
    n = spec.n_slits
    phi = np.asarray(p_x, dtype=float) * spec.period / (2.0 * HBAR)
    eps = phi - np.pi * np.round(phi / np.pi)
    s = np.sin(eps)
    small = np.abs(s) < 1e-12
    safe = np.where(small, 1.0, s)
    out = np.where(small, float(n), np.sin(n * eps) / safe)
    return out if out.ndim else float(out)


def _path_actions(spec: GratingSpec, geometry: InterferometerGeometry, x, t, mass):
    """Zeroth-order action and the arm difference ``S^(0) - S^(1) = p_g x``.

    The difference is returned separately: ``S^(0)`` is macroscopically large
    and subtracting two such numbers would round away the fringe phase.
    """
    x = np.asarray(x, dtype=float)
    s0 = mass * ((2.0 * geometry.L) ** 2 + x ** 2) / (2.0 * t)
    return s0, spec.p_g * x


def two_path_superposition(
    spec: GratingSpec,
    geometry: InterferometerGeometry,
    x,
    t: float,
    mass: float = 1.0,
):
    """IT amplitude from the zeroth- and first-order trajectories at screen position ``x``."""
    expected = geometry.time_of_flight(mass)
    if abs(t - expected) > 1e-9 * expected:
        raise ValidationError(f"time of flight {t} inconsistent with 2L m/p0 = {expected}")
    if abs(spec.p0 - geometry.p0) > 1e-9 * geometry.p0:
        raise ValidationError("grating beam momentum disagrees with the de Broglie wavelength")
    s0, delta = _path_actions(spec, geometry, x, t, mass)
    a0 = grating_momentum_wf(spec, 0.0)
    a1 = grating_momentum_wf(spec, spec.p_g)
    prefactor = (mass / (1j * t)) ** 1.5
    return prefactor * np.exp(1j * s0 / HBAR) * (a0 + np.exp(-1j * delta / HBAR) * a1)


def fringe_intensity(spec: GratingSpec, geometry: InterferometerGeometry, x):
    """Closed form ``(p0/2L)^3 2 N^2 [1 + cos(2 pi x / d)]``."""
    x = np.asarray(x, dtype=float)
    return (
        (spec.p0 / (2 * geometry.L)) ** 3
        * 2
        * spec.n_slits ** 2
        * (1 + np.cos(2 * math.pi * x / spec.period))
    )


def fringe_profile(
    spec: GratingSpec,
    geometry: InterferometerGeometry,
    x_range: tuple[float, float],
    n_samples: int,
    mass: float = 1.0,
) -> FringeProfile:
    x_lo, x_hi = x_range
    if not x_hi > x_lo:
        raise ValidationError("empty x range")
    per_period = (n_samples - 1) * spec.period / (x_hi - x_lo)
    if per_period < MIN_SAMPLES_PER_PERIOD:
        raise ValidationError(
            f"{per_period:.1f} samples per fringe period; need >= {MIN_SAMPLES_PER_PERIOD}"
        )
    x = np.linspace(x_lo, x_hi, n_samples)
    amp = two_path_superposition(spec, geometry, x, geometry.time_of_flight(mass), mass)
    return FringeProfile(x, np.abs(amp) ** 2, spec.period)


def path_phase_difference(spec: GratingSpec, geometry, x, mass: float = 1.0):
    """``S^(0) - S^(1)`` between the two arms at screen position ``x``."""
    return _path_actions(spec, geometry, x, geometry.time_of_flight(mass), mass)[1]


"""Grids, wavepackets and the position <-> momentum transform.

Conventions used throughout the package:

* atomic units, hbar = 1; the particle mass is always an explicit argument;
* the momentum wavefunction is the symmetric physics transform

      psi_p(p) = (2 pi hbar)^(-1/2) * integral exp(-i p z / hbar) psi(z) dz

  so a normalized state has unit norm in either representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import AliasingError, ExtrapolationError, ValidationError
from .units import HBAR

EDGE_THRESHOLD = 1e-8
MIN_POINTS = 16


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = HBAR
    mass: float = 1.0

    def __post_init__(self):
        if self.hbar != HBAR:
            raise ValidationError("hbar is fixed at 1 (atomic units)")
        if not self.mass > 0:
            raise ValidationError(f"mass must be positive, got {self.mass}")


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid ``z_k = z_min + k*dz``, ``k = 0..n_points-1``.

    ``z_max`` itself is not a sample point; it is identified with ``z_min``.
    """

    z_min: float
    z_max: float
    n_points: int

    def __post_init__(self):
        if not (np.isfinite(self.z_min) and np.isfinite(self.z_max)):
            raise ValidationError("grid bounds must be finite")
        if not self.z_max > self.z_min:
            raise ValidationError(f"degenerate interval [{self.z_min}, {self.z_max}]")
        n = self.n_points
        if int(n) != n or n < MIN_POINTS:
            raise ValidationError(f"n_points must be an integer >= {MIN_POINTS}, got {n}")
        if n & (n - 1):
            raise ValidationError(f"n_points must be a power of two, got {n}")

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / self.n_points

    @property
    def length(self) -> float:
        return self.z_max - self.z_min

    @property
    def z(self) -> np.ndarray:
        return self.z_min + self.dz * np.arange(self.n_points)

    @property
    def dp(self) -> float:
        return 2.0 * np.pi * HBAR / (self.n_points * self.dz)

    @property
    def p(self) -> np.ndarray:
        """Conjugate momenta in ascending order."""
        n = self.n_points
        return self.dp * (np.arange(n) - n // 2)

    @property
    def p_nyquist(self) -> float:
        return np.pi * HBAR / self.dz


def make_grid(z_min: float, z_max: float, n_points: int) -> Grid:
    return Grid(float(z_min), float(z_max), int(n_points))


@dataclass(frozen=True)
class Wavepacket:
    grid: Grid
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n_points,):
            raise ValidationError(
                f"expected {self.grid.n_points} amplitudes, got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def z(self) -> np.ndarray:
        return self.grid.z

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __call__(self, z):
        """Cubic interpolation of the complex amplitude at ``z``."""
        zz = np.asarray(z, dtype=float)
        g = self.grid
        if np.any(zz < g.z_min) or np.any(zz > g.z[-1]):
            raise ExtrapolationError("position outside the wavepacket grid")
        re = CubicSpline(g.z, self.amplitudes.real)(zz)
        im = CubicSpline(g.z, self.amplitudes.imag)(zz)
        return re + 1j * im


@dataclass(frozen=True)
class MomentumSpectrum:
    p_values: np.ndarray
    amplitudes: np.ndarray
    time: float = 0.0
    grid: Grid | None = field(default=None, compare=False)

    def __post_init__(self):
        p = np.asarray(self.p_values, dtype=float)
        a = np.asarray(self.amplitudes, dtype=complex)
        if p.shape != a.shape or p.ndim != 1:
            raise ValidationError("p_values and amplitudes must be 1D and aligned")
        if np.any(np.diff(p) <= 0):
            raise ValidationError("p_values must be strictly increasing")
        p.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "p_values", p)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "_splines", None)

    @property
    def dp(self) -> float:
        return float(self.p_values[1] - self.p_values[0])

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sum(self.density) * self.dp)

    def __call__(self, p):
        """Cubic interpolation of the complex momentum amplitude."""
        pp = np.asarray(p, dtype=float)
        lo, hi = self.p_values[0], self.p_values[-1]
        if np.any(pp < lo) or np.any(pp > hi):
            raise ExtrapolationError(f"momentum outside spectrum support [{lo}, {hi}]")
        if self._splines is None:
            object.__setattr__(
                self,
                "_splines",
                (
                    CubicSpline(self.p_values, self.amplitudes.real),
                    CubicSpline(self.p_values, self.amplitudes.imag),
                ),
            )
        re, im = self._splines
        return re(pp) + 1j * im(pp)

    def momentum_width(self) -> float:
        """``sqrt(2 var_p)``; equals ``hbar/sigma`` for a Gaussian of position width sigma."""
        rho = self.density
        w = rho / rho.sum()
        mean = np.sum(w * self.p_values)
        return float(np.sqrt(2.0 * np.sum(w * (self.p_values - mean) ** 2)))

    def position_width(self) -> float:
        """Position width ``sigma`` of the Gaussian with the same momentum variance."""
        return HBAR / self.momentum_width()


def _check_edges(amplitudes: np.ndarray, threshold: float = EDGE_THRESHOLD) -> None:
    edge = max(abs(amplitudes[0]), abs(amplitudes[-1]))
    if edge >= threshold:
        raise AliasingError(
            f"edge amplitude {edge:.3e} exceeds {threshold:.0e}; enlarge the grid"
        )


def to_momentum(psi: Wavepacket, check_edges: bool = True) -> MomentumSpectrum:
    g = psi.grid
    if check_edges:
        _check_edges(psi.amplitudes)
    n = g.n_points
    p_fft = 2.0 * np.pi * HBAR * np.fft.fftfreq(n, d=g.dz)
    phase = np.exp(-1j * p_fft * g.z_min / HBAR)
    phi = np.fft.fft(psi.amplitudes) * phase * g.dz / np.sqrt(2.0 * np.pi * HBAR)
    return MomentumSpectrum(
        np.fft.fftshift(p_fft), np.fft.fftshift(phi), psi.time, grid=g
    )


def from_momentum(spectrum: MomentumSpectrum, grid: Grid | None = None) -> Wavepacket:
    g = grid if grid is not None else spectrum.grid
    if g is None:
        raise ValidationError("spectrum carries no grid; pass one explicitly")
    if g.n_points != spectrum.p_values.size or not np.allclose(
        spectrum.p_values, g.p, rtol=0, atol=1e-12 * g.dp
    ):
        raise ValidationError("spectrum is not conjugate to the requested grid")
    phi = np.fft.ifftshift(spectrum.amplitudes)
    p_fft = np.fft.ifftshift(spectrum.p_values)
    phase = np.exp(1j * p_fft * g.z_min / HBAR)
    amps = np.fft.ifft(phi * phase) * np.sqrt(2.0 * np.pi * HBAR) / g.dz
    return Wavepacket(g, amps, spectrum.time)


def norm(psi: Wavepacket) -> float:
    """Integral of |psi|^2.

    On a periodic grid the trapezoidal rule reduces to ``dz * sum``.
    """
    return float(np.sum(psi.density) * psi.grid.dz)

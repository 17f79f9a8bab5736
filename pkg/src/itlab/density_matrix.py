"""Position-space density matrix of the free imaging-theorem state.

With ``v = z_f/t``, ``v' = z_f'/t`` and ``V = hbar/(m sigma)`` the product of
two IT amplitudes is

    rho(z_f, z_f', t) = exp(-(v^2 + v'^2) / 2V^2) / (sqrt(pi) V t) * exp(-i Omega t),
    Omega = (v^2 - v'^2) / (2 V sigma).

The envelope carries the sum ``v^2 + v'^2``: it comes straight from the
product ``psi* psi'``, and a difference in its place would be unbounded
for ``|v'| > |v|``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import PreAsymptoticWarning, ValidationError
from .exact import GaussianSpec
from .semiclassical import free_it_amplitude
from .units import HBAR

MIN_SAMPLES_PER_PERIOD = 64


@dataclass(frozen=True)
class DensityMatrixSample:
    v: float
    v_prime: float
    V: float
    sigma: float
    t: float
    value: complex

    @property
    def omega(self) -> float:
        return offdiagonal_frequency(self.v, self.v_prime, self.V, self.sigma)


def width_velocity(spec: GaussianSpec) -> float:
    return HBAR / (spec.mass * spec.sigma)


def offdiagonal_frequency(v: float, v_prime: float, V: float, sigma: float) -> float:
    """Angular frequency ``(v^2 - v'^2) / (2 V sigma)``; sign follows ``v^2 - v'^2``."""
    return (v ** 2 - v_prime ** 2) / (2.0 * V * sigma)


def rho_element(spec: GaussianSpec, z_f: float, z_f_prime: float, t: float) -> DensityMatrixSample:
    if HBAR * t / spec.mass <= spec.sigma ** 2:
        warnings.warn(
            "density matrix of the IT state requested before hbar t/m exceeds sigma^2",
            PreAsymptoticWarning,
            stacklevel=2,
        )
    if z_f == z_f_prime:
        value = complex(abs(complex(free_it_amplitude(spec, z_f, t))) ** 2)
    else:
        value = complex(
            np.conj(free_it_amplitude(spec, z_f, t)) * free_it_amplitude(spec, z_f_prime, t)
        )
    return DensityMatrixSample(z_f / t, z_f_prime / t, width_velocity(spec), spec.sigma, t, value)


def rho_series(spec: GaussianSpec, z_f, z_f_prime, times) -> np.ndarray:
    """Vectorised ``rho`` over arrays of positions and times (no regime warning)."""
    return np.conj(free_it_amplitude(spec, z_f, times)) * free_it_amplitude(spec, z_f_prime, times)


def rho_at_velocities(spec: GaussianSpec, v: float, v_prime: float, times) -> np.ndarray:
    """``rho`` along the rays ``z = v t``, ``z' = v' t`` where the phase is exactly ``-Omega t``."""
    times = np.asarray(times, dtype=float)
    return rho_series(spec, v * times, v_prime * times, times)


def time_average_offdiagonal(
    spec: GaussianSpec,
    z_f: float,
    z_f_prime: float,
    t_center: float,
    window: float,
    n_samples: int | None = None,
) -> complex:
    """Mean of ``rho(z_f, z_f', t)`` over ``[t_center - window/2, t_center + window/2]``.

    Composite Simpson quadrature with at least 64 samples per oscillation
    period (period taken at ``t_center``).
    """
    if window < 0:
        raise ValidationError("window must be non-negative")
    if window == 0:
        return rho_element(spec, z_f, z_f_prime, t_center).value
    t_lo = t_center - window / 2
    if t_lo <= 0:
        raise ValidationError("averaging window reaches t <= 0")
    if HBAR * t_lo / spec.mass <= spec.sigma ** 2:
        warnings.warn("averaging window starts before the IT regime", PreAsymptoticWarning,
                      stacklevel=2)
    V = width_velocity(spec)
    omega = abs(offdiagonal_frequency(z_f / t_center, z_f_prime / t_center, V, spec.sigma))
    n_periods = window * omega / (2 * math.pi)
    needed = max(129, math.ceil(MIN_SAMPLES_PER_PERIOD * n_periods) + 1)
    if n_samples is None:
        n_samples = needed + (1 - needed % 2)
    elif n_samples < needed:
        raise ValidationError(
            f"{n_samples} samples undersample {n_periods:.1f} periods "
            f"(need {MIN_SAMPLES_PER_PERIOD} per period)"
        )
    times = np.linspace(t_lo, t_center + window / 2, n_samples)
    values = rho_series(spec, z_f, z_f_prime, times)
    return complex(simpson(values, x=times) / window)


def extract_frequency(times, values) -> float:
    """Angular frequency ``w`` of the dominant ``exp(-i w t)`` component.

    Zero-padded DFT followed by a parabolic fit to the log-magnitude around
    the peak bin. ``times`` must be uniformly spaced.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=complex)
    dt = times[1] - times[0]
    if not np.allclose(np.diff(times), dt, rtol=1e-9, atol=0):
        raise ValidationError("extract_frequency needs uniformly spaced samples")
    n_fft = 1 << max(16, int(math.ceil(math.log2(values.size))) + 4)
    spectrum = np.abs(np.fft.fft(values * np.hanning(values.size), n=n_fft))
    freqs = 2 * math.pi * np.fft.fftfreq(n_fft, d=dt)
    k = int(np.argmax(spectrum))
    a, b, c = (np.log(spectrum[(k + j) % n_fft] + 1e-300) for j in (-1, 0, 1))
    denom = a - 2 * b + c
    shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
    # numpy's forward DFT picks out exp(+i w t) at +w, so negate
    return -(freqs[k] + shift * (freqs[1] - freqs[0]))

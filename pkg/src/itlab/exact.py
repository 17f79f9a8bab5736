"""Exact quantum evolution: analytic Gaussians and a split-operator propagator."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import ForceField
from .core import EDGE_THRESHOLD, Grid, Wavepacket
from .errors import BoundaryError, ValidationError
from .units import HBAR


@dataclass(frozen=True)
class GaussianSpec:
    """Minimum-uncertainty packet ``(pi sigma^2)^(-1/4) exp(-(z-z0)^2/2sigma^2 + i p0 z)``."""

    sigma: float
    z0: float = 0.0
    p0: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if not self.mass > 0:
            raise ValidationError(f"mass must be positive, got {self.mass}")

    def amplitude(self, z):
        z = np.asarray(z, dtype=float)
        s2 = self.sigma ** 2
        return (math.pi * s2) ** -0.25 * np.exp(
            -((z - self.z0) ** 2) / (2 * s2) + 1j * self.p0 * z / HBAR
        )

    def momentum_amplitude(self, p):
        """Analytic transform of :meth:`amplitude` in the package convention."""
        p = np.asarray(p, dtype=float)
        q = p - self.p0
        return (self.sigma ** 2 / (math.pi * HBAR ** 2)) ** 0.25 * np.exp(
            -(q ** 2) * self.sigma ** 2 / (2 * HBAR ** 2) - 1j * q * self.z0 / HBAR
        )

    def momentum_density(self, p):
        return np.abs(self.momentum_amplitude(p)) ** 2

    def regime(self, t):
        """Dimensionless spreading time ``hbar t / (m sigma^2)``."""
        return HBAR * np.asarray(t, dtype=float) / (self.mass * self.sigma ** 2)


@dataclass(frozen=True)
class PropagationPlan:
    field: ForceField
    t_i: float
    t_f: float
    grid: Grid
    dt: float | None = None
    mass: float = 1.0

    def __post_init__(self):
        if not self.t_f >= self.t_i:
            raise ValidationError("need t_f >= t_i")
        if self.dt is not None and not self.dt > 0:
            raise ValidationError("dt must be positive")
        if not self.mass > 0:
            raise ValidationError("mass must be positive")


def default_dt(grid: Grid, mass: float = 1.0) -> float:
    """Largest step keeping the kinetic phase at the Nyquist momentum below pi/4."""
    return (math.pi / 4) * 2.0 * mass * HBAR / grid.p_nyquist ** 2


def gaussian_initial(spec: GaussianSpec, grid: Grid) -> Wavepacket:
    if spec.z0 - 4 * spec.sigma < grid.z_min or spec.z0 + 4 * spec.sigma > grid.z[-1]:
        raise ValidationError("grid must span at least 8 sigma around the packet centre")
    return Wavepacket(grid, spec.amplitude(grid.z), 0.0)


def _require_origin(spec: GaussianSpec) -> None:
    if spec.z0 != 0.0 or spec.p0 != 0.0:
        raise ValidationError(
            "closed forms assume a packet at rest at the origin; use splitstep_propagate"
        )


def free_exact(spec: GaussianSpec, z_f, t):
    """Freely spread Gaussian at time ``t`` after release at rest from the origin."""
    _require_origin(spec)
    if np.any(np.asarray(t) < 0):
        raise ValidationError("t must be non-negative")
    z = np.asarray(z_f, dtype=float)
    s2 = spec.sigma ** 2
    tau = HBAR * np.asarray(t, dtype=float) / spec.mass
    return (
        (s2 / math.pi) ** 0.25
        * (s2 + 1j * tau) ** -0.5
        * np.exp(-0.5 * z ** 2 * (s2 - 1j * tau) / (s2 ** 2 + tau ** 2))
    )


def forced_exact(spec: GaussianSpec, F: float, z_f, t):
    """Gaussian under constant force ``F``: a boosted copy of :func:`free_exact`."""
    z = np.asarray(z_f, dtype=float)
    t = np.asarray(t, dtype=float)
    m = spec.mass
    phase = np.exp(1j * F * t * z / HBAR - 1j * F ** 2 * t ** 3 / (6 * m * HBAR))
    return phase * free_exact(spec, z - F * t ** 2 / (2 * m), t)


def _potential_on_grid(field: ForceField, z: np.ndarray) -> np.ndarray:
    if field.kind == "free":
        return np.zeros_like(z)
    if field.kind == "uniform":
        return -field.F * z
    try:
        v = np.asarray(field.V(z), dtype=float)
        if v.shape == z.shape:
            return v
    except (TypeError, ValueError):
        pass
    return np.array([field.V(float(x)) for x in z])


def splitstep_propagate(psi: Wavepacket, plan: PropagationPlan) -> Wavepacket:
    """Strang-split spectral evolution from ``plan.t_i`` to ``plan.t_f``.

    Each step applies half the potential phase, the exact kinetic phase in
    momentum space, then the second potential half. Raises BoundaryError as
    soon as the edge density reaches ``1e-8``.
    """
    g = plan.grid
    if psi.grid != g:
        raise ValidationError("wavepacket and plan use different grids")
    T = plan.t_f - plan.t_i
    amps = np.array(psi.amplitudes, dtype=complex)
    _check_boundary(amps, plan.t_i)
    if T == 0:
        return Wavepacket(g, amps, plan.t_f)
    dt_target = plan.dt if plan.dt is not None else default_dt(g, plan.mass)
    n = max(1, math.ceil(T / dt_target - 1e-9))
    dt = T / n
    k = 2.0 * math.pi * np.fft.fftfreq(g.n_points, d=g.dz)
    kinetic = np.exp(-1j * HBAR * k ** 2 * dt / (2.0 * plan.mass))
    V = _potential_on_grid(plan.field, g.z)
    if np.any(V):
        half_v = np.exp(-0.5j * V * dt / HBAR)
        full_v = half_v * half_v
        amps *= half_v
        for step in range(n):
            amps = np.fft.ifft(kinetic * np.fft.fft(amps))
            if step < n - 1:
                amps *= full_v
            else:
                amps *= half_v
            _check_boundary(amps, plan.t_i + (step + 1) * dt)
    else:
        for step in range(n):
            amps = np.fft.ifft(kinetic * np.fft.fft(amps))
            _check_boundary(amps, plan.t_i + (step + 1) * dt)
    return Wavepacket(g, amps, plan.t_f)


def _check_boundary(amps: np.ndarray, t: float) -> None:
    edge = max(abs(amps[0]) ** 2, abs(amps[-1]) ** 2)
    if edge >= EDGE_THRESHOLD:
        raise BoundaryError(f"edge density {edge:.3e} at t={t:g}; enlarge the grid")

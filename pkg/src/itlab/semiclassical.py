"""Semiclassical propagators and the imaging-theorem (IT) wavefunction.

Far from the source, a wavepacket released at ``z_i`` looks like the initial
momentum wavefunction evaluated at the launch momentum of the classical
trajectory through ``(z_f, t_f)``, weighted by the semiclassical propagator:

    psi(z_f, t_f) ~ sqrt(2 pi hbar) * K_sc(z_f, t_f; z_i, t_i) * psi_p(p_i)
    |psi(z_f, t_f)|^2 ~ (dp_i/dz_f) * |psi_p(p_i)|^2
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .classical import (
    CAUSTIC_LIMIT,
    ActionRecord,
    ForceField,
    launch_jacobian,
    van_vleck_jacobian,
)
from .core import MomentumSpectrum, Wavepacket, to_momentum
from .errors import PreAsymptoticWarning, PropagationError, UndefinedRatioError
from .exact import GaussianSpec
from .units import HBAR

MIN_MOMENTUM_DENSITY = 1e-12

MomentumSource = Union[MomentumSpectrum, GaussianSpec, Callable]


@dataclass(frozen=True)
class SemiclassicalAmplitude:
    value: complex
    action: ActionRecord


@dataclass(frozen=True)
class ItPrediction:
    z_f: float
    t_f: float
    p_i: float
    amplitude: complex
    density: float
    classical_density: float


@dataclass(frozen=True)
class DensityRatio:
    """Quantum estimate ``|psi|^2 / |psi_p(p_i)|^2`` next to the classical dp_i/dz_f."""

    ratio: float
    classical_density: float
    pre_asymptotic: bool | None = None

    @property
    def relative_gap(self) -> float:
        return abs(self.ratio / self.classical_density - 1.0)

    def __float__(self):
        return self.ratio


def _momentum_callable(source: MomentumSource):
    """Return (amplitude function, effective position width or None)."""
    if isinstance(source, MomentumSpectrum):
        return source, source.position_width()
    if isinstance(source, GaussianSpec):
        return source.momentum_amplitude, source.sigma
    if callable(source):
        return source, None
    raise TypeError(f"cannot use {type(source).__name__} as a momentum wavefunction")


def semiclassical_propagator(record: ActionRecord) -> SemiclassicalAmplitude:
    """1D coordinate propagator ``(2 pi i hbar)^(-1/2) sqrt(dp_i/dz_f) exp(i S_c/hbar)``."""
    jac = record.dpi_dzf
    if not math.isfinite(jac) or jac <= 0 or jac > CAUSTIC_LIMIT:
        raise PropagationError(f"no semiclassical amplitude at a caustic (dp_i/dz_f={jac})")
    value = (
        cmath.sqrt(jac) / cmath.sqrt(2j * math.pi * HBAR) * cmath.exp(1j * record.S_c / HBAR)
    )
    return SemiclassicalAmplitude(value, record)


def it_wavefunction(
    spectrum: MomentumSource,
    field: ForceField,
    z_i: float,
    z_f: float,
    t_i: float,
    t_f: float,
    mass: float = 1.0,
) -> ItPrediction:
    """Imaging-theorem amplitude at ``(z_f, t_f)`` for any 1D force field.

    ``spectrum`` is the momentum wavefunction at ``t_i``: a sampled
    :class:`MomentumSpectrum` (cubic interpolation), a :class:`GaussianSpec`
    (analytic), or any callable ``p -> amplitude``.
    """
    amp_of, width = _momentum_callable(spectrum)
    if width is not None and HBAR * (t_f - t_i) / mass <= width ** 2:
        warnings.warn(
            f"hbar t/m = {HBAR * (t_f - t_i) / mass:.3g} <= sigma^2 = {width ** 2:.3g}: "
            "outside the imaging regime",
            PreAsymptoticWarning,
            stacklevel=2,
        )
    record = van_vleck_jacobian(field, z_i, z_f, t_i, t_f, mass)
    k_sc = semiclassical_propagator(record)
    p_i = record.trajectory.p_i
    psi_p = complex(amp_of(p_i))
    amplitude = math.sqrt(2 * math.pi * HBAR) * k_sc.value * psi_p
    return ItPrediction(
        float(z_f),
        float(t_f),
        p_i,
        amplitude,
        record.dpi_dzf * abs(psi_p) ** 2,
        record.dpi_dzf,
    )


def free_it_amplitude(spec: GaussianSpec, z_f, t):
    """Closed-form free-particle IT for a packet released from the origin."""
    m = spec.mass
    z = np.asarray(z_f, dtype=float)
    t = np.asarray(t, dtype=float)
    p_i = m * z / t
    return (
        np.sqrt(m / (1j * t))
        * np.exp(1j * m * z ** 2 / (2 * HBAR * t))
        * spec.momentum_amplitude(p_i)
    )


def forced_it_amplitude(spec: GaussianSpec, F: float, z_f, t):
    """Closed-form IT under constant force ``F``.

    Differs from the free IT at the shifted point ``z_f - F t^2/2m`` by a phase only.
    """
    m = spec.mass
    z = np.asarray(z_f, dtype=float)
    t = np.asarray(t, dtype=float)
    p_i = m * (z - F * t ** 2 / (2 * m)) / t
    phase = np.exp(1j * F * t * z / (2 * HBAR) - 1j * F ** 2 * t ** 3 / (24 * m * HBAR))
    return (
        phase
        * np.sqrt(m / (1j * t))
        * np.exp(1j * m * z ** 2 / (2 * HBAR * t))
        * spec.momentum_amplitude(p_i)
    )


def it_density_ratio(
    exact: Wavepacket | complex,
    spectrum: MomentumSource,
    record: ActionRecord,
) -> DensityRatio:
    """``|psi(z_f,t_f)|^2 / |psi_p(p_i,t_i)|^2`` for the trajectory in ``record``.

    ``exact`` is either the propagated wavepacket (interpolated at ``z_f``) or
    the complex amplitude there.
    """
    traj = record.trajectory
    value = exact(traj.z_f) if isinstance(exact, Wavepacket) else exact
    amp_of, width = _momentum_callable(spectrum)
    mom_density = abs(complex(amp_of(traj.p_i))) ** 2
    if mom_density <= MIN_MOMENTUM_DENSITY:
        raise UndefinedRatioError(
            f"momentum density {mom_density:.3e} at p_i={traj.p_i:.4g} is effectively zero"
        )
    pre = None
    if width is not None:
        pre = bool(HBAR * traj.duration / traj.mass <= width ** 2)
    return DensityRatio(abs(complex(value)) ** 2 / mom_density, record.dpi_dzf, pre)


def inverse_it_density(
    psi_initial: Wavepacket,
    field: ForceField,
    p_f: float,
    t_i: float,
    t_f: float,
    mass: float = 1.0,
) -> float:
    """Predicted final momentum density ``|psi_p(p_f, t_f)|^2``.

    For position-dependent forces this is ``|dr_i/dp_f| |psi(r_i, t_i)|^2``
    along the trajectory launched at rest from ``r_i``. Free and uniform
    fields do not couple launch position to final momentum, so the momentum
    density is carried over rigidly: ``p_i = p_f - F (t_f - t_i)``.
    """
    if field.kind in ("free", "uniform"):
        spec = to_momentum(psi_initial)
        p_i = p_f - field.F * (t_f - t_i)
        return float(abs(spec(p_i)) ** 2)
    record = launch_jacobian(field, p_f, t_i, t_f, mass)
    return float(abs(record.dri_dpf) * abs(psi_initial(record.r_i)) ** 2)


@dataclass(frozen=True)
class TransportRow:
    z_f: float
    t_f: float
    p_i: float
    density: float
    dpi_dzf: float
    transported: float
    momentum_density: float
    violation: float


@dataclass(frozen=True)
class TransportReport:
    rows: list
    spread: float
    max_violation: float
    rtol: float

    @property
    def passed(self) -> bool:
        return self.spread <= self.rtol


def probability_transport_check(
    field: ForceField,
    spectrum: MomentumSource,
    points: Sequence[tuple[float, float]],
    density: Callable[[float, float], float],
    mass: float = 1.0,
    z_i: float = 0.0,
    t_i: float = 0.0,
    rtol: float = 0.01,
) -> TransportReport:
    """Check ``|psi|^2 dz_f = |psi_p(p_i)|^2 dp_i`` at each ``(z_f, t_f)``.

    ``density(z, t)`` supplies the exact probability density. For each point
    the probability per unit launch momentum ``|psi|^2 / (dp_i/dz_f)`` is
    formed; ``spread`` is the relative spread of that quantity across the
    points (all taken on one trajectory), ``max_violation`` its largest
    relative departure from ``|psi_p(p_i)|^2``.
    """
    amp_of, _ = _momentum_callable(spectrum)
    rows = []
    for z_f, t_f in points:
        record = van_vleck_jacobian(field, z_i, z_f, t_i, t_f, mass)
        p_i = record.trajectory.p_i
        rho = float(density(z_f, t_f))
        transported = rho / record.dpi_dzf
        mom = abs(complex(amp_of(p_i))) ** 2
        rows.append(
            TransportRow(z_f, t_f, p_i, rho, record.dpi_dzf, transported, mom,
                         abs(transported / mom - 1.0))
        )
    vals = np.array([r.transported for r in rows])
    spread = float(vals.max() / vals.min() - 1.0) if len(rows) else 0.0
    worst = max((r.violation for r in rows), default=0.0)
    return TransportReport(rows, spread, worst, rtol)

"""Error metrics and time scans for the approach to the imaging regime."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from scipy.interpolate import CubicSpline

from .classical import ForceField, endpoint_fan, shoot_for_momentum
from .core import make_grid
from .errors import CausticError, ValidationError
from .exact import (
    GaussianSpec,
    PropagationPlan,
    forced_exact,
    free_exact,
    gaussian_initial,
    splitstep_propagate,
)
from .semiclassical import forced_it_amplitude, free_it_amplitude
from .units import HBAR

MIN_WINDOW_POINTS = 256
FAN_SIZE = 2049
BULK_FRACTION = 1e-6


@dataclass(frozen=True)
class ConvergenceReport:
    times: np.ndarray
    l_inf_rel: np.ndarray
    pointwise: list  # rows of (t, z_f, density_exact, density_it)
    regime: np.ndarray


@dataclass(frozen=True)
class MomentumPicture:
    times: np.ndarray
    p_i: np.ndarray
    scaled_exact: np.ndarray  # shape (len(times), len(p_i)); |psi_F|^2 / (m/t)
    reference: np.ndarray  # |psi_p(p_i)|^2
    z_f: np.ndarray  # matching detector positions, same shape as scaled_exact

    def l_inf(self) -> np.ndarray:
        """Max deviation from the reference, relative to the reference peak."""
        return np.max(np.abs(self.scaled_exact - self.reference), axis=1) / self.reference.max()

    def area(self) -> np.ndarray:
        return trapezoid(self.scaled_exact, self.p_i, axis=1)


def relative_l_inf(exact, approx, bulk_fraction: float = BULK_FRACTION) -> float:
    """``max|approx - exact| / max|exact|`` over the bulk where ``exact >= fraction*peak``."""
    exact = np.asarray(exact, dtype=float)
    approx = np.asarray(approx, dtype=float)
    peak = exact.max()
    if not peak > 0:
        raise ValidationError("exact density vanishes on the whole window")
    bulk = exact >= bulk_fraction * peak
    return float(np.max(np.abs(approx[bulk] - exact[bulk])) / peak)


def exact_density(spec: GaussianSpec, field: ForceField, z, t):
    if field.kind == "free":
        return np.abs(free_exact(spec, z, t)) ** 2
    if field.kind == "uniform":
        return np.abs(forced_exact(spec, field.F, z, t)) ** 2
    raise ValidationError("no closed form for this field; use the split-step path")


def it_density(spec: GaussianSpec, field: ForceField, z, t):
    if field.kind == "free":
        return np.abs(free_it_amplitude(spec, z, t)) ** 2
    if field.kind == "uniform":
        return np.abs(forced_it_amplitude(spec, field.F, z, t)) ** 2
    return _it_density_fan(spec, field, np.asarray(z, dtype=float), t)


def _it_density_fan(spec: GaussianSpec, field: ForceField, z: np.ndarray, t: float):
    """IT density on many points from one fan of trajectories.

    Same content as :func:`it_wavefunction` point by point: the launch
    momentum and dp_i/dz_f come from inverting the fan's endpoint map.
    """
    m = spec.mass
    p_a = shoot_for_momentum(field, spec.z0, float(z.min()), 0.0, t, m)
    p_b = shoot_for_momentum(field, spec.z0, float(z.max()), 0.0, t, m)
    lo, hi = min(p_a, p_b), max(p_a, p_b)
    pad = 0.05 * (hi - lo) + 1e-9 * max(1.0, abs(hi))
    p = np.linspace(lo - pad, hi + pad, FAN_SIZE)
    z_end, _ = endpoint_fan(field, spec.z0, p, 0.0, t, m)
    if not np.all(np.diff(z_end) > 0):
        raise CausticError("endpoint map folds over inside the window (caustic)")
    inverse = CubicSpline(z_end, p)
    return inverse.derivative()(z) * spec.momentum_density(inverse(z))


def _splitstep_density(spec, field, z, t, grid):
    psi0 = gaussian_initial(spec, grid)
    psi = splitstep_propagate(psi0, PropagationPlan(field, 0.0, t, grid, mass=spec.mass))
    return np.abs(psi(z)) ** 2


def it_error_scan(
    spec: GaussianSpec,
    field: ForceField,
    times,
    z_window: tuple[float, float],
    n_points: int = MIN_WINDOW_POINTS,
    grid=None,
) -> ConvergenceReport:
    """Relative L-infinity gap between exact and IT densities at each time.

    Closed forms serve as the exact reference for free and uniform fields;
    other fields are propagated by split-step on ``grid`` (default: 4096
    points over four times the window).
    """
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0):
        raise ValidationError("scan times must be positive")
    if n_points < MIN_WINDOW_POINTS:
        raise ValidationError(f"window needs >= {MIN_WINDOW_POINTS} samples")
    z = np.linspace(z_window[0], z_window[1], n_points)
    analytic = field.kind in ("free", "uniform")
    if not analytic and grid is None:
        span = z_window[1] - z_window[0]
        centre = 0.5 * (z_window[0] + z_window[1])
        grid = make_grid(centre - 2 * span, centre + 2 * span, 4096)
    gaps, rows = [], []
    for t in times:
        rho_ex = exact_density(spec, field, z, t) if analytic else \
            _splitstep_density(spec, field, z, t, grid)
        rho_it = it_density(spec, field, z, t)
        gaps.append(relative_l_inf(rho_ex, rho_it))
        rows.extend(zip(np.full(z.size, t), z, rho_ex, rho_it))
    return ConvergenceReport(times, np.array(gaps), rows, spec.regime(times))


def momentum_picture_scan(
    spec: GaussianSpec, F: float, times, p_i=None
) -> MomentumPicture:
    """Exact forced density divided by the classical density ``m/t``, versus launch momentum.

    As ``t`` grows the curves approach ``|psi_p(p_i)|^2``.
    """
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0):
        raise ValidationError("scan times must be positive")
    m = spec.mass
    if p_i is None:
        # widest curve belongs to the earliest time: width ~ (hbar/sigma) sqrt(1 + (m sigma^2/hbar t)^2)
        stretch = np.sqrt(1.0 + (m * spec.sigma ** 2 / (HBAR * times.min())) ** 2)
        half = 10.0 * HBAR / spec.sigma * stretch
        p_i = np.linspace(-half, half, 4001)
    p_i = np.asarray(p_i, dtype=float)
    tt = times[:, None]
    z_f = p_i[None, :] * tt / m + F * tt ** 2 / (2 * m)
    scaled = np.abs(forced_exact(spec, F, z_f, tt)) ** 2 / (m / tt)
    return MomentumPicture(times, p_i, scaled, spec.momentum_density(p_i), z_f)


def momentum_width(p_i, curve) -> float:
    """RMS width of a non-negative curve sampled on ``p_i``."""
    w = np.asarray(curve, dtype=float)
    w = w / w.sum()
    mean = np.sum(w * p_i)
    return float(np.sqrt(np.sum(w * (p_i - mean) ** 2)))

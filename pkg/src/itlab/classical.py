"""Classical trajectories, actions and Van Vleck Jacobians for 1D force fields."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import (
    AccuracyWarning,
    CausticError,
    ConvergenceError,
    IntegrationError,
    NoTrajectoryError,
    ValidationError,
)
from .units import HBAR

DEFAULT_STEPS = 10_000
MIN_ACTION_STEPS = 1_000
MAX_SHOOT_ITER = 100
CAUSTIC_LIMIT = 1e8
REL_STEP = 1e-4
VALIDITY_THRESHOLD = 10.0

_FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)


@dataclass(frozen=True)
class ForceField:
    """A 1D force field: ``free``, ``uniform`` (constant F) or a ``potential``.

    Build instances with the classmethods rather than the constructor.
    """

    kind: str
    F: float = 0.0
    V: Callable[[float], float] | None = None
    dVdz: Callable[[float], float] | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("free", "uniform", "potential"):
            raise ValidationError(f"unknown force-field kind {self.kind!r}")
        if not math.isfinite(self.F):
            raise ValidationError("uniform force must be finite")
        if self.kind == "potential" and self.V is None:
            raise ValidationError("potential field needs a potential function")

    @classmethod
    def free(cls) -> "ForceField":
        return cls("free", label="free")

    @classmethod
    def uniform(cls, F: float) -> "ForceField":
        return cls("uniform", F=float(F), label=f"uniform(F={F:g})")

    @classmethod
    def from_potential(cls, V, dVdz=None, label: str = "potential") -> "ForceField":
        """Closed-form potential; the gradient defaults to a central difference."""
        return cls("potential", V=V, dVdz=dVdz, label=label)

    @classmethod
    def harmonic(cls, k: float = 1.0) -> "ForceField":
        """V = k z^2 / 2."""
        k = float(k)
        return cls(
            "potential",
            V=lambda z: 0.5 * k * z * z,
            dVdz=lambda z: k * z,
            label=f"harmonic(k={k:g})",
        )

    @classmethod
    def sampled(cls, z, V, label: str = "sampled") -> "ForceField":
        """Potential known on a table of points, interpolated by a cubic spline."""
        spline = CubicSpline(np.asarray(z, float), np.asarray(V, float))
        d1 = spline.derivative()
        return cls(
            "potential",
            V=lambda x: float(spline(x)),
            dVdz=lambda x: float(d1(x)),
            label=label,
        )

    def potential(self, z):
        if self.kind == "free":
            return 0.0 * np.asarray(z, dtype=float)
        if self.kind == "uniform":
            return -self.F * np.asarray(z, dtype=float)
        if isinstance(z, np.ndarray):
            return np.array([self.V(float(x)) for x in z.ravel()]).reshape(z.shape)
        return self.V(z)

    def force(self, z: float) -> float:
        if self.kind == "free":
            return 0.0
        if self.kind == "uniform":
            return self.F
        if self.dVdz is not None:
            return -self.dVdz(z)
        h = _FD_STEP * max(1.0, abs(z))
        return -(self.V(z + h) - self.V(z - h)) / (2.0 * h)

    def force_function(self) -> Callable[[float], float]:
        if self.kind == "free":
            return lambda z: 0.0
        if self.kind == "uniform":
            F = self.F
            return lambda z: F
        return self.force


@dataclass(frozen=True)
class TrajectorySolution:
    z_i: float
    p_i: float
    t_i: float
    t_f: float
    z_f: float
    p_f: float
    mass: float
    t: np.ndarray
    z: np.ndarray
    p: np.ndarray

    @property
    def duration(self) -> float:
        return self.t_f - self.t_i


@dataclass(frozen=True)
class ActionRecord:
    S_c: float
    dpi_dzf: float
    trajectory: TrajectorySolution


@dataclass(frozen=True)
class LaunchRecord:
    """Trajectory launched at rest from ``r_i`` that ends with momentum ``p_f``."""

    r_i: float
    p_f: float
    dri_dpf: float
    trajectory: TrajectorySolution


@dataclass(frozen=True)
class TransitionZoneEstimate:
    f: float
    sigma: float
    mass: float
    z_i: float
    t_i: float
    E_bar: float
    valid: bool
    threshold: float = VALIDITY_THRESHOLD


def _check_times(t_i: float, t_f: float, mass: float) -> float:
    T = t_f - t_i
    if not T > 0:
        raise ValidationError(f"need t_f > t_i, got t_i={t_i}, t_f={t_f}")
    if not mass > 0:
        raise ValidationError(f"mass must be positive, got {mass}")
    return T


def _n_steps(T: float, dt: float | None) -> int:
    if dt is None:
        return DEFAULT_STEPS
    if not dt > 0 or dt > T * (1 + 1e-12):
        raise ValidationError(f"need 0 < dt <= t_f - t_i, got dt={dt}")
    return max(1, math.ceil(T / dt - 1e-9))


def _verlet_endpoint(force, z: float, p: float, h: float, n: int, mass: float):
    a = force(z)
    half = 0.5 * h
    for _ in range(n):
        p += half * a
        z += h * p / mass
        a = force(z)
        p += half * a
    if not (math.isfinite(z) and math.isfinite(p)):
        raise IntegrationError("trajectory became non-finite")
    return z, p


def _vectorised(force):
    """Force callable that accepts arrays, wrapping scalar-only fields."""
    probe = np.array([0.0, 1.0])
    try:
        out = np.asarray(force(probe), dtype=float)
        if out.shape == probe.shape:
            return force
    except (TypeError, ValueError):
        pass
    return np.vectorize(force, otypes=[float])


def endpoint_fan(
    field: ForceField,
    z_i: float,
    p_values,
    t_i: float,
    t_f: float,
    mass: float = 1.0,
    dt: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Final positions and momenta for a fan of launch momenta from ``z_i``.

    All trajectories are stepped together with the same velocity-Verlet
    scheme as :func:`integrate_trajectory`.
    """
    T = _check_times(t_i, t_f, mass)
    n = _n_steps(T, dt)
    h = T / n
    force = _vectorised(field.force_function()) if field.kind == "potential" \
        else field.force_function()
    p = np.array(p_values, dtype=float)
    z = np.full_like(p, float(z_i))
    a = force(z)
    half = 0.5 * h
    for _ in range(n):
        p = p + half * a
        z = z + h * p / mass
        a = force(z)
        p = p + half * a
    if not (np.all(np.isfinite(z)) and np.all(np.isfinite(p))):
        raise IntegrationError("non-finite state in trajectory fan")
    return z, p


def integrate_trajectory(
    field: ForceField,
    z_i: float,
    p_i: float,
    t_i: float,
    t_f: float,
    mass: float = 1.0,
    dt: float | None = None,
) -> TrajectorySolution:
    """Velocity-Verlet trajectory with fixed step.

    The default step is ``(t_f - t_i) / 10**4``; any ``dt`` is rounded down so
    that an integer number of steps lands exactly on ``t_f``.
    """
    T = _check_times(t_i, t_f, mass)
    n = _n_steps(T, dt)
    h = T / n
    force = field.force_function()
    zs = np.empty(n + 1)
    ps = np.empty(n + 1)
    z, p = float(z_i), float(p_i)
    a = force(z)
    zs[0], ps[0] = z, p
    half = 0.5 * h
    for k in range(1, n + 1):
        p += half * a
        z += h * p / mass
        a = force(z)
        p += half * a
        zs[k] = z
        ps[k] = p
    if not (np.all(np.isfinite(zs)) and np.all(np.isfinite(ps)) and math.isfinite(a)):
        raise IntegrationError("non-finite force or state during integration")
    ts = t_i + h * np.arange(n + 1)
    ts[-1] = t_f
    return TrajectorySolution(
        float(z_i), float(p_i), float(t_i), float(t_f), z, p, float(mass), ts, zs, ps
    )


def energy(traj: TrajectorySolution, field: ForceField) -> np.ndarray:
    return traj.p ** 2 / (2.0 * traj.mass) + field.potential(traj.z)


def accumulate_action(traj: TrajectorySolution, field: ForceField) -> float:
    """Integral of T - V along the sampled path (composite Simpson rule)."""
    if traj.t.size - 1 < MIN_ACTION_STEPS:
        warnings.warn(
            f"path has only {traj.t.size - 1} steps; action may be inaccurate",
            AccuracyWarning,
            stacklevel=2,
        )
    lagrangian = traj.p ** 2 / (2.0 * traj.mass) - field.potential(traj.z)
    return float(simpson(lagrangian, x=traj.t))


def _shoot(field, z_i, z_f, t_i, t_f, mass, n_steps=DEFAULT_STEPS):
    """Secant shooting on the launch momentum; returns (p_i, dz_f/dp_i)."""
    T = _check_times(t_i, t_f, mass)
    force = field.force_function()
    h = T / n_steps
    tol = 1e-10 * max(1.0, abs(z_f))
    flat = 1e-8 * max(1.0, T / mass)

    def residual(p):
        return _verlet_endpoint(force, float(z_i), p, h, n_steps, mass)[0] - z_f

    p0 = mass * (z_f - z_i) / T
    dp = 1e-3 * max(abs(p0), mass * max(1.0, abs(z_f - z_i)) / T)
    p1 = p0 + dp
    r0, r1 = residual(p0), residual(p1)
    slope = (r1 - r0) / (p1 - p0)
    for _ in range(MAX_SHOOT_ITER):
        if abs(r1) <= tol:
            return p1, slope
        if not math.isfinite(slope) or abs(slope) <= flat:
            break
        p2 = p1 - r1 / slope
        try:
            r2 = residual(p2)
        except IntegrationError:
            break
        p0, r0, p1, r1 = p1, r1, p2, r2
        if p1 != p0:
            slope = (r1 - r0) / (p1 - p0)
    if math.isfinite(slope) and abs(slope) <= flat:
        raise CausticError(
            f"endpoint map is flat (dz_f/dp_i = {slope:.3e}); trajectories focus here"
        )
    return _bracketed(residual, mass * (z_f - z_i) / T, dp, tol)


def _bracketed(residual, p_guess, dp, tol):
    lo, hi = p_guess - dp, p_guess + dp
    try:
        rlo, rhi = residual(lo), residual(hi)
        for _ in range(60):
            if rlo * rhi < 0:
                break
            dp *= 2.0
            lo, hi = p_guess - dp, p_guess + dp
            rlo, rhi = residual(lo), residual(hi)
    except IntegrationError as exc:
        raise NoTrajectoryError("no trajectory found while bracketing") from exc
    if not rlo * rhi < 0:
        raise NoTrajectoryError("no sign change in bracketing; endpoint unreachable")
    p = brentq(residual, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    r = residual(p)
    if abs(r) > tol:
        raise ConvergenceError(f"shooting residual {r:.3e} above tolerance {tol:.1e}")
    eps = 1e-6 * max(1.0, abs(p))
    return p, (residual(p + eps) - residual(p - eps)) / (2 * eps)


def shoot_for_momentum(
    field: ForceField,
    z_i: float,
    z_f: float,
    t_i: float,
    t_f: float,
    mass: float = 1.0,
) -> float:
    """Initial momentum of the trajectory from ``z_i`` at ``t_i`` to ``z_f`` at ``t_f``."""
    return _shoot(field, z_i, z_f, t_i, t_f, mass)[0]


def van_vleck_jacobian(
    field: ForceField,
    z_i: float,
    z_f: float,
    t_i: float,
    t_f: float,
    mass: float = 1.0,
) -> ActionRecord:
    """Classical density dp_i/dz_f by central differences of the shooting map.

    Raises CausticError at focal points. Past a focal point the density turns
    negative; that case is rejected too, since Maslov phases are not tracked.
    """
    delta = REL_STEP * max(1.0, abs(z_f))
    p_c, _ = _shoot(field, z_i, z_f, t_i, t_f, mass)
    p_plus, _ = _shoot(field, z_i, z_f + delta, t_i, t_f, mass)
    p_minus, _ = _shoot(field, z_i, z_f - delta, t_i, t_f, mass)
    jac = (p_plus - p_minus) / (2.0 * delta)
    right, left = p_plus - p_c, p_c - p_minus
    if not math.isfinite(jac) or abs(jac) > CAUSTIC_LIMIT:
        raise CausticError(f"Van Vleck density {jac:.3e} diverges")
    if right * left <= 0 or jac <= 0:
        raise CausticError(f"Van Vleck density {jac:.3e} changes sign (focal point crossed)")
    traj = integrate_trajectory(field, z_i, p_c, t_i, t_f, mass)
    action = accumulate_action(traj, field) + traj.p_f * (z_f - traj.z_f)
    return ActionRecord(action, jac, traj)


def action_between(field, z_i, z_f, t_i, t_f, mass=1.0) -> float:
    """Classical action S_c(z_f, t_f; z_i, t_i) along the shooting solution.

    The shooting tolerance leaves the path ending slightly off ``z_f``; the
    first-order correction ``p_f * (z_f - z_end)`` (from dS/dz_f = p_f) removes
    that residue so finite differences of the action stay clean.
    """
    p = shoot_for_momentum(field, z_i, z_f, t_i, t_f, mass)
    traj = integrate_trajectory(field, z_i, p, t_i, t_f, mass)
    return accumulate_action(traj, field) + traj.p_f * (z_f - traj.z_f)


def initial_momentum_from_action(field, z_i, z_f, t_i, t_f, mass=1.0) -> float:
    """-dS_c/dz_i by central difference; equals the launch momentum."""
    h = REL_STEP * max(1.0, abs(z_i))
    s_plus = action_between(field, z_i + h, z_f, t_i, t_f, mass)
    s_minus = action_between(field, z_i - h, z_f, t_i, t_f, mass)
    return -(s_plus - s_minus) / (2.0 * h)


def launch_jacobian(
    field: ForceField,
    p_f: float,
    t_i: float,
    t_f: float,
    mass: float = 1.0,
) -> LaunchRecord:
    """Find the rest-launch position reaching final momentum ``p_f``; return dr_i/dp_f.

    Position-independent forces (free, uniform) give a degenerate map and
    raise CausticError.
    """
    T = _check_times(t_i, t_f, mass)
    force = field.force_function()
    h = T / DEFAULT_STEPS

    def residual(r):
        return _verlet_endpoint(force, r, 0.0, h, DEFAULT_STEPS, mass)[1] - p_f

    def solve(target_shift):
        r0, r1 = 0.0, 1.0
        f0, f1 = residual(r0) - target_shift, residual(r1) - target_shift
        tol = 1e-10 * max(1.0, abs(p_f))
        for _ in range(MAX_SHOOT_ITER):
            if abs(f1) <= tol:
                return r1
            slope = (f1 - f0) / (r1 - r0)
            if not math.isfinite(slope) or abs(slope) < 1.0 / CAUSTIC_LIMIT:
                raise CausticError(
                    "final momentum does not depend on launch position (degenerate map)"
                )
            r2 = r1 - f1 / slope
            r0, f0, r1, f1 = r1, f1, r2, residual(r2) - target_shift
        raise ConvergenceError("launch-position shooting did not converge")

    delta = REL_STEP * max(1.0, abs(p_f))
    r_c = solve(0.0)
    r_plus = solve(delta)
    r_minus = solve(-delta)
    jac = (r_plus - r_minus) / (2.0 * delta)
    if not math.isfinite(jac) or abs(jac) > CAUSTIC_LIMIT:
        raise CausticError(f"dr_i/dp_f = {jac:.3e} diverges")
    traj = integrate_trajectory(field, r_c, 0.0, t_i, t_f, mass)
    return LaunchRecord(r_c, float(p_f), jac, traj)


def transition_zone(
    sigma: float, mass: float = 1.0, f: float = 100.0, threshold: float = VALIDITY_THRESHOLD
) -> TransitionZoneEstimate:
    """Where the imaging regime starts for a packet of initial width ``sigma``.

    ``z_i = f*sigma`` and ``t_i = m z_i^2 / hbar``; the semiclassical condition
    ``E_bar * t_i >> hbar`` reduces to ``f >> sqrt(2)``. How much larger is a
    judgement call, exposed as ``threshold``.
    """
    if not sigma > 0 or not f > 0 or not mass > 0:
        raise ValidationError("sigma, f and mass must be positive")
    z_i = f * sigma
    t_i = mass * z_i ** 2 / HBAR
    e_bar = HBAR ** 2 / (2.0 * mass * sigma ** 2)
    return TransitionZoneEstimate(f, sigma, mass, z_i, t_i, e_bar, f >= threshold, threshold)

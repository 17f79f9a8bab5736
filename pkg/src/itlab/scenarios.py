"""Scenario definitions for the command-line runner.

Each scenario declares its parameters (name, default, type) and a run
function that turns a validated parameter map into CSV tables, a flat
summary and optional pass/fail checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .classical import ForceField, transition_zone
from .convergence import momentum_picture_scan
from .density_matrix import (
    extract_frequency,
    offdiagonal_frequency,
    rho_at_velocities,
    time_average_offdiagonal,
    width_velocity,
)
from .errors import ConfigError, ValidationError
from .exact import GaussianSpec, forced_exact, free_exact
from .interferometer import (
    GratingSpec,
    InterferometerGeometry,
    check_geometry,
    fringe_profile,
)
from .semiclassical import forced_it_amplitude, free_it_amplitude, probability_transport_check
from .tables import CsvTable
from .units import (
    HBAR,
    au_to_nm,
    au_to_seconds,
    cm_to_au,
    nm_to_au,
    pm_to_au,
    um_to_au,
)


# ---------------------------------------------------------------- parameters

def _parse_float(text: str) -> float:
    return float(text)


def _parse_int(text: str) -> int:
    return int(text)


def _parse_floats(text: str) -> tuple[float, ...]:
    parts = [s.strip() for s in text.split(",")]
    if any(not s for s in parts):
        raise ValueError("empty list element")
    return tuple(float(s) for s in parts)


_PARSERS = {float: _parse_float, int: _parse_int, tuple: _parse_floats}


@dataclass(frozen=True)
class Param:
    name: str
    default: object
    kind: type
    help: str = ""

    def parse(self, text: str):
        text = text.strip()
        if not text:
            raise ConfigError(f"parameter '{self.name}' has an empty value")
        try:
            return _PARSERS[self.kind](text)
        except ValueError:
            raise ConfigError(f"parameter '{self.name}': cannot parse {text!r}") from None


@dataclass
class ScenarioResult:
    name: str
    tables: dict[str, CsvTable]
    summary: dict[str, object]
    checks: list[tuple[str, float, float, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c[3] for c in self.checks)

    def checks_table(self) -> CsvTable:
        table = CsvTable(["check", "value", "tolerance", "passed"])
        for row in self.checks:
            table.add(*row)
        return table


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    params: tuple[Param, ...]
    runner: Callable[[dict], ScenarioResult]

    def defaults(self) -> dict:
        return {p.name: p.default for p in self.params}

    def resolve(self, overrides: dict[str, str]) -> dict:
        """Defaults updated with string overrides; unknown keys are rejected."""
        known = {p.name: p for p in self.params}
        values = self.defaults()
        for key, text in overrides.items():
            if key not in known:
                raise ConfigError(
                    f"unknown parameter '{key}' for scenario '{self.name}' "
                    f"(valid: {', '.join(known)})"
                )
            values[key] = known[key].parse(text)
        return values

    def run(self, overrides: dict[str, str] | None = None) -> ScenarioResult:
        return self.runner(self.resolve(overrides or {}))


def _positive(params: dict, *keys: str) -> None:
    for key in keys:
        vals = params[key] if isinstance(params[key], tuple) else (params[key],)
        if not all(v > 0 for v in vals):
            raise ConfigError(f"parameter '{key}' must be positive")


def _refined_peak(x: np.ndarray, y: np.ndarray) -> float:
    k = int(np.argmax(y))
    if 0 < k < len(y) - 1:
        a, b, c = y[k - 1], y[k], y[k + 1]
        denom = a - 2 * b + c
        if denom != 0:
            return float(x[k] + 0.5 * (a - c) / denom * (x[1] - x[0]))
    return float(x[k])


# ---------------------------------------------------------------- fig1

def _run_fig1(p: dict) -> ScenarioResult:
    _positive(p, "sigma", "mass", "t_min", "t_max", "profile_times")
    if p["n_times"] < 2 or p["n_z"] < 2:
        raise ConfigError("n_times and n_z must be at least 2")
    spec = GaussianSpec(p["sigma"], mass=p["mass"])
    m = spec.mass
    times = np.linspace(p["t_min"], p["t_max"], p["n_times"])

    # |psi_p|^2 underflows long before the ratio stops being interesting, so
    # the ratio to |psi_p(p_i)|^2 is reported as a base-10 logarithm
    log_mom0 = 0.5 * math.log10(spec.sigma ** 2 / (math.pi * HBAR ** 2))
    curves = CsvTable(["t", "z_f", "rho_exact", "rho_it", "log10_ratio", "classical_density"])
    summary: dict[str, object] = {"sigma": spec.sigma, "mass": m}
    for z in p["z_f"]:
        rho_ex = np.abs(free_exact(spec, z, times)) ** 2
        rho_it = np.abs(free_it_amplitude(spec, z, times)) ** 2
        p_i = m * z / times
        log_ratio = np.log10(rho_ex) - (log_mom0 - (p_i * spec.sigma / HBAR) ** 2 / math.log(10))
        for row in zip(times, np.full(times.size, z), rho_ex, rho_it, log_ratio, m / times):
            curves.add(*row)
        summary[f"gap_at_t_max_z{z:g}"] = abs(rho_it[-1] / rho_ex[-1] - 1)
        summary[f"ratio_over_classical_at_t_max_z{z:g}"] = 10 ** log_ratio[-1] / (m / times[-1])

    profiles = CsvTable(["t", "z_f", "rho_exact", "rho_it"])
    z = np.linspace(p["z_lo"], p["z_hi"], p["n_z"])
    for t in p["profile_times"]:
        rho_ex = np.abs(free_exact(spec, z, t)) ** 2
        rho_it = np.abs(free_it_amplitude(spec, z, t)) ** 2
        for row in zip(np.full(z.size, t), z, rho_ex, rho_it):
            profiles.add(*row)
    summary["regime_at_t_max"] = spec.regime(times[-1])
    return ScenarioResult("fig1", {"curves": curves, "profiles": profiles}, summary)


# ---------------------------------------------------------------- fig2

def _run_fig2(p: dict) -> ScenarioResult:
    _positive(p, "sigma", "mass", "times")
    if p["n_z"] < 16:
        raise ConfigError("n_z must be at least 16")
    spec = GaussianSpec(p["sigma"], mass=p["mass"])
    m, F = spec.mass, p["force"]
    zpic = CsvTable(["t", "z_f", "rho_exact", "rho_it", "classical_density"])
    summary: dict[str, object] = {"sigma": spec.sigma, "mass": m, "force": F}
    for t in p["times"]:
        centre = F * t ** 2 / (2 * m)
        width = math.hypot(spec.sigma ** 2, HBAR * t / m) / spec.sigma
        z = np.linspace(centre - 6 * width, centre + 6 * width, p["n_z"])
        rho_ex = np.abs(forced_exact(spec, F, z, t)) ** 2
        rho_it = np.abs(forced_it_amplitude(spec, F, z, t)) ** 2
        for row in zip(np.full(z.size, t), z, rho_ex, rho_it, np.full(z.size, m / t)):
            zpic.add(*row)
        summary[f"peak_t{t:g}"] = _refined_peak(z, rho_ex)
        summary[f"expected_peak_t{t:g}"] = centre

    pic = momentum_picture_scan(spec, F, p["times"])
    ppic = CsvTable(["t", "p_i", "scaled_exact", "momentum_density", "z_f"])
    for k, t in enumerate(pic.times):
        for row in zip(np.full(pic.p_i.size, t), pic.p_i, pic.scaled_exact[k],
                       pic.reference, pic.z_f[k]):
            ppic.add(*row)
    for t, err in zip(pic.times, pic.l_inf()):
        summary[f"momentum_picture_linf_t{t:g}"] = err
    return ScenarioResult("fig2", {"z_picture": zpic, "p_picture": ppic}, summary)


# ---------------------------------------------------------------- fringes

def _run_fringes(p: dict) -> ScenarioResult:
    _positive(p, "period_nm", "wavelength_pm", "L_cm", "w_um", "mass", "n_periods")
    if p["n_slits"] < 4:
        raise ConfigError("n_slits must be at least 4 (the N^2 check halves it)")
    geometry = InterferometerGeometry(
        cm_to_au(p["L_cm"]), pm_to_au(p["wavelength_pm"]), um_to_au(p["w_um"])
    )
    d = nm_to_au(p["period_nm"])
    spec = GratingSpec(p["n_slits"], d, geometry.p0)
    half = GratingSpec(p["n_slits"] // 2, d, geometry.p0)
    n = p["n_periods"] * p["samples_per_period"] + 1
    x_range = (0.0, p["n_periods"] * d)
    prof = fringe_profile(spec, geometry, x_range, n, p["mass"])
    prof_half = fringe_profile(half, geometry, x_range, n, p["mass"])

    table = CsvTable(["x_au", "x_nm", "intensity"])
    for row in zip(prof.x_samples, au_to_nm(prof.x_samples), prof.intensity):
        table.add(*row)

    geo = check_geometry(spec, geometry)
    period = prof.measured_period()
    summary = {
        "n_slits": spec.n_slits,
        "measured_period_nm": au_to_nm(period),
        "period_relative_error": abs(period / d - 1),
        "visibility": prof.visibility(),
        "peak_ratio_N_over_half_N": prof.intensity.max() / prof_half.intensity.max(),
        "lambda_over_d": geo.lambda_over_d,
        "pg_over_p0": geo.pg_over_p0,
        "w_over_L": geo.w_over_L,
        "geometry_max_relative_deviation": geo.max_relative_deviation,
        "time_of_flight_au": geometry.time_of_flight(p["mass"]),
    }
    return ScenarioResult("fringes", {"profile": table}, summary)


# ---------------------------------------------------------------- offdiag

def _run_offdiag(p: dict) -> ScenarioResult:
    _positive(p, "sigma", "mass", "t_start", "n_periods", "t_average", "window_periods",
              "typical_sigma")
    if p["v"] == p["v_prime"]:
        raise ConfigError("v and v_prime must differ for an off-diagonal element")
    spec = GaussianSpec(p["sigma"], mass=p["mass"])
    V = width_velocity(spec)
    omega = offdiagonal_frequency(p["v"], p["v_prime"], V, spec.sigma)
    period = 2 * math.pi / abs(omega)
    n = int(round(p["n_periods"] * p["samples_per_period"])) + 1
    times = p["t_start"] + np.arange(n) * (period / p["samples_per_period"])
    rho = rho_at_velocities(spec, p["v"], p["v_prime"], times)

    table = CsvTable(["t", "re", "im", "abs"])
    for row in zip(times, rho.real, rho.imag, np.abs(rho)):
        table.add(*row)

    w_est = extract_frequency(times, rho)
    tc = p["t_average"]
    z, zp = p["v"] * tc, p["v_prime"] * tc
    point = abs(rho_at_velocities(spec, p["v"], p["v_prime"], [tc])[0])
    averaged = abs(time_average_offdiagonal(spec, z, zp, tc, p["window_periods"] * period))

    typical_V = HBAR / (p["mass"] * p["typical_sigma"])
    typical_omega = offdiagonal_frequency(p["typical_v"], p["typical_v_prime"], typical_V,
                                          p["typical_sigma"])
    summary = {
        "V": V,
        "omega": omega,
        "period": period,
        "omega_extracted": w_est,
        "omega_relative_error": abs(w_est / omega - 1),
        "suppression_factor": point / averaged if averaged > 0 else math.inf,
        "typical_period_au": 2 * math.pi / abs(typical_omega) if typical_omega else math.inf,
    }
    return ScenarioResult("offdiag", {"series": table}, summary)


# ---------------------------------------------------------------- transport

def _run_transport(p: dict) -> ScenarioResult:
    _positive(p, "sigma", "mass", "times", "rtol")
    if len(p["times"]) < 2:
        raise ConfigError("parameter 'times' needs at least two entries")
    spec = GaussianSpec(p["sigma"], mass=p["mass"])
    m, F = spec.mass, p["force"]
    field = ForceField.uniform(F) if F != 0 else ForceField.free()
    if F != 0:
        def density(z, t):
            return abs(complex(forced_exact(spec, F, z, t))) ** 2
    else:
        def density(z, t):
            return abs(complex(free_exact(spec, z, t))) ** 2

    rows = CsvTable(["trajectory", "p_i", "t_f", "z_f", "density", "dpi_dzf",
                     "transported", "momentum_density", "violation"])
    result = ScenarioResult("transport", {"rows": rows}, {"sigma": spec.sigma, "force": F})
    regime = spec.regime(np.asarray(p["times"]))
    result.summary["min_regime"] = float(regime.min())
    for k, p_i in enumerate(p["p_i"]):
        points = [(p_i * t / m + F * t ** 2 / (2 * m), t) for t in p["times"]]
        report = probability_transport_check(field, spec, points, density, m, rtol=p["rtol"])
        for r in report.rows:
            rows.add(k, p_i, r.t_f, r.z_f, r.density, r.dpi_dzf, r.transported,
                     r.momentum_density, r.violation)
        result.checks.append((f"transport_spread_p{p_i:g}", report.spread, p["rtol"],
                              report.passed))
    return result


# ---------------------------------------------------------------- transition

def _run_transition(p: dict) -> ScenarioResult:
    _positive(p, "sigma", "f", "masses", "threshold")
    table = CsvTable(["mass", "sigma", "f", "z_i", "t_i", "t_i_seconds", "E_bar",
                      "action_over_hbar", "valid"])
    result = ScenarioResult("transition", {"zones": table}, {})
    base = None
    for m in p["masses"]:
        est = transition_zone(p["sigma"], m, p["f"], p["threshold"])
        action = est.E_bar * est.t_i / HBAR
        table.add(m, est.sigma, est.f, est.z_i, est.t_i, au_to_seconds(est.t_i), est.E_bar,
                  action, est.valid)
        result.summary[f"t_i_m{m:g}"] = est.t_i
        result.summary[f"z_i_m{m:g}"] = est.z_i
        result.checks.append((f"validity_m{m:g}", est.f, est.threshold, est.valid))
        # the joint condition E_bar t_i >> hbar is f^2/2, independent of the mass
        err = abs(action / (est.f ** 2 / 2) - 1)
        result.checks.append((f"action_scale_m{m:g}", err, 1e-12, err <= 1e-12))
        if base is None:
            base = est
        else:
            err = abs((est.t_i / base.t_i) / (m / base.mass) - 1)
            result.checks.append((f"mass_scaling_m{m:g}", err, 1e-12, err <= 1e-12))
    return result


# ---------------------------------------------------------------- registry

SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario(
            "fig1",
            "free Gaussian: exact vs IT density at fixed detectors, plus profiles",
            (
                Param("sigma", 10.0, float, "initial width"),
                Param("mass", 1.0, float),
                Param("z_f", (10.0, 30.0), tuple, "detector positions"),
                Param("t_min", 1.0, float),
                Param("t_max", 1000.0, float),
                Param("n_times", 1000, int),
                Param("profile_times", (100.0, 200.0), tuple),
                Param("z_lo", -100.0, float),
                Param("z_hi", 100.0, float),
                Param("n_z", 801, int),
            ),
            _run_fig1,
        ),
        Scenario(
            "fig2",
            "Gaussian under constant force: position and launch-momentum pictures",
            (
                Param("sigma", 2.0, float),
                Param("mass", 1.0, float),
                Param("force", 1.0, float),
                Param("times", (5.0, 10.0, 15.0), tuple),
                Param("n_z", 801, int),
            ),
            _run_fig2,
        ),
        Scenario(
            "fringes",
            "two-grating interferometer fringe profile (lab units in, a.u. out)",
            (
                Param("n_slits", 100, int),
                Param("period_nm", 400.0, float),
                Param("wavelength_pm", 16.0, float),
                Param("L_cm", 66.0, float),
                Param("w_um", 30.0, float),
                Param("mass", 1.0, float),
                Param("n_periods", 4, int),
                Param("samples_per_period", 64, int),
            ),
            _run_fringes,
        ),
        Scenario(
            "offdiag",
            "off-diagonal density-matrix element along fixed velocities",
            (
                Param("sigma", 10.0, float),
                Param("mass", 1.0, float),
                Param("v", 0.15, float),
                Param("v_prime", 0.2, float),
                Param("t_start", 1000.0, float),
                Param("n_periods", 20.0, float),
                Param("samples_per_period", 64, int),
                Param("t_average", 1e7, float),
                Param("window_periods", 10.0, float),
                Param("typical_sigma", 1.0, float),
                Param("typical_v", 1.0, float),
                Param("typical_v_prime", 0.5, float),
            ),
            _run_offdiag,
        ),
        Scenario(
            "transport",
            "probability transport along classical trajectories at several times",
            (
                Param("sigma", 10.0, float),
                Param("mass", 1.0, float),
                Param("force", 0.0, float),
                Param("times", (1000.0, 2000.0), tuple),
                Param("p_i", (0.0, 0.03, 0.1), tuple),
                Param("rtol", 0.01, float),
            ),
            _run_transport,
        ),
        Scenario(
            "transition",
            "start of the imaging regime for electron and proton masses",
            (
                Param("sigma", 1.0, float),
                Param("f", 100.0, float),
                Param("masses", (1.0, 1836.0), tuple),
                Param("threshold", 10.0, float),
            ),
            _run_transition,
        ),
    )
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ConfigError(
            f"unknown scenario '{name}'; valid scenarios: {', '.join(SCENARIOS)}"
        ) from None


def run_scenario(name: str, overrides: dict[str, str] | None = None) -> ScenarioResult:
    """Validate ``overrides`` against the scenario and run it."""
    scenario = get_scenario(name)
    try:
        return scenario.run(overrides)
    except ConfigError:
        raise
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc

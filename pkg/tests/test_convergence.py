import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itlab import (
    ForceField,
    GaussianSpec,
    forced_exact,
    free_exact,
    free_it_amplitude,
    it_error_scan,
    make_grid,
    momentum_picture_scan,
    relative_l_inf,
)
from itlab.convergence import momentum_width
from itlab.errors import ValidationError

SPEC10 = GaussianSpec(10.0)
SPEC2 = GaussianSpec(2.0)


def test_relative_l_inf_basic():
    exact = np.array([0.0, 1.0, 2.0, 1.0])
    approx = np.array([0.5, 1.1, 2.0, 1.0])
    # the first point lies below 1e-6 of the peak, so it is outside the bulk
    assert relative_l_inf(exact, approx) == pytest.approx(0.05)
    assert relative_l_inf(exact, exact) == 0.0
    with pytest.raises(ValidationError):
        relative_l_inf(np.zeros(3), np.ones(3))


@pytest.mark.parametrize("t,expected", [(200.0, 0.713), (1000.0, 1.004)])
def test_it_to_exact_ratio(t, expected):
    ratio = abs(free_it_amplitude(SPEC10, 30.0, t)) ** 2 / abs(free_exact(SPEC10, 30.0, t)) ** 2
    assert round(float(ratio), 3) == expected


def test_free_window_scan_monotone():
    # window |z| <= 3 sigma (hbar t / m sigma^2) grows with t
    regimes = np.array([1, 1.5, 2, 3, 5, 7, 10, 15, 20])
    gaps = []
    for r in regimes:
        t = r * 100.0
        rep = it_error_scan(SPEC10, ForceField.free(), [t], (-30 * r, 30 * r), n_points=1201)
        gaps.append(rep.l_inf_rel[0])
    gaps = np.array(gaps)
    assert np.all(np.diff(gaps) < 0)
    assert gaps[regimes == 10][0] < 0.01


def test_uniform_snapshots_converge():
    rep = it_error_scan(SPEC2, ForceField.uniform(1.0), [5.0, 10.0, 15.0], (-20.0, 150.0),
                        n_points=4001)
    assert np.all(np.diff(rep.l_inf_rel) < 0)
    np.testing.assert_allclose(rep.regime, [1.25, 2.5, 3.75])
    assert len(rep.pointwise) == 3 * 4001


@settings(max_examples=25)
@given(t1=st.floats(100, 5000), factor=st.floats(1.05, 10))
def test_error_decreases_after_spreading_time(t1, factor):
    t2 = t1 * factor

    def gap(t):
        half = 30.0 * t / 100.0
        return it_error_scan(SPEC10, ForceField.free(), [t], (-half, half), n_points=601).l_inf_rel[0]

    assert gap(t2) < gap(t1)


def test_harmonic_scan_uses_splitstep():
    spec = GaussianSpec(1.0)
    rep = it_error_scan(spec, ForceField.harmonic(0.0004), [20.0, 40.0], (-30.0, 30.0),
                        grid=make_grid(-256, 256, 1024))
    assert rep.l_inf_rel.shape == (2,)
    assert np.all(np.isfinite(rep.l_inf_rel))
    assert rep.l_inf_rel[1] < rep.l_inf_rel[0]


def test_scan_validation():
    with pytest.raises(ValidationError):
        it_error_scan(SPEC10, ForceField.free(), [0.0], (-1.0, 1.0))
    with pytest.raises(ValidationError):
        it_error_scan(SPEC10, ForceField.free(), [1.0], (-1.0, 1.0), n_points=10)


# -- momentum picture -------------------------------------------------------------------

def test_momentum_picture_gap_closed_form():
    pic = momentum_picture_scan(SPEC2, 1.0, [1.0, 5.0, 10.0, 15.0])
    t = pic.times
    # the largest deviation sits at the peak, where the curve is t/sqrt(sigma^4+t^2) of the reference
    np.testing.assert_allclose(pic.l_inf(), 1 - t / np.sqrt(16 + t ** 2), rtol=1e-6)
    assert pic.l_inf()[0] > 0.1
    assert np.all(np.diff(pic.l_inf()) < 0)


@settings(max_examples=20, deadline=None)
@given(t=st.floats(0.5, 100), F=st.floats(-2, 2), sigma=st.floats(0.5, 5))
def test_momentum_picture_area(t, F, sigma):
    pic = momentum_picture_scan(GaussianSpec(sigma), F, [t])
    assert pic.area()[0] == pytest.approx(1.0, abs=1e-6)


def test_momentum_picture_positions():
    pic = momentum_picture_scan(SPEC2, 1.0, [15.0], p_i=np.array([0.0, 1.0]))
    np.testing.assert_allclose(pic.z_f[0], [112.5, 127.5])


def test_localisation_width_stable():
    # width in p_i of |psi|^2/(m/t): sqrt(1 + sigma^4/t^2)/sigma, t-independent once regime >= 5
    p = np.linspace(-4, 4, 4001)
    pic = momentum_picture_scan(SPEC2, 1.0, [20.0, 40.0, 400.0], p_i=p)
    widths = [momentum_width(p, row) for row in pic.scaled_exact]
    assert max(widths) / min(widths) - 1 <= 0.02


@pytest.mark.parametrize("t", [20.0, 40.0, 100.0])
def test_peak_height_follows_classical_density(t):
    F, m = 1.0, 1.0
    z_peak = F * t ** 2 / (2 * m)
    peak = abs(forced_exact(SPEC2, F, z_peak, t)) ** 2
    classical = math.sqrt(m * F / (2 * z_peak))
    assert classical == pytest.approx(m / t)
    assert peak / classical == pytest.approx(SPEC2.momentum_density(0.0), rel=0.02)

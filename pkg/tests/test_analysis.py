import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from blochtk.analysis import (Curve, cpt_coherence, fwhm_interpolated,
                              lorentzian_fit, peak_find, power_broadened_fwhm,
                              two_level_steady_state)
from blochtk.config import mhz_to_rads

DECAY = mhz_to_rads(5.0)


def _lorentz(x, x0, w, a, off):
    return off + a * (w / 2) ** 2 / ((x - x0) ** 2 + (w / 2) ** 2)


def test_fwhm_synthetic_lorentzian():
    # window wide enough (50 half-widths) that the curve-minimum baseline
    # rule sees truly negligible wings
    x = np.arange(-250, 250.01, 0.1)
    y = _lorentz(x, 0.0, 10.0, 0.4, 0.0)
    assert fwhm_interpolated(Curve(x, y)) == pytest.approx(10.0, abs=0.01)


def test_fwhm_with_offset_baseline():
    x = np.arange(-200, 200.01, 0.05)
    y = _lorentz(x, 2.0, 8.0, 1.0, 0.3)
    assert fwhm_interpolated(Curve(x, y)) == pytest.approx(8.0, abs=0.02)


def test_fwhm_wing_bias_is_systematic():
    # on a short window the subtracted-wing baseline narrows the estimate by
    # about fwhm * (wing/peak); the free-offset fit is immune
    x = np.arange(-50, 50.01, 0.1)
    y = _lorentz(x, 0.0, 10.0, 0.4, 0.0)
    w_interp = fwhm_interpolated(Curve(x, y))
    wing_ratio = y.min() / y.max()
    assert w_interp == pytest.approx(10.0 * (1 - wing_ratio), abs=0.02)
    assert lorentzian_fit(Curve(x, y)).fwhm == pytest.approx(10.0, rel=1e-9)


def test_fwhm_requires_interior_maximum():
    x = np.arange(0.0, 10.0, 0.5)
    with pytest.raises(ValueError):
        fwhm_interpolated(Curve(x, x))  # maximum on the edge


def test_lorentzian_fit_recovers_parameters():
    x = np.arange(-40, 40.01, 0.25)
    y = _lorentz(x, 1.5, 12.0, 0.8, 0.05)
    fit = lorentzian_fit(Curve(x, y))
    assert fit.converged
    assert fit.center == pytest.approx(1.5, rel=1e-8)
    assert fit.fwhm == pytest.approx(12.0, rel=1e-8)
    assert fit.amplitude == pytest.approx(0.8, rel=1e-8)
    assert fit.offset == pytest.approx(0.05, abs=1e-9)
    assert fit.residual_rms < 1e-12


def test_lorentzian_fit_deterministic():
    x = np.arange(-20, 20.01, 0.5)
    y = _lorentz(x, -0.7, 6.0, 0.5, 0.0) + 0.01 * np.sin(3 * x)
    a = lorentzian_fit(Curve(x, y))
    b = lorentzian_fit(Curve(x, y))
    assert a == b


def test_peak_find_monotone_empty():
    x = np.arange(0.0, 5.0, 0.1)
    assert peak_find(Curve(x, np.exp(x))) == []


def test_peak_find_doublet():
    x = np.arange(-20, 20.01, 0.2)
    y = _lorentz(x, -5.0, 4.0, 1.0, 0.0) + _lorentz(x, 5.0, 4.0, 1.0, 0.0)
    peaks = peak_find(Curve(x, y))
    assert len(peaks) == 2
    assert peaks[0][0] == pytest.approx(-5.0, abs=0.05)
    assert peaks[1][0] == pytest.approx(5.0, abs=0.05)
    assert peaks[0][0] < peaks[1][0]


def test_peak_refinement_beats_grid():
    # peak center placed off-grid; parabolic refinement must recover it
    x = np.arange(-10, 10.01, 0.5)
    y = _lorentz(x, 0.13, 6.0, 1.0, 0.0)
    (xp, yp), = peak_find(Curve(x, y))
    assert abs(xp - 0.13) < 0.05  # much better than the 0.5 grid


def test_two_level_steady_state_values():
    om = DECAY
    gam = 0.5 * DECAY
    assert two_level_steady_state(om, DECAY, gam, 0.0) == pytest.approx(4 / 9, abs=1e-15)
    assert two_level_steady_state(0.0, DECAY, gam, 0.0) == 0.0
    # saturation limit is 1/2
    assert two_level_steady_state(1e3 * DECAY, DECAY, gam, 0.0) == pytest.approx(0.5, abs=1e-5)
    with pytest.raises(ValueError):
        two_level_steady_state(om, 0.0, gam, 0.0)


def test_half_maximum_matches_width_formula():
    om = 0.3 * DECAY
    gam = 0.5 * DECAY
    half_delta = math.sqrt(gam**2 + 4 * om**2 * gam / DECAY)
    peak = two_level_steady_state(om, DECAY, gam, 0.0)
    at_half = two_level_steady_state(om, DECAY, gam, half_delta)
    assert at_half == pytest.approx(peak / 2, rel=1e-12)
    assert power_broadened_fwhm(om, DECAY, gam) == pytest.approx(2 * half_delta, rel=1e-12)


def test_steady_state_against_dense_integration():
    # independent route: dense complex master equation + adaptive integrator
    gam = 0.5 * DECAY

    def dense_final(om, delta):
        def rhs(t, y):
            p1, p2 = y[0].real, y[1].real
            s = y[2]  # stored coherence (row 2, col 1 of the frame matrix)
            dp2 = 2 * om * s.imag - DECAY * p2
            ds = (1j * delta - gam) * s + 1j * om * (p1 - p2)
            return [-dp2, dp2, ds]

        sol = solve_ivp(rhs, (0, 10e-6), [1 + 0j, 0j, 0j], method="DOP853",
                        rtol=1e-12, atol=1e-14)
        return sol.y[1, -1].real

    for r, dmhz in ((0.5, 0.0), (1.0, 5.0), (2.0, 15.0)):
        om = r * DECAY
        delta = mhz_to_rads(dmhz)
        assert dense_final(om, delta) == pytest.approx(
            two_level_steady_state(om, DECAY, gam, delta), abs=1e-9)


def test_cpt_coherence():
    assert cpt_coherence(1.0, 1.0) == -0.5
    assert cpt_coherence(1.0, 0.0) == 0.0
    assert cpt_coherence(1.0, 3.0) == pytest.approx(-0.3)
    with pytest.raises(ValueError):
        cpt_coherence(0.0, 0.0)


def test_curve_validation():
    with pytest.raises(ValueError):
        Curve([0, 1], [1, 2])  # too short
    with pytest.raises(ValueError):
        Curve([0, 1, 1], [1, 2, 3])  # not strictly increasing
    with pytest.raises(ValueError):
        Curve([0, 1, 2], [1, 2])  # shape mismatch

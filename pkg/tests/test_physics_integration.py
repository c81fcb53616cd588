"""Cross-checks between the integrator and the closed-form observables."""
import pytest

from blochtk import layout
from blochtk.analysis import (Curve, cpt_coherence, fwhm_interpolated,
                              lorentzian_fit, power_broadened_fwhm)
from blochtk.config import mhz_to_rads
from blochtk.dynamics import SolverConfig, SweepConfig, compile, evolve, sweep, trace_error
from blochtk.generator import ParameterSet, generate
from blochtk.levels import default_initial_state
from blochtk.presets import preset

DECAY = mhz_to_rads(5.0)


def _two_level_spectrum(ratio, width, step, t=3e-6, h=1e-9):
    p = preset("two_level")
    params = ParameterSet(rabi={(1, 2): ratio * DECAY},
                          decay=dict(p.params.decay),
                          gamma=dict(p.params.gamma),
                          mode_detuning={1: 0.0})
    cfg = SweepConfig(width_mhz=width, step_mhz=step, swept_mode=1,
                      t_interaction=t, h=h)
    spec = sweep(generate(p.diagram), params, p.diagram, cfg)
    return Curve(spec.detunings_mhz, spec.final_states[:, 1])


@pytest.mark.parametrize("ratio,width,step", [
    # narrow line, wide window: wings negligible; ~20 samples per width
    # (at 10 samples the piecewise-linear crossing bias alone is ~0.24%)
    (0.1, 200.0, 0.25),
    (1.0, 600.0, 1.5),   # power-broadened line needs the wider window
])
def test_fwhm_interpolated_vs_fit_agree(ratio, width, step):
    curve = _two_level_spectrum(ratio, width, step)
    w_interp = fwhm_interpolated(curve)
    fit = lorentzian_fit(curve)
    assert abs(w_interp - fit.fwhm) / fit.fwhm <= 2e-3
    expect = power_broadened_fwhm(ratio * DECAY, DECAY, 0.5 * DECAY) / mhz_to_rads(1.0)
    assert fit.fwhm == pytest.approx(expect, rel=1e-4)


def test_weak_drive_fwhm_matches_formula():
    # frozen from the width formula at Omega = 0.1 Gamma: 5.19615... MHz
    curve = _two_level_spectrum(0.1, 200.0, 0.25)
    fit = lorentzian_fit(curve)
    assert fit.fwhm == pytest.approx(5.196152422706632, rel=1e-4)


@pytest.mark.parametrize("ratio", [1.0, 2.0, 3.0])
def test_lambda_long_time_coherence_matches_cpt_formula(ratio):
    p = preset("lambda")
    om12 = 0.1 * DECAY
    om23 = ratio * om12
    params = ParameterSet(rabi={(1, 2): om12, (2, 3): om23},
                          decay=dict(p.params.decay),
                          gamma=dict(p.params.gamma),
                          mode_detuning={1: 0.0, 2: 0.0})
    gen = compile(generate(p.diagram), params)
    traj = evolve(gen, default_initial_state(p.diagram),
                  SolverConfig(t_total=10e-6, h=1e-9, stride=10000))
    re13 = traj.states[-1, layout.re_slot(3, 1, 3)]
    assert re13 == pytest.approx(cpt_coherence(om12, om23), abs=1e-3)


def test_trace_conservation_all_presets_default_stepping():
    for name in ("two_level", "lambda", "twelve_sigma_plus", "twelve_pi"):
        p = preset(name)
        gen = compile(generate(p.diagram), p.params)
        traj = evolve(gen, default_initial_state(p.diagram),
                      SolverConfig(t_total=1e-6, h=5e-12, stride=10000))
        assert trace_error(traj) <= 1e-6, name

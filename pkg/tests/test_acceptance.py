"""Acceptance suite: one test per headline criterion, each printing a
PASS/FAIL line (run with ``pytest -s`` to see them inline).

The lambda trapping criterion at 1 us is marked xfail: the ground-state
coherence pumps up with time constant gamma/(2*(Omega12^2+Omega23^2)),
about 0.8 us at the preset drive, so sigma_13(1 us) is -0.34, not within
0.01 of -0.5; the companion test shows full convergence by 10 us. See the
decisions ledger for the analysis.
"""
import math
import subprocess
import time

import numpy as np
import pytest

from blochtk import layout
from blochtk.analysis import (Curve, lorentzian_fit, peak_find,
                              two_level_steady_state)
from blochtk.codegen import CodegenRequest, emit, equivalence_check
from blochtk.config import load_config, mhz_to_rads
from blochtk.dynamics import (SolverConfig, SweepConfig, compile, evolve,
                              sweep, trace_error)
from blochtk.generator import Element, equation_count, generate
from blochtk.levels import default_initial_state
from blochtk.ops import run_evolve, run_sweep
from blochtk.presets import preset

DECAY = mhz_to_rads(5.0)
GAMMA_COH = 0.5 * DECAY


def report(name: str, ok: bool, detail: str = ""):
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def warm_kernels(two_level):
    gen = compile(generate(two_level.diagram), two_level.params)
    evolve(gen, np.array([1.0, 0, 0, 0]), SolverConfig(1e-9, 1e-10, 1))
    return None


@pytest.fixture(scope="module")
def linewidth_spectrum(configs_dir, warm_kernels):
    doc = load_config(str(configs_dir / "two_level_detuning.json"))
    t0 = time.perf_counter()
    res = run_sweep(doc, workers=1)
    elapsed = time.perf_counter() - t0
    return res, elapsed


def test_two_level_rabi_dynamics(two_level, warm_kernels):
    gen = compile(generate(two_level.diagram), two_level.params)
    t0 = time.perf_counter()
    traj = evolve(gen, default_initial_state(two_level.diagram),
                  SolverConfig(t_total=1e-6, h=5e-12, stride=100))
    elapsed = time.perf_counter() - t0
    p22 = traj.states[:, 1]
    ss = p22[-1]
    # oscillation frequency from the sign changes of p22 - steady value
    s = p22 - ss
    crossings = []
    for k in range(1, s.size):
        if s[k - 1] != 0 and np.sign(s[k]) != np.sign(s[k - 1]):
            t = traj.times[k - 1] + (traj.times[k] - traj.times[k - 1]) * (
                -s[k - 1] / (s[k] - s[k - 1]))
            crossings.append(t)
        if len(crossings) >= 5:
            break
    half_periods = np.diff(crossings)
    freq = 1.0 / (2 * float(np.mean(half_periods)))
    ok_freq = abs(freq - 10e6) <= 0.01 * 10e6
    after = p22[traj.times >= 200e-9]
    settle = float(np.max(np.abs(after - ss)))
    ok_settle = settle <= 0.01
    ok_time = elapsed < 5.0
    report("two-level-rabi-dynamics", ok_freq and ok_settle and ok_time,
           f"freq={freq/1e6:.4f} MHz, |p22-ss| after 200 ns <= {settle:.2e}, "
           f"runtime {elapsed:.2f} s")


def test_power_broadened_linewidth(linewidth_spectrum):
    res, elapsed = linewidth_spectrum
    spec = res.spectrum
    p22 = spec.final_states[:, layout.pop_slot(2)]
    fit = lorentzian_fit(Curve(spec.detunings_mhz, p22))
    err = abs(fit.fwhm - 15.0) / 15.0
    ok = err <= 1e-4 and elapsed < 30.0
    report("power-broadened-linewidth", ok,
           f"FWHM={fit.fwhm:.7f} MHz (rel err {err:.2e}), runtime {elapsed:.1f} s")


def test_trace_accuracy(linewidth_spectrum):
    res, _ = linewidth_spectrum
    err = trace_error(res.spectrum)
    report("trace-accuracy", err <= 1e-6, f"max |trace-1| = {err:.3e}")


def test_steady_state_oracle(two_level, warm_kernels):
    system = generate(two_level.diagram)
    worst = 0.0
    for ratio in (0.1, 0.5, 1.0, 2.0):
        for dmhz in (0.0, 5.0, 15.0):
            params = type(two_level.params)(
                rabi={(1, 2): ratio * DECAY},
                decay=dict(two_level.params.decay),
                gamma=dict(two_level.params.gamma),
                mode_detuning={1: mhz_to_rads(dmhz)})
            gen = compile(system, params)
            traj = evolve(gen, np.array([1.0, 0, 0, 0]),
                          SolverConfig(t_total=10e-6, h=5e-11, stride=200000))
            expect = two_level_steady_state(ratio * DECAY, DECAY, GAMMA_COH,
                                            mhz_to_rads(dmhz))
            worst = max(worst, abs(traj.states[-1, 1] - expect))
    report("steady-state-oracle", worst <= 1e-6, f"max |evolve - formula| = {worst:.2e}")


def _lambda_final(lam, t_total):
    gen = compile(generate(lam.diagram), lam.params)
    traj = evolve(gen, default_initial_state(lam.diagram),
                  SolverConfig(t_total=t_total, h=1e-9, stride=1000))
    n = lam.diagram.n_levels
    re13 = traj.states[-1, layout.re_slot(n, 1, 3)]
    im12 = traj.states[-1, layout.im_slot(n, 1, 2)]
    return re13, im12


@pytest.mark.xfail(strict=True,
                   reason="trapping time constant ~0.8 us exceeds the 1 us "
                          "window: sigma13(1 us) = -0.34 (see decisions ledger)")
def test_cpt_at_one_microsecond(lam, warm_kernels):
    re13, im12 = _lambda_final(lam, 1e-6)
    ok = abs(re13 - (-0.5)) <= 1e-2 and abs(im12) <= 1e-3
    report("cpt-1us", ok, f"Re s13={re13:.4f}, |Im s12|={abs(im12):.2e}")


def test_cpt_converged(lam, warm_kernels):
    re13, im12 = _lambda_final(lam, 10e-6)
    ok = abs(re13 - (-0.5)) <= 1e-2 and abs(im12) <= 1e-3
    report("cpt-converged-10us", ok, f"Re s13={re13:.6f}, |Im s12|={abs(im12):.2e}")


def test_eit_and_ats(configs_dir, warm_kernels):
    eit = run_sweep(load_config(str(configs_dir / "lambda_detuning_eit.json")))
    im12 = eit.spectrum.final_states[:, layout.im_slot(3, 1, 2)]
    x = eit.spectrum.detunings_mhz
    at_zero = im12[np.argmin(np.abs(x))]
    dip_ratio = abs(at_zero) / im12.max()
    ok_eit = dip_ratio < 0.10

    ats = run_sweep(load_config(str(configs_dir / "lambda_detuning_ats.json")))
    im12_ats = ats.spectrum.final_states[:, layout.im_slot(3, 1, 2)]
    peaks = peak_find(Curve(ats.spectrum.detunings_mhz, im12_ats))
    ok_ats = len(peaks) == 2 and abs((peaks[1][0] - peaks[0][0]) - 10.0) <= 0.4
    sep = peaks[1][0] - peaks[0][0] if len(peaks) == 2 else float("nan")
    report("eit-ats", ok_eit and ok_ats,
           f"EIT dip ratio {dip_ratio:.2e}; ATS {len(peaks)} peaks, sep {sep:.3f} MHz")


def test_twelve_sigma_plus_pumping(configs_dir, warm_kernels):
    doc = load_config(str(configs_dir / "twelve_sigma_plus_temporal.json"))
    res = run_evolve(doc)
    pops = res.trajectory.states[-1, :12]
    stretched = pops[layout.pop_slot(5)] + pops[layout.pop_slot(12)]
    others = np.delete(pops, [layout.pop_slot(5), layout.pop_slot(12)])
    ok = stretched >= 0.95 and np.all(others < 0.02)
    report("twelve-sigma-pumping", ok,
           f"rho55+rho12,12 = {stretched:.4f}, max other = {others.max():.4f}")


def test_two_level_equivalence_fig8(twelve_sigma, warm_kernels):
    system = generate(twelve_sigma.diagram)
    rels = []
    for ratio in (0.1, 0.3, 0.5, 1.0):
        params = type(twelve_sigma.params)(
            rabi={p: ratio * DECAY for p in twelve_sigma.params.rabi},
            decay=dict(twelve_sigma.params.decay),
            gamma=dict(twelve_sigma.params.gamma),
            mode_detuning={1: 0.0})
        gen = compile(system, params)
        traj = evolve(gen, default_initial_state(twelve_sigma.diagram),
                      SolverConfig(t_total=1e-6, h=2e-10, stride=5000))
        p1212 = traj.states[-1, layout.pop_slot(12)]
        p22 = two_level_steady_state(ratio * DECAY, DECAY, GAMMA_COH, 0.0)
        rels.append(abs((p22 - p1212) / p22))
    monotone = all(a > b for a, b in zip(rels, rels[1:]))
    # golden threshold frozen from a dense-integrator reference run of this
    # comparison (measured 2.55e-3 at Omega = Gamma; 2x headroom)
    ok = monotone and rels[-1] < 5e-3
    report("two-level-equivalence-fig8", ok,
           "rel diffs " + ", ".join(f"{r:.2e}" for r in rels))


def test_twelve_pi_structure(configs_dir, warm_kernels):
    doc = load_config(str(configs_dir / "twelve_pi_temporal.json"))
    res = run_evolve(doc)
    p6 = np.abs(res.trajectory.states[:, layout.pop_slot(6)]).max()
    p12 = np.abs(res.trajectory.states[:, layout.pop_slot(12)]).max()
    ok = p6 <= 1e-10 and p12 <= 1e-10
    report("twelve-pi-structure", ok, f"max pop level 6: {p6:.1e}, level 12: {p12:.1e}")


def test_equation_counts():
    ok = (equation_count(2) == 3 and equation_count(3) == 6
          and equation_count(12) == 78 and equation_count(30) == 465)
    report("equation-counts", ok, "2->3, 3->6, 12->78, 30->465")


def test_rk4_convergence_order(two_level, warm_kernels):
    gen = compile(generate(two_level.diagram), two_level.params)
    t_end = 1e-7
    y0 = np.array([1.0, 0.0, 0.0, 0.0])

    def final(h):
        return evolve(gen, y0, SolverConfig(t_end, h, int(t_end / h + 0.5))).states[-1]

    ref = final(1e-11)
    hs = [1e-9, 5e-10, 2.5e-10]
    errs = [np.max(np.abs(final(h) - ref)) for h in hs]
    slopes = [math.log2(errs[k] / errs[k + 1]) for k in range(len(errs) - 1)]
    ok = all(3.7 <= s <= 4.3 for s in slopes)
    report("rk4-order", ok, "slopes " + ", ".join(f"{s:.3f}" for s in slopes))


CC = ["cc", "-std=c99", "-pedantic", "-O2", "-ffp-contract=off"]


def _run_c(tmp_path, tag, source):
    cfile = tmp_path / f"{tag}.c"
    exe = tmp_path / tag
    cfile.write_text(source)
    proc = subprocess.run(CC + ["-o", str(exe), str(cfile)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    out = subprocess.run([str(exe)], capture_output=True, text=True)
    return np.loadtxt(out.stdout.splitlines())


def test_codegen_equivalence_all_presets(tmp_path, warm_kernels):
    solver_for = {
        "two_level": SolverConfig(1e-6, 5e-12, 100),
        "lambda": SolverConfig(2e-6, 1e-9, 100),
        "twelve_sigma_plus": SolverConfig(1e-6, 2e-10, 500),
        "twelve_pi": SolverConfig(1e-6, 2e-10, 500),
    }
    details = []
    worst = 0.0
    for name, solver in solver_for.items():
        p = preset(name)
        system = generate(p.diagram)
        n = p.diagram.n_levels
        obs = (Element(1, 1), Element(n, n), Element(1, 2))
        req = CodegenRequest(system=system, diagram=p.diagram, params=p.params,
                             mode="temporal", solver=solver, observables=obs)
        rep = equivalence_check(req, _run_c(tmp_path, f"t_{name}", emit(req).text))
        assert rep.shape_ok
        worst = max(worst, rep.max_abs_diff)
        details.append(f"{name}[t]={rep.max_abs_diff:.1e}")

        swp = SweepConfig(width_mhz=10, step_mhz=1, swept_mode=1,
                          t_interaction=5e-7, h=1e-9)
        req = CodegenRequest(system=system, diagram=p.diagram, params=p.params,
                             mode="detuning", solver=solver, sweep=swp,
                             observables=obs)
        rep = equivalence_check(req, _run_c(tmp_path, f"d_{name}", emit(req).text))
        assert rep.shape_ok
        worst = max(worst, rep.max_abs_diff)
        details.append(f"{name}[d]={rep.max_abs_diff:.1e}")
    report("codegen-equivalence", worst <= 1e-12,
           f"max |diff| {worst:.2e} ({'; '.join(details)})")


def test_parallel_determinism(two_level, warm_kernels):
    system = generate(two_level.diagram)
    cfg = SweepConfig(width_mhz=40, step_mhz=2, swept_mode=1,
                      t_interaction=1e-6, h=1e-9)
    serial = sweep(system, two_level.params, two_level.diagram, cfg, workers=1)
    parallel = sweep(system, two_level.params, two_level.diagram, cfg, workers=8)
    ok = (np.array_equal(serial.final_states, parallel.final_states)
          and np.array_equal(serial.detunings_mhz, parallel.detunings_mhz))
    report("parallel-determinism", ok, "1 worker vs 8 workers bitwise identical")

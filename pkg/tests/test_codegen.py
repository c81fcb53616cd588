import subprocess

import numpy as np
import pytest

from blochtk.codegen import (CodegenError, CodegenRequest, emit,
                             equivalence_check, native_table)
from blochtk.dynamics import SolverConfig, SweepConfig
from blochtk.generator import Element, generate
from blochtk.presets import preset

CC = ["cc", "-std=c99", "-pedantic", "-O2", "-ffp-contract=off"]


def _request(name, mode="temporal", solver=None, sweep=None, observables=None):
    p = preset(name)
    system = generate(p.diagram)
    if observables is None:
        n = p.diagram.n_levels
        observables = (Element(1, 1), Element(n, n), Element(1, 2))
    return CodegenRequest(
        system=system, diagram=p.diagram, params=p.params, mode=mode,
        solver=solver or SolverConfig(1e-6, 5e-12, 100),
        sweep=sweep, observables=tuple(observables))


def compile_and_run(tmp_path, source: str) -> np.ndarray:
    cfile = tmp_path / "solver.c"
    exe = tmp_path / "solver"
    cfile.write_text(source)
    proc = subprocess.run(CC + ["-o", str(exe), str(cfile)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    out = subprocess.run([str(exe)], capture_output=True, text=True)
    assert out.returncode == 0
    return np.loadtxt(out.stdout.splitlines())


def test_two_level_temporal_anchors():
    src = emit(_request("two_level"))
    for anchor in (
        "double const h = 5e-12",
        "double const tTotal = 1e-06",
        "int const dt = 100",
        "Gamma21 = decay/1.0;",
        "gamma12 = 0.5*decay;",
        "pop[1] = 1.0/1.0;",
        "A12 = freqRabi;",
        "//Adjustments 5 - Detunings",
    ):
        assert anchor in src.text, anchor


def test_lambda_detuning_anchors():
    sweep = SweepConfig(width_mhz=40, step_mhz=0.2, swept_mode=1,
                        t_interaction=10e-6, h=1e-9)
    src = emit(_request("lambda", mode="detuning", sweep=sweep))
    assert "delta31 = delta21 + delta32;" in src.text
    assert "delta21 = 2*Pi*passo*d*1e6;   //Field sweeping frequency" in src.text
    assert "double const spectrumWidth = 40;" in src.text
    assert "double const passo = 0.2;" in src.text
    assert "pop[1] = 1.0/2.0;" in src.text
    assert "Gamma21 = decay/2.0;" in src.text


def test_twelve_sigma_temporal_anchors():
    src = emit(_request("twelve_sigma_plus",
                        solver=SolverConfig(1e-6, 2e-10, 100)))
    for anchor in (
        "Gamma61 = decay/1.0;",
        "Gamma71 = decay/2.0;",
        "Gamma81 = decay/3.0;",
        "Gamma72 = decay/2.0;",
        "pop[1] = 1.0/5.0;",
        "gamma16 = 0.5*decay;",
        "gamma12 = 0;",
    ):
        assert anchor in src.text, anchor
    # multi-digit level indices get underscore separation
    assert "Gamma12_5 = decay/1.0;" in src.text
    assert "A5_12" in src.text


def test_emit_deterministic():
    a = emit(_request("lambda"))
    b = emit(_request("lambda"))
    assert a.text == b.text
    assert a.manifest == b.manifest


def test_manifest_covers_five_groups():
    src = emit(_request("two_level"))
    assert set(src.manifest) == {
        "adjustments_1_integration", "adjustments_2_rabi",
        "adjustments_3_decays", "adjustments_4_initial",
        "adjustments_5_detunings"}
    assert set(src.manifest["adjustments_1_integration"]) == {"tTotal", "h", "dt"}
    assert "freqRabi" in src.manifest["adjustments_2_rabi"]
    assert "decay" in src.manifest["adjustments_3_decays"]
    assert "pop[1]" in src.manifest["adjustments_4_initial"]
    assert "delta21" in src.manifest["adjustments_5_detunings"]
    # anchors point at the right lines
    lines = src.text.splitlines()
    for group in src.manifest.values():
        for symbol, lineno in group.items():
            assert symbol.split("[")[0] in lines[lineno - 1]


def test_all_presets_compile_clean(tmp_path):
    for name in ("two_level", "lambda", "twelve_sigma_plus", "twelve_pi"):
        src = emit(_request(name, solver=SolverConfig(1e-8, 1e-9, 10)))
        cfile = tmp_path / f"{name}.c"
        cfile.write_text(src.text)
        proc = subprocess.run(CC + ["-o", str(tmp_path / name), str(cfile)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, (name, proc.stderr)


def test_temporal_equivalence(tmp_path):
    req = _request("two_level", solver=SolverConfig(1e-6, 5e-12, 100),
                   observables=(Element(1, 1), Element(2, 2), Element(1, 2)))
    table = compile_and_run(tmp_path, emit(req).text)
    rep = equivalence_check(req, table)
    assert rep.shape_ok and rep.rows == 2001
    assert rep.max_abs_diff <= 1e-12


def test_zero_field_exact_equality(tmp_path):
    p = preset("two_level")
    p.params.rabi[(1, 2)] = 0.0
    system = generate(p.diagram)
    req = CodegenRequest(system=system, diagram=p.diagram, params=p.params,
                         mode="temporal", solver=SolverConfig(1e-7, 1e-9, 10),
                         observables=(Element(1, 1), Element(2, 2)))
    table = compile_and_run(tmp_path, emit(req).text)
    rep = equivalence_check(req, table)
    assert rep.max_abs_diff == 0.0


def test_detuning_equivalence(tmp_path):
    sweep = SweepConfig(width_mhz=40, step_mhz=0.2, swept_mode=1,
                        t_interaction=2e-6, h=1e-9)
    req = _request("lambda", mode="detuning", sweep=sweep,
                   observables=(Element(1, 2), Element(1, 3)))
    table = compile_and_run(tmp_path, emit(req).text)
    rep = equivalence_check(req, table)
    assert rep.shape_ok and rep.rows == 201
    assert rep.max_abs_diff <= 1e-12


def test_equivalence_shape_mismatch():
    req = _request("two_level", solver=SolverConfig(1e-8, 1e-9, 10))
    rep = equivalence_check(req, np.zeros((3, 2)))
    assert not rep.shape_ok and not rep.ok


def test_request_validation():
    p = preset("two_level")
    system = generate(p.diagram)
    with pytest.raises(CodegenError):
        CodegenRequest(system=system, diagram=p.diagram, params=p.params,
                       mode="temporal", solver=SolverConfig(1e-6, 5e-12),
                       observables=())
    with pytest.raises(CodegenError):
        CodegenRequest(system=system, diagram=p.diagram, params=p.params,
                       mode="detuning", solver=SolverConfig(1e-6, 5e-12),
                       observables=(Element(1, 1),))
    with pytest.raises(CodegenError):
        CodegenRequest(system=system, diagram=p.diagram, params=p.params,
                       mode="detuning", solver=SolverConfig(1e-6, 5e-12),
                       sweep=SweepConfig(width_mhz=10, step_mhz=1, swept_mode=7,
                                         t_interaction=1e-6, h=1e-9),
                       observables=(Element(1, 1),))


def test_native_table_columns():
    req = _request("two_level", solver=SolverConfig(1e-8, 1e-9, 1),
                   observables=(Element(1, 1), Element(1, 2)))
    table = native_table(req)
    assert table.shape == (11, 4)  # t, rho11, re s12, im s12

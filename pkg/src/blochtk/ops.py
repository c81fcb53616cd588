"""Operations shared by the command line and the request endpoint.

Each function takes a validated :class:`~blochtk.config.ConfigDocument`
and returns plain data; the CLI formats it as text/CSV/figures and the
server as JSON.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import layout
from .analysis import Curve, fwhm_interpolated, lorentzian_fit, peak_find
from .codegen import CodegenRequest, EmittedSource, emit
from .config import ConfigDocument
from .dynamics import Spectrum, Trajectory, compile, evolve, sweep, trace_error
from .generator import BlochSystem, equation_count, generate, render
from .levels import ValidationReport, validate


class InvalidDiagram(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(str(report))


def checked_system(doc: ConfigDocument) -> BlochSystem:
    report = validate(doc.diagram)
    if not report.ok:
        raise InvalidDiagram(report)
    return generate(doc.diagram)


def run_equations(doc: ConfigDocument, fmt: str = "plain") -> tuple[str, int]:
    system = checked_system(doc)
    n = doc.diagram.n_levels
    return render(system, fmt), equation_count(n)


@dataclass
class EvolveResult:
    trajectory: Trajectory
    columns: list[tuple[str, int]]
    trace_error: float
    final_residual: float


def run_evolve(doc: ConfigDocument) -> EvolveResult:
    system = checked_system(doc)
    gen = compile(system, doc.params())
    traj = evolve(gen, doc.initial_state(), doc.solver())
    cols = layout.observable_columns(doc.diagram.n_levels,
                                     [(e.i, e.j) for e in doc.default_observables()])
    residual = float(np.max(np.abs(gen.rhs(traj.states[-1]))))
    return EvolveResult(trajectory=traj, columns=cols,
                        trace_error=trace_error(traj), final_residual=residual)


@dataclass
class SweepResult:
    spectrum: Spectrum
    columns: list[tuple[str, int]]
    trace_error: float


def run_sweep(doc: ConfigDocument, workers: int = 1) -> SweepResult:
    system = checked_system(doc)
    spec = sweep(system, doc.params(), doc.diagram, doc.sweep(),
                 init=doc.initial_state() if doc.initial is not None else None,
                 workers=workers)
    cols = layout.observable_columns(doc.diagram.n_levels,
                                     [(e.i, e.j) for e in doc.default_observables()])
    return SweepResult(spectrum=spec, columns=cols, trace_error=trace_error(spec))


def run_codegen(doc: ConfigDocument, mode: str) -> EmittedSource:
    system = checked_system(doc)
    request = CodegenRequest(
        system=system, diagram=doc.diagram, params=doc.params(), mode=mode,
        solver=doc.solver(),
        sweep=doc.sweep() if mode == "detuning" else None,
        observables=tuple(doc.default_observables()),
        initial_state=doc.initial_state() if doc.initial is not None else None,
    )
    return emit(request)


def analyze_columns(x: np.ndarray, table: np.ndarray,
                    columns: list[tuple[str, int]]) -> list[str]:
    """Per-column peak/width report lines for a sweep table."""
    lines: list[str] = []
    for k, (name, _) in enumerate(columns):
        y = table[:, k]
        curve = Curve(x, y)
        peaks = peak_find(curve)
        lines.append(f"{name}: {len(peaks)} peak(s)"
                     + (f" at {', '.join(f'{p[0]:.4g} MHz' for p in peaks)}" if peaks else ""))
        if len(peaks) == 1:
            try:
                w = fwhm_interpolated(curve)
                fit = lorentzian_fit(curve)
                lines.append(f"{name}: FWHM {w:.6g} MHz (interpolated), "
                             f"{fit.fwhm:.8g} MHz (Lorentzian fit, center {fit.center:.4g} MHz)")
            except (ValueError, np.linalg.LinAlgError):
                pass
        elif len(peaks) == 2:
            lines.append(f"{name}: peak separation {peaks[1][0] - peaks[0][0]:.6g} MHz")
    return lines

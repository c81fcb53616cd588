"""Standalone C solver emission for a generated Bloch system.

The emitted file is a single-translation-unit C99 program with no
dependencies beyond the standard library. Its layout follows the classic
downloadable-solver shape: five labeled "Adjustments" groups (integration
constants, Rabi frequencies, decays, initial conditions, detunings), a
``pop[]`` state array in the canonical real layout, and a fixed-step RK4
kernel whose per-term accumulation order is identical to the native
engine, so both produce the same numbers to rounding noise.

Temporal mode prints one line per recorded step: time, then the requested
observables. Detuning mode re-binds the swept variable per grid index
``d`` through the same ``2*Pi*passo*d*1e6`` expression the engine uses and
prints the detuning in MHz followed by the final-state observables.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import layout
from .dynamics import NumericGenerator, SolverConfig, SweepConfig, compile, evolve, sweep
from .generator import BlochSystem, Element, ParameterSet, TermKind
from .levels import LevelDiagram, default_initial_state

Pair = tuple[int, int]

HEADER = """\
//Adjustments to be made (type control + F to find what needs to be adjusted)
//Adjustments 1 - Spectrum and temporal integration
//Adjustments 2 - Rabi frequencies
//Adjustments 3 - Decays
//Adjustments 4 - Initial conditions
//Adjustments 5 - Detunings
"""

PI_LITERAL = "3.141592653589793"


class CodegenError(ValueError):
    pass


@dataclass(frozen=True)
class CodegenRequest:
    system: BlochSystem
    diagram: LevelDiagram
    params: ParameterSet
    mode: str  # "temporal" | "detuning"
    solver: SolverConfig
    sweep: SweepConfig | None = None
    observables: tuple[Element, ...] = ()
    initial_state: np.ndarray | None = None

    def __post_init__(self):
        if self.mode not in ("temporal", "detuning"):
            raise CodegenError(f"unknown mode {self.mode!r}")
        if (self.mode == "detuning") != (self.sweep is not None):
            raise CodegenError("sweep config must be present exactly in detuning mode")
        if not self.observables:
            raise CodegenError("at least one observable must be requested")
        if self.sweep is not None:
            driven_modes = {mode for (_, mode) in self.system.detunings.driven.values()}
            if self.sweep.swept_mode not in driven_modes:
                raise CodegenError(
                    f"swept mode {self.sweep.swept_mode} drives no coupling")

    def init_vector(self) -> np.ndarray:
        if self.initial_state is not None:
            return np.asarray(self.initial_state, dtype=float)
        return default_initial_state(self.diagram)


@dataclass
class EmittedSource:
    text: str
    manifest: dict[str, dict[str, int]]


# ---------------------------------------------------------------------------
# naming and literals


def _idx(i: int, j: int) -> str:
    # concatenated level numbers, underscore-separated once an index
    # exceeds one digit so names stay unambiguous up to N = 30
    return f"{i}{j}" if i <= 9 and j <= 9 else f"{i}_{j}"


def rabi_name(pair: Pair) -> str:
    return f"A{_idx(pair[0], pair[1])}"


def decay_name(channel: Pair) -> str:
    return f"Gamma{_idx(channel[0], channel[1])}"


def gamma_name(pair: Pair) -> str:
    return f"gamma{_idx(pair[0], pair[1])}"


def delta_name(pair: Pair) -> str:
    return f"delta{_idx(pair[1], pair[0])}"


def _c_num(v: float) -> str:
    if v == 0:
        return "0"
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


# ---------------------------------------------------------------------------
# emission


class _Writer:
    def __init__(self):
        self.lines: list[str] = []

    def w(self, text: str = "") -> int:
        """Append a line, returning its 1-based line number."""
        self.lines.append(text)
        return len(self.lines)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def emit(request: CodegenRequest) -> EmittedSource:
    """Emit the C solver source and its adjustable-symbol manifest."""
    gen = compile(request.system, request.params)
    n = request.diagram.n_levels
    neq = layout.state_len(n)
    w = _Writer()
    manifest: dict[str, dict[str, int]] = {
        "adjustments_1_integration": {},
        "adjustments_2_rabi": {},
        "adjustments_3_decays": {},
        "adjustments_4_initial": {},
        "adjustments_5_detunings": {},
    }

    for line in HEADER.splitlines():
        w.w(line)
    w.w()
    w.w("#include <stdio.h>")
    w.w()
    w.w(f"#define N {n}")
    w.w(f"#define NEQ {neq}")
    w.w()
    w.w(f"static double const Pi = {PI_LITERAL};")
    w.w()
    _emit_param_decls(w, gen)
    w.w("static double pop[NEQ + 1];")
    if request.mode == "detuning":
        w.w("static double popInit[NEQ + 1];")
    w.w()
    _emit_derivs(w, gen)
    w.w()
    _emit_rk4(w)
    w.w()
    w.w("int main(void)")
    w.w("{")
    _emit_rabi(w, gen, manifest)
    _emit_decays(w, gen, manifest)
    if request.mode == "temporal":
        _emit_detunings(w, gen, manifest, indent="    ", swept=None)
        w.w()
    _emit_initial(w, request, neq, manifest)
    if request.mode == "temporal":
        _emit_temporal_kernel(w, request, gen, manifest)
    else:
        _emit_detuning_kernel(w, request, gen, manifest)
    w.w("    return 0;")
    w.w("}")
    return EmittedSource(text=w.text(), manifest=manifest)


def _emit_param_decls(w: _Writer, gen: NumericGenerator) -> None:
    names: list[str] = []
    for pair in sorted({t.key for t in gen.terms if t.kind is TermKind.RABI_DRIVE}):
        names.append(rabi_name(pair))
    for ch in sorted({t.key for t in gen.terms
                      if t.kind in (TermKind.POP_DECAY_IN, TermKind.POP_DECAY_OUT)}):
        names.append(decay_name(ch))
    for pair in sorted({t.key for t in gen.terms if t.kind is TermKind.COHERENCE_DECAY}):
        names.append(gamma_name(pair))
    for pair in sorted({t.key for t in gen.terms if t.kind is TermKind.DETUNING}):
        names.append(delta_name(pair))
    for name in names:
        w.w(f"static double {name};")
    w.w()


def _coeff_text(term) -> tuple[str, str]:
    """(sign, body) of one accumulated term, e.g. ('-', '2*A12*y[4]')."""
    if term.kind is TermKind.RABI_DRIVE:
        sym = rabi_name(term.key)
    elif term.kind in (TermKind.POP_DECAY_IN, TermKind.POP_DECAY_OUT):
        sym = decay_name(term.key)
    elif term.kind is TermKind.COHERENCE_DECAY:
        sym = gamma_name(term.key)
    else:
        sym = delta_name(term.key)
    k = term.factor
    sign = "-" if k < 0 else "+"
    mag = abs(k)
    prefix = "" if mag == 1 else f"{mag}*"
    return sign, f"{prefix}{sym}*y[{term.source + 1}]"


def _emit_derivs(w: _Writer, gen: NumericGenerator) -> None:
    w.w("static void derivs(double const y[], double dy[])")
    w.w("{")
    for t in range(gen.n_state):
        lo, hi = gen.row_ptr[t], gen.row_ptr[t + 1]
        if lo == hi:
            w.w(f"    dy[{t + 1}] = 0;")
            continue
        parts = []
        for e in range(lo, hi):
            sign, body = _coeff_text(gen.terms[e])
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        w.w(f"    dy[{t + 1}] = " + " ".join(parts) + ";")
    w.w("}")


def _emit_rk4(w: _Writer) -> None:
    w.w("static void rk4_step(double h)")
    w.w("{")
    w.w("    static double k1[NEQ + 1], k2[NEQ + 1], k3[NEQ + 1], k4[NEQ + 1], tmp[NEQ + 1];")
    w.w("    int i;")
    w.w("    derivs(pop, k1);")
    w.w("    for (i = 1; i <= NEQ; i++) tmp[i] = pop[i] + (h/2.0)*k1[i];")
    w.w("    derivs(tmp, k2);")
    w.w("    for (i = 1; i <= NEQ; i++) tmp[i] = pop[i] + (h/2.0)*k2[i];")
    w.w("    derivs(tmp, k3);")
    w.w("    for (i = 1; i <= NEQ; i++) tmp[i] = pop[i] + h*k3[i];")
    w.w("    derivs(tmp, k4);")
    w.w("    for (i = 1; i <= NEQ; i++) pop[i] = pop[i] + (h/6.0)*(k1[i] + 2.0*k2[i] + 2.0*k3[i] + k4[i]);")
    w.w("}")


def _emit_rabi(w: _Writer, gen: NumericGenerator, manifest) -> None:
    group = manifest["adjustments_2_rabi"]
    w.w("    //******* Adjustments 2 - Rabi frequencies *******//")
    w.w("    //Real part of Rabi frequencies")
    rabi = gen.params.rabi
    pairs = sorted({t.key for t in gen.terms if t.kind is TermKind.RABI_DRIVE})
    values = [rabi[p] for p in pairs]
    if pairs and all(v == values[0] for v in values) and values[0] != 0:
        group["freqRabi"] = w.w(f"    double const freqRabi = {_c_num(values[0])};")
        w.w()
        for p in pairs:
            group[rabi_name(p)] = w.w(f"    {rabi_name(p)} = freqRabi;")
    else:
        for p in pairs:
            group[rabi_name(p)] = w.w(f"    {rabi_name(p)} = {_c_num(rabi[p])};")
    w.w()


def _emit_decays(w: _Writer, gen: NumericGenerator, manifest) -> None:
    group = manifest["adjustments_3_decays"]
    w.w("    //******* Adjustments 3 - Decays *******//")
    w.w("    //Decay rates of excited states")
    decay = gen.params.decay
    channels = sorted({t.key for t in gen.terms
                       if t.kind in (TermKind.POP_DECAY_IN, TermKind.POP_DECAY_OUT)})
    totals: dict[int, float] = {}
    for (u, l) in channels:
        totals[u] = totals.get(u, 0.0) + decay[(u, l)]
    ref = max(totals.values(), default=0.0)
    if channels and ref > 0:
        group["decay"] = w.w(f"    double const decay = {_c_num(ref)};")
        w.w()
    for ch in channels:
        v = decay[ch]
        expr = _c_num(v)
        if ref > 0 and v > 0:
            k = int(round(ref / v))
            if k >= 1 and ref / k == v:
                expr = f"decay/{k}.0"
        group[decay_name(ch)] = w.w(f"    {decay_name(ch)} = {expr};")
    w.w()
    w.w("    //Decay rates of coherences")
    for pair in sorted({t.key for t in gen.terms if t.kind is TermKind.COHERENCE_DECAY}):
        v = gen.params.gamma[pair]
        if v == 0:
            expr = "0"
        elif ref > 0 and v == 0.5 * ref:
            expr = "0.5*decay"
        elif ref > 0 and v == ref:
            expr = "decay"
        else:
            expr = _c_num(v)
        group[gamma_name(pair)] = w.w(f"    {gamma_name(pair)} = {expr};")
    w.w()


def _emit_detunings(w: _Writer, gen: NumericGenerator, manifest, indent: str,
                    swept: SweepConfig | None) -> None:
    group = manifest["adjustments_5_detunings"]
    dmap = gen.system.detunings
    if swept is None:
        w.w(f"{indent}//******* Adjustments 5 - Detunings *******//")
    else:
        w.w(f"{indent}//******* Adjustments 5 - Detunings *********//")
        w.w(f"{indent}//*******************************************//")
    swept_pairs = []
    plain_pairs = []
    for pair, (orient, mode) in sorted(dmap.driven.items()):
        if swept is not None and mode == swept.swept_mode:
            swept_pairs.append((pair, orient))
        else:
            plain_pairs.append((pair, orient, mode))
    for pair, orient in swept_pairs:
        expr = "2*Pi*passo*d*1e6" if orient > 0 else "-(2*Pi*passo*d*1e6)"
        group[delta_name(pair)] = w.w(
            f"{indent}{delta_name(pair)} = {expr};   //Field sweeping frequency")
    for pair, orient, mode in plain_pairs:
        v = orient * gen.params.mode_detuning[mode]
        group[delta_name(pair)] = w.w(f"{indent}{delta_name(pair)} = {_c_num(v)};")
    composed = [(p, steps) for p, steps in sorted(dmap.steps.items())
                if p not in dmap.driven]
    if composed:
        w.w()
        w.w(f"{indent}//Two-photon coherences")
        for pair, steps in composed:
            if not steps:
                group[delta_name(pair)] = w.w(f"{indent}{delta_name(pair)} = 0;")
                continue
            parts = []
            for sign, dp in steps:
                body = delta_name(dp)
                if not parts:
                    parts.append(body if sign > 0 else f"-{body}")
                else:
                    parts.append(f"{'+' if sign > 0 else '-'} {body}")
            group[delta_name(pair)] = w.w(
                f"{indent}{delta_name(pair)} = " + " ".join(parts) + ";")
    if swept is not None:
        w.w(f"{indent}//*******************************************//")


def _pop_literal(v: float, n: int) -> str:
    if v == 0:
        return "0"
    for k in range(1, n + 1):
        if v == 1.0 / k:
            return f"1.0/{k}.0"
    return repr(float(v))


def _emit_initial(w: _Writer, request: CodegenRequest, neq: int, manifest) -> None:
    group = manifest["adjustments_4_initial"]
    n = request.diagram.n_levels
    init = request.init_vector()
    w.w("    //******* Adjustments 4 - Initial conditions *******//")
    w.w("    //Initial populations")
    for i in range(n):
        group[f"pop[{i + 1}]"] = w.w(f"    pop[{i + 1}] = {_pop_literal(init[i], n)};")
    w.w()
    w.w("    //Initial coherences")
    for s in range(n, neq):
        group[f"pop[{s + 1}]"] = w.w(f"    pop[{s + 1}] = {_pop_literal(init[s], n)};")
    w.w()


def _printf_stmt(first_expr: str, request: CodegenRequest) -> str:
    n = request.diagram.n_levels
    cols = layout.observable_columns(n, [(el.i, el.j) for el in request.observables])
    fmt = " ".join(["%.17g"] * (1 + len(cols))) + "\\n"
    args = [first_expr] + [f"pop[{slot + 1}]" for (_, slot) in cols]
    return f'printf("{fmt}", ' + ", ".join(args) + ");"


def _emit_temporal_kernel(w: _Writer, request: CodegenRequest,
                          gen: NumericGenerator, manifest) -> None:
    group = manifest["adjustments_1_integration"]
    cfg = request.solver
    w.w("    //******* Adjustments 1 - Spectrum and temporal integration *******//")
    w.w("    //Integration time")
    group["tTotal"] = w.w(f"    double const tTotal = {repr(float(cfg.t_total))};")
    w.w()
    w.w("    //Time integration step")
    group["h"] = w.w(f"    double const h = {repr(float(cfg.h))};")
    w.w()
    w.w("    //Interval between points in the graph, in units of h")
    group["dt"] = w.w(f"    int const dt = {cfg.stride};")
    w.w()
    w.w("    long const nSteps = (long)(tTotal/h + 0.5);")
    w.w("    long step;")
    w.w()
    w.w("    " + _printf_stmt("0.0", request))
    w.w("    for (step = 1; step <= nSteps; step++) {")
    w.w("        rk4_step(h);")
    w.w("        if (step % dt == 0) {")
    w.w("            " + _printf_stmt("step*h", request))
    w.w("        }")
    w.w("    }")


def _emit_detuning_kernel(w: _Writer, request: CodegenRequest,
                          gen: NumericGenerator, manifest) -> None:
    group = manifest["adjustments_1_integration"]
    cfg = request.sweep
    assert cfg is not None
    w.w("    //******* Adjustments 1 - Spectrum and temporal integration *******//")
    w.w("    //Spectrum width, in MHz")
    group["spectrumWidth"] = w.w(f"    double const spectrumWidth = {_c_num(cfg.width_mhz)};")
    w.w()
    w.w("    //Detuning step, in MHz")
    group["passo"] = w.w(f"    double const passo = {_c_num(cfg.step_mhz)};")
    w.w()
    w.w("    //Interaction time, in s")
    group["tTotal"] = w.w(f"    double const tTotal = {repr(float(cfg.t_interaction))};")
    w.w()
    w.w("    //Time integration step")
    group["h"] = w.w(f"    double const h = {repr(float(cfg.h))};")
    w.w()
    w.w("    long const nSteps = (long)(tTotal/h + 0.5);")
    w.w("    int const gridHalf = (int)(spectrumWidth/(2.0*passo) + 0.5);")
    w.w("    long step;")
    w.w("    int d, i;")
    w.w()
    w.w("    for (i = 1; i <= NEQ; i++) popInit[i] = pop[i];")
    w.w()
    w.w("    for (d = -gridHalf; d <= gridHalf; d++) {")
    _emit_detunings(w, gen, manifest, indent="        ", swept=cfg)
    w.w()
    w.w("        for (i = 1; i <= NEQ; i++) pop[i] = popInit[i];")
    w.w("        for (step = 1; step <= nSteps; step++) {")
    w.w("            rk4_step(h);")
    w.w("        }")
    w.w("        " + _printf_stmt("passo*d", request))
    w.w("    }")


# ---------------------------------------------------------------------------
# equivalence against the native engine


@dataclass
class EquivalenceReport:
    max_abs_diff: float
    rows: int
    cols: int
    shape_ok: bool

    @property
    def ok(self) -> bool:
        return self.shape_ok and self.max_abs_diff <= 1e-12


def native_table(request: CodegenRequest) -> np.ndarray:
    """The table the native engine produces for the same request."""
    n = request.diagram.n_levels
    cols = layout.observable_columns(n, [(el.i, el.j) for el in request.observables])
    slots = [slot for (_, slot) in cols]
    if request.mode == "temporal":
        gen = compile(request.system, request.params)
        traj = evolve(gen, request.init_vector(), request.solver)
        return np.column_stack([traj.times] + [traj.states[:, s] for s in slots])
    spec = sweep(request.system, request.params, request.diagram, request.sweep,
                 init=request.initial_state)
    return np.column_stack([spec.detunings_mhz]
                           + [spec.final_states[:, s] for s in slots])


def equivalence_check(request: CodegenRequest, compiled_output: np.ndarray) -> EquivalenceReport:
    """Compare a compiled run's parsed output table against the engine."""
    ref = native_table(request)
    got = np.atleast_2d(np.asarray(compiled_output, dtype=float))
    if got.shape != ref.shape:
        return EquivalenceReport(max_abs_diff=float("inf"), rows=got.shape[0],
                                 cols=got.shape[1] if got.ndim == 2 else 0,
                                 shape_ok=False)
    diff = float(np.max(np.abs(got - ref)))
    return EquivalenceReport(max_abs_diff=diff, rows=ref.shape[0],
                             cols=ref.shape[1], shape_ok=True)

"""Numeric integration of a generated Bloch system.

The complex term list is expanded over the canonical real state layout
(populations, then Re/Im coherence pairs) and integrated with classical
fixed-step fourth-order Runge-Kutta. The expansion, term ordering, and
kernel arithmetic are mirrored one-to-one by the emitted C solvers, so the
two agree to rounding noise on identical grids.

Detuning sweeps integrate each grid point independently from the same
initial state; points may run on worker threads and the result is ordered
by grid index, bitwise identical for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import layout
from .generator import BlochSystem, ParameterSet, TermKind
from .levels import LevelDiagram, default_initial_state

Pair = tuple[int, int]


class NonFiniteStateError(RuntimeError):
    def __init__(self, step: int, context: str = ""):
        self.step = step
        suffix = f" ({context})" if context else ""
        super().__init__(f"non-finite state encountered at step {step}{suffix}")


@dataclass(frozen=True)
class SolverConfig:
    """Fixed-step integration window: total time, step, output stride."""

    t_total: float
    h: float
    stride: int = 100

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("step h must be positive")
        if self.t_total < self.h:
            raise ValueError("t_total must be at least one step")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(self.t_total / self.h + 0.5)


@dataclass(frozen=True)
class SweepConfig:
    """Symmetric detuning grid for one swept mode."""

    width_mhz: float
    step_mhz: float
    swept_mode: int
    t_interaction: float
    h: float

    def __post_init__(self):
        if self.step_mhz <= 0:
            raise ValueError("step_mhz must be positive")
        if self.width_mhz < self.step_mhz:
            raise ValueError("width_mhz must be >= step_mhz")

    @property
    def half_points(self) -> int:
        return int(self.width_mhz / (2.0 * self.step_mhz) + 0.5)

    @property
    def grid(self) -> list[int]:
        half = self.half_points
        return list(range(-half, half + 1))


@dataclass(frozen=True)
class Trajectory:
    n_levels: int
    times: np.ndarray
    states: np.ndarray  # (n_rec, n_state)


@dataclass(frozen=True)
class Spectrum:
    n_levels: int
    detunings_mhz: np.ndarray
    final_states: np.ndarray  # (n_points, n_state)


@dataclass(frozen=True)
class RealTerm:
    """d state[target] / dt += factor * parameter * state[source]."""

    target: int
    source: int
    factor: int
    kind: TermKind
    key: Pair


class NumericGenerator:
    """Bound right-hand-side evaluator over the real state layout.

    Immutable once built; safe to share across threads. ``coefficients``
    returns the per-term coefficient vector for given mode detunings, which
    is the only part a sweep rebinds.
    """

    def __init__(self, system: BlochSystem, params: ParameterSet):
        params.check_bound(system)
        self.system = system
        self.params = params
        self.n_levels = system.n_levels
        self.n_state = layout.state_len(system.n_levels)
        self.terms = _real_terms(system)
        order = np.argsort([t.target for t in self.terms], kind="stable")
        self.terms = [self.terms[k] for k in order]
        self.cols = np.array([t.source for t in self.terms], dtype=np.int64)
        targets = np.array([t.target for t in self.terms], dtype=np.int64)
        self.row_ptr = np.zeros(self.n_state + 1, dtype=np.int64)
        np.add.at(self.row_ptr, targets + 1, 1)
        self.row_ptr = np.cumsum(self.row_ptr)
        self._detuning_entries: dict[Pair, list[int]] = {}
        for e, t in enumerate(self.terms):
            if t.kind is TermKind.DETUNING:
                self._detuning_entries.setdefault(t.key, []).append(e)
        self.base_vals = self.coefficients(params.mode_detuning)

    def coefficients(self, mode_detuning: dict[int, float]) -> np.ndarray:
        vals = np.empty(len(self.terms))
        for e, t in enumerate(self.terms):
            if t.kind is TermKind.RABI_DRIVE:
                p = self.params.rabi[t.key]
            elif t.kind in (TermKind.POP_DECAY_IN, TermKind.POP_DECAY_OUT):
                p = self.params.decay[t.key]
            elif t.kind is TermKind.COHERENCE_DECAY:
                p = self.params.gamma[t.key]
            else:
                p = self.system.detunings.value(t.key, mode_detuning)
            vals[e] = t.factor * p
        return vals

    def rhs(self, y: np.ndarray) -> np.ndarray:
        """Pure derivative evaluation f(state) -> d(state)/dt."""
        y = np.asarray(y, dtype=float)
        dy = np.zeros(self.n_state)
        for e, t in enumerate(self.terms):
            dy[t.target] += self.base_vals[e] * y[t.source]
        return dy


def _expand_real(term, n: int) -> list[tuple[int, int, int]]:
    """Real sub-terms (target_slot, source_slot, factor) of a complex term."""
    t, s = term.target, term.source
    eps = -1 if term.conjugate_source else 1
    sig_im = int(term.scalar.imag)
    sig_re = int(term.scalar.real)
    out: list[tuple[int, int, int]] = []
    if t.is_population:
        pt = layout.pop_slot(t.i)
        if s.is_population:
            out.append((pt, layout.pop_slot(s.i), sig_re))
        else:
            out.append((pt, layout.im_slot(n, s.i, s.j), -sig_im * eps))
    else:
        rt, it = layout.re_slot(n, t.i, t.j), layout.im_slot(n, t.i, t.j)
        if s.is_population:
            out.append((it, layout.pop_slot(s.i), sig_im))
        else:
            rs, is_ = layout.re_slot(n, s.i, s.j), layout.im_slot(n, s.i, s.j)
            if sig_im:
                out.append((rt, is_, -sig_im * eps))
                out.append((it, rs, sig_im))
            else:
                out.append((rt, rs, sig_re))
                out.append((it, is_, sig_re * eps))
    return [e for e in out if e[2] != 0]


def _real_terms(system: BlochSystem) -> list[RealTerm]:
    n = system.n_levels
    raw: list[RealTerm] = []
    for term in system.terms:
        for (tgt, src, fac) in _expand_real(term, n):
            raw.append(RealTerm(tgt, src, fac, term.kind, term.key))
    # merge structurally identical contributions (same slot pair and handle),
    # keeping first-occurrence order; the C emitter performs the same merge
    merged: dict[tuple[int, int, TermKind, Pair], int] = {}
    order: list[tuple[int, int, TermKind, Pair]] = []
    for rt in raw:
        k = (rt.target, rt.source, rt.kind, rt.key)
        if k not in merged:
            merged[k] = 0
            order.append(k)
        merged[k] += rt.factor
    return [RealTerm(k[0], k[1], merged[k], k[2], k[3]) for k in order if merged[k] != 0]


def compile(system: BlochSystem, params: ParameterSet) -> NumericGenerator:
    """Bind parameter values and build the real-layout evaluator."""
    return NumericGenerator(system, params)


def evolve(gen: NumericGenerator, init: np.ndarray, cfg: SolverConfig) -> Trajectory:
    """Integrate with classical RK4, recording every stride-th state."""
    y0 = np.asarray(init, dtype=float)
    if y0.shape != (gen.n_state,):
        raise ValueError(f"state must have length {gen.n_state}")
    if not np.all(np.isfinite(y0)):
        raise ValueError("initial state has non-finite entries")
    pops = y0[: gen.n_levels].sum()
    if abs(pops - 1.0) > 1e-12:
        raise ValueError(f"initial populations must sum to 1 (got {pops!r})")
    n_steps = cfg.n_steps
    n_rec = n_steps // cfg.stride + 1
    record = np.empty((n_rec, gen.n_state))
    from ._kernels import rk4_record

    status = rk4_record(gen.row_ptr, gen.cols, gen.base_vals, y0, cfg.h,
                        n_steps, cfg.stride, record)
    if status != 0:
        raise NonFiniteStateError(int(status))
    # times as (k * stride) * h, matching the emitted C solver bit for bit
    times = (np.arange(n_rec) * cfg.stride) * cfg.h
    return Trajectory(n_levels=gen.n_levels, times=times, states=record)


def sweep_detuning_value(step_mhz: float, d: int) -> float:
    """Swept-mode detuning at grid index d, identical to the C sweep line."""
    return 2 * math.pi * step_mhz * float(d) * 1e6


def sweep(system: BlochSystem, params: ParameterSet, diagram: LevelDiagram,
          cfg: SweepConfig, init: np.ndarray | None = None,
          workers: int = 1) -> Spectrum:
    """Final state after ``t_interaction`` at each grid detuning.

    The swept mode's detuning is rebound per point; all other modes keep
    their bound values. Points are independent, so any worker count gives
    bitwise identical output ordered by grid index.
    """
    if cfg.swept_mode not in params.mode_detuning:
        raise KeyError(f"swept mode {cfg.swept_mode} is not bound")
    gen = compile(system, params)
    y0 = default_initial_state(diagram) if init is None else np.asarray(init, dtype=float)
    n_steps = int(cfg.t_interaction / cfg.h + 0.5)
    grid = cfg.grid
    affected = [p for p, combo in system.detunings.mode_combo.items()
                if cfg.swept_mode in combo]
    from ._kernels import rk4_final

    def run_point(d: int) -> np.ndarray:
        det = dict(params.mode_detuning)
        det[cfg.swept_mode] = sweep_detuning_value(cfg.step_mhz, d)
        vals = gen.base_vals.copy()
        for pair in affected:
            dval = system.detunings.value(pair, det)
            for e in gen._detuning_entries.get(pair, []):
                vals[e] = gen.terms[e].factor * dval
        out = np.empty(gen.n_state)
        status = rk4_final(gen.row_ptr, gen.cols, vals, y0, cfg.h, n_steps, out)
        if status != 0:
            raise NonFiniteStateError(
                int(status), context=f"detuning {cfg.step_mhz * d} MHz")
        return out

    if workers <= 1:
        finals = [run_point(d) for d in grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            finals = list(pool.map(run_point, grid))
    det_mhz = np.array([cfg.step_mhz * float(d) for d in grid])
    return Spectrum(n_levels=gen.n_levels, detunings_mhz=det_mhz,
                    final_states=np.array(finals))


def trace_error(obj: Trajectory | Spectrum) -> float:
    """Maximum absolute deviation of the population sum from unity."""
    states = obj.states if isinstance(obj, Trajectory) else obj.final_states
    pops = states[:, : obj.n_levels].sum(axis=1)
    return float(np.max(np.abs(pops - 1.0)))


def steady_state_residual(gen: NumericGenerator, y: np.ndarray) -> float:
    """Diagnostic: max-norm of the derivative at ``y``."""
    return float(np.max(np.abs(gen.rhs(y))))

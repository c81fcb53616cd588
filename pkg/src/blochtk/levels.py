"""Level diagrams: the user-facing description of a driven multilevel system.

A :class:`LevelDiagram` collects levels, field modes, dipole couplings and
spontaneous-decay channels. Diagrams are immutable after construction and
must pass :func:`validate` before any equation generation.

Energies carry no absolute unit contract: they fix which level of a pair is
"upper" (and display positions); the dynamics depend only on detunings,
Rabi rates, and decay rates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import layout

MIN_LEVELS = 2
MAX_LEVELS = 30


@dataclass(frozen=True)
class Level:
    index: int
    energy: float
    label: str | None = None
    m_f: int | None = None


@dataclass(frozen=True)
class FieldMode:
    id: int


@dataclass(frozen=True)
class Coupling:
    """A single field mode driving one dipole-allowed transition."""

    upper: int
    lower: int
    mode: int

    @property
    def pair(self) -> tuple[int, int]:
        return (min(self.upper, self.lower), max(self.upper, self.lower))


@dataclass(frozen=True)
class DecayChannel:
    """Spontaneous population transfer from ``upper`` to ``lower``."""

    upper: int
    lower: int

    @property
    def key(self) -> tuple[int, int]:
        return (self.upper, self.lower)


@dataclass(frozen=True)
class LevelDiagram:
    levels: tuple[Level, ...]
    modes: tuple[FieldMode, ...]
    couplings: tuple[Coupling, ...]
    decays: tuple[DecayChannel, ...]

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    def level(self, index: int) -> Level:
        for lv in self.levels:
            if lv.index == index:
                return lv
        raise KeyError(f"no level with index {index}")

    def energy(self, index: int) -> float:
        return self.level(index).energy

    def out_channels(self, index: int) -> list[DecayChannel]:
        return [d for d in self.decays if d.upper == index]

    def stable_levels(self) -> list[int]:
        """Levels with no outgoing decay channel."""
        decaying = {d.upper for d in self.decays}
        return [lv.index for lv in self.levels if lv.index not in decaying]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def __str__(self) -> str:
        return "valid" if self.ok else "\n".join(str(v) for v in self.violations)


def validate(diagram: LevelDiagram) -> ValidationReport:
    """Check every structural constraint a diagram must satisfy.

    Returns a report listing all violations; an empty report means the
    diagram may be handed to the equation generator. Callers must refuse
    invalid diagrams.
    """
    rep = ValidationReport()
    n = diagram.n_levels

    if not (MIN_LEVELS <= n <= MAX_LEVELS):
        rep.add("level_count", f"need {MIN_LEVELS} <= N <= {MAX_LEVELS}, got {n}")
    indices = [lv.index for lv in diagram.levels]
    if sorted(indices) != list(range(1, n + 1)):
        rep.add("level_indices", f"level indices must be 1..{n} with no gaps or duplicates")
        return rep  # index errors poison everything else

    known = set(indices)
    mode_ids = [m.id for m in diagram.modes]
    if len(set(mode_ids)) != len(mode_ids):
        rep.add("mode_ids", "duplicate field-mode ids")
    used_modes = {c.mode for c in diagram.couplings}
    for m in diagram.modes:
        if m.id not in used_modes:
            rep.add("unused_mode", f"mode {m.id} drives no coupling")

    seen_pairs: set[tuple[int, int]] = set()
    for c in diagram.couplings:
        if c.upper == c.lower:
            rep.add("self_coupling", f"coupling on level {c.upper} with itself")
            continue
        if c.upper not in known or c.lower not in known:
            rep.add("coupling_ref", f"coupling {c.upper}-{c.lower} references unknown level")
            continue
        if c.mode not in set(mode_ids):
            rep.add("coupling_mode", f"coupling {c.upper}-{c.lower} references unknown mode {c.mode}")
        if diagram.energy(c.upper) <= diagram.energy(c.lower):
            rep.add("coupling_order",
                    f"coupling {c.upper}-{c.lower}: energy({c.upper}) must exceed energy({c.lower})")
        if c.pair in seen_pairs:
            rep.add("duplicate coupling",
                    f"pair {c.pair}: a single field mode drives each transition")
        seen_pairs.add(c.pair)

    seen_channels: set[tuple[int, int]] = set()
    for d in diagram.decays:
        if d.upper not in known or d.lower not in known:
            rep.add("decay_ref", f"decay {d.upper}->{d.lower} references unknown level")
            continue
        if diagram.energy(d.upper) <= diagram.energy(d.lower):
            rep.add("upward decay",
                    f"decay {d.upper}->{d.lower} is not strictly downward in energy")
        if d.key in seen_channels:
            rep.add("duplicate_decay", f"duplicate decay channel {d.upper}->{d.lower}")
        seen_channels.add(d.key)

    if rep.ok:
        # a rotating frame must exist: closed coupling loops need consistent
        # detuning sums (delegated to the frame construction)
        from .generator import LoopInconsistency, detuning_map

        try:
            detuning_map(diagram)
        except LoopInconsistency as exc:
            rep.add("loop_inconsistency", str(exc))
    return rep


def derived_gammas(diagram: LevelDiagram,
                   decay: dict[tuple[int, int], float]) -> dict[tuple[int, int], float]:
    """Coherence relaxation rates from the population decay channels.

    For each unordered level pair, the coherence damps at half the sum of
    the two states' total outgoing decay rates. Stable states contribute
    zero, so coherences between stable states are undamped.
    """
    totals = {lv.index: 0.0 for lv in diagram.levels}
    for d in diagram.decays:
        totals[d.upper] += decay[d.key]
    out: dict[tuple[int, int], float] = {}
    for (i, j) in layout.coherence_pairs(diagram.n_levels):
        out[(i, j)] = 0.5 * (totals[i] + totals[j])
    return out


def default_initial_state(diagram: LevelDiagram) -> np.ndarray:
    """Uniform population over the stable levels, all coherences zero.

    A level is stable when it has no outgoing decay channel. If no level is
    stable the population is spread uniformly over all levels instead, so a
    unit-trace state always exists.
    """
    n = diagram.n_levels
    y = np.zeros(layout.state_len(n))
    stable = diagram.stable_levels()
    targets = stable if stable else [lv.index for lv in diagram.levels]
    for idx in targets:
        y[layout.pop_slot(idx)] = 1.0 / len(targets)
    return y


def default_branching(diagram: LevelDiagram,
                      total_rate: float) -> dict[tuple[int, int], float]:
    """Split ``total_rate`` evenly over each decaying level's channels.

    Every decaying level then has the same total decay rate, i.e. all
    excited states share one lifetime.
    """
    rates: dict[tuple[int, int], float] = {}
    for lv in diagram.levels:
        chans = diagram.out_channels(lv.index)
        for ch in chans:
            rates[ch.key] = total_rate / len(chans)
    return rates

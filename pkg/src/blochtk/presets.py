"""Built-in example systems with their standard parameter bindings.

Four configurations ship with the toolkit: the driven two-level atom, the
three-level Lambda system, and the two 12-level Zeeman manifolds
(F=2 -> F'=3, sigma+ or pi polarization). Every preset validates cleanly
and carries the conventional rates: a 5 MHz (times 2*pi) total decay rate
split evenly over each excited state's channels, and zero detunings.

The user-facing numbers live in a :class:`~blochtk.config.ConfigDocument`
(ordinary MHz); :func:`preset` derives the bound rad/s parameter set from
it, so a preset and its exported config file agree bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

from .config import ConfigDocument
from .generator import ParameterSet
from .levels import Coupling, DecayChannel, FieldMode, Level, LevelDiagram

LINEWIDTH_MHZ = 5.0  # total decay rate of every excited state, in MHz

PRESET_NAMES = ("two_level", "lambda", "twelve_sigma_plus", "twelve_pi")

DEFAULT_SOLVER = {"t_total_s": 1e-6, "h_s": 5e-12, "stride": 100}


@dataclass(frozen=True)
class Preset:
    name: str
    diagram: LevelDiagram
    params: ParameterSet


def preset(name: str) -> Preset:
    doc = preset_document(name)
    return Preset(name=name, diagram=doc.diagram, params=doc.params())


def preset_document(name: str) -> ConfigDocument:
    if name == "two_level":
        diagram = LevelDiagram(
            levels=(Level(1, 0.0, "g"), Level(2, 1.0, "e")),
            modes=(FieldMode(1),),
            couplings=(Coupling(upper=2, lower=1, mode=1),),
            decays=(DecayChannel(upper=2, lower=1),),
        )
        rabi = {(1, 2): LINEWIDTH_MHZ}
    elif name == "lambda":
        # two stable lower states, one excited state decaying into both
        diagram = LevelDiagram(
            levels=(Level(1, 0.0, "g1"), Level(2, 1.0, "e"), Level(3, 0.1, "g2")),
            modes=(FieldMode(1), FieldMode(2)),
            couplings=(
                Coupling(upper=2, lower=1, mode=1),
                Coupling(upper=2, lower=3, mode=2),
            ),
            decays=(DecayChannel(2, 1), DecayChannel(2, 3)),
        )
        rabi = {(1, 2): 0.1 * LINEWIDTH_MHZ, (2, 3): 0.1 * LINEWIDTH_MHZ}
    elif name in ("twelve_sigma_plus", "twelve_pi"):
        diagram = _zeeman_diagram("sigma_plus" if name.endswith("plus") else "pi")
        rabi = {c.pair: LINEWIDTH_MHZ for c in diagram.couplings}
    else:
        raise KeyError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")

    rate_mhz: dict[tuple[int, int], float] = {}
    for lv in diagram.levels:
        chans = diagram.out_channels(lv.index)
        for ch in chans:
            rate_mhz[ch.key] = LINEWIDTH_MHZ / len(chans)
    return ConfigDocument(
        diagram=diagram,
        rabi_mhz=rabi,
        rate_mhz=rate_mhz,
        detuning_mhz={m.id: 0.0 for m in diagram.modes},
        solver_raw=dict(DEFAULT_SOLVER),
    )


def _zeeman_diagram(polarization: str) -> LevelDiagram:
    # levels 1..5: ground m_F = -2..+2; levels 6..12: excited m_F = -3..+3
    levels = tuple(
        [Level(i, 0.0, f"g{i}", m_f=i - 3) for i in range(1, 6)]
        + [Level(i, 1.0, f"e{i}", m_f=i - 9) for i in range(6, 13)]
    )
    m_f = {lv.index: lv.m_f for lv in levels}
    dm = 1 if polarization == "sigma_plus" else 0
    couplings = []
    for g in range(1, 6):
        for e in range(6, 13):
            if m_f[e] == m_f[g] + dm:
                couplings.append(Coupling(upper=e, lower=g, mode=1))
    decays = []
    for e in range(6, 13):
        for g in range(1, 6):
            if abs(m_f[e] - m_f[g]) <= 1:
                decays.append(DecayChannel(upper=e, lower=g))
    return LevelDiagram(
        levels=levels,
        modes=(FieldMode(1),),
        couplings=tuple(couplings),
        decays=tuple(decays),
    )

"""JSON configuration documents: the shared CLI/UI description of a run.

A document carries the level diagram, user-facing frequencies in ordinary
MHz (converted internally by 2*pi*1e6), optional explicit initial state,
solver and sweep settings, and the observables to report. Unknown content
under ``extensions`` is preserved verbatim so interface layers can stash
their own data (e.g. canvas layout) without the core caring.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import layout
from .dynamics import SolverConfig, SweepConfig
from .generator import Element, ParameterSet
from .levels import (Coupling, DecayChannel, FieldMode, Level, LevelDiagram,
                     default_initial_state)

Pair = tuple[int, int]


def mhz_to_rads(v: float) -> float:
    """Ordinary MHz to angular rad/s, evaluated as 2*Pi*v*1e6."""
    return 2.0 * math.pi * v * 1e6


class ConfigError(ValueError):
    pass


def parse_observable(text: str) -> Element:
    parts = text.split("_")
    try:
        if parts[0] == "rho" and len(parts) == 3 and parts[1] == parts[2]:
            return Element(int(parts[1]), int(parts[2]))
        if parts[0] == "sigma" and len(parts) == 3:
            i, j = int(parts[1]), int(parts[2])
            if i < j:
                return Element(i, j)
    except ValueError:
        pass
    raise ConfigError(f"bad observable {text!r}: use rho_i_i or sigma_i_j (i < j)")


def observable_name(el: Element) -> str:
    return f"rho_{el.i}_{el.i}" if el.is_population else f"sigma_{el.i}_{el.j}"


def _pair_key(text: str) -> Pair:
    try:
        a, b = text.split("-")
        return (int(a), int(b))
    except ValueError as exc:
        raise ConfigError(f"bad pair key {text!r}: use 'i-j'") from exc


@dataclass
class ConfigDocument:
    diagram: LevelDiagram
    rabi_mhz: dict[Pair, float]
    rate_mhz: dict[Pair, float]
    detuning_mhz: dict[int, float]
    gamma_mhz: dict[Pair, float] = field(default_factory=dict)  # overrides
    initial: dict[str, Any] | None = None
    solver_raw: dict[str, Any] | None = None
    sweep_raw: dict[str, Any] | None = None
    observables: list[Element] = field(default_factory=list)
    extensions: dict[str, Any] = field(default_factory=dict)

    # -- numeric views ----------------------------------------------------

    def params(self) -> ParameterSet:
        return ParameterSet.for_diagram(
            self.diagram,
            rabi={p: mhz_to_rads(v) for p, v in self.rabi_mhz.items()},
            decay={ch: mhz_to_rads(v) for ch, v in self.rate_mhz.items()},
            mode_detuning={m: mhz_to_rads(v) for m, v in self.detuning_mhz.items()},
            gamma_overrides={p: mhz_to_rads(v) for p, v in self.gamma_mhz.items()},
        )

    def solver(self) -> SolverConfig:
        raw = self.solver_raw or {}
        return SolverConfig(
            t_total=float(raw.get("t_total_s", 1e-6)),
            h=float(raw.get("h_s", 5e-12)),
            stride=int(raw.get("stride", 100)),
        )

    def sweep(self) -> SweepConfig:
        if not self.sweep_raw:
            raise ConfigError("document has no sweep section")
        raw = self.sweep_raw
        try:
            return SweepConfig(
                width_mhz=float(raw["width_mhz"]),
                step_mhz=float(raw["step_mhz"]),
                swept_mode=int(raw["swept_mode"]),
                t_interaction=float(raw.get("t_interaction_s", 1e-6)),
                h=float(raw.get("h_s", 5e-12)),
            )
        except KeyError as exc:
            raise ConfigError(f"sweep section missing {exc.args[0]!r}") from exc

    def initial_state(self) -> np.ndarray:
        n = self.diagram.n_levels
        if self.initial is None:
            return default_initial_state(self.diagram)
        y = np.zeros(layout.state_len(n))
        for key, v in (self.initial.get("populations") or {}).items():
            i = int(key)
            if not (1 <= i <= n):
                raise ConfigError(f"initial population for unknown level {i}")
            y[layout.pop_slot(i)] = float(v)
        for key, reim in (self.initial.get("coherences") or {}).items():
            i, j = _pair_key(key)
            if not (1 <= i < j <= n):
                raise ConfigError(f"initial coherence for bad pair {key!r}")
            y[layout.re_slot(n, i, j)] = float(reim[0])
            y[layout.im_slot(n, i, j)] = float(reim[1])
        return y

    def default_observables(self) -> list[Element]:
        if self.observables:
            return list(self.observables)
        n = self.diagram.n_levels
        return [Element(i, i) for i in range(1, n + 1)] + [
            Element(i, j) for (i, j) in layout.coherence_pairs(n)]

    # -- (de)serialization -------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ConfigDocument":
        try:
            diag = data["diagram"]
            levels = tuple(
                Level(index=int(lv["index"]), energy=float(lv["energy"]),
                      label=lv.get("label"), m_f=lv.get("m_f"))
                for lv in diag["levels"])
            modes = tuple(FieldMode(id=int(m["id"])) for m in diag.get("modes", []))
            detuning = {int(m["id"]): float(m.get("detuning_mhz", 0.0))
                        for m in diag.get("modes", [])}
            couplings, rabi = [], {}
            for c in diag.get("couplings", []):
                cp = Coupling(upper=int(c["upper"]), lower=int(c["lower"]),
                              mode=int(c["mode"]))
                couplings.append(cp)
                rabi[cp.pair] = float(c.get("rabi_mhz", 0.0))
            decays, rates = [], {}
            for d in diag.get("decays", []):
                ch = DecayChannel(upper=int(d["upper"]), lower=int(d["lower"]))
                decays.append(ch)
                rates[ch.key] = float(d.get("rate_mhz", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed diagram section: {exc}") from exc
        gammas = {_pair_key(k): float(v)
                  for k, v in (data.get("gammas_mhz") or {}).items()}
        observables = [parse_observable(s) for s in data.get("observables", [])]
        return cls(
            diagram=LevelDiagram(levels=levels, modes=modes,
                                 couplings=tuple(couplings), decays=tuple(decays)),
            rabi_mhz=rabi, rate_mhz=rates, detuning_mhz=detuning,
            gamma_mhz=gammas,
            initial=data.get("initial_state"),
            solver_raw=data.get("solver"),
            sweep_raw=data.get("sweep"),
            observables=observables,
            extensions=data.get("extensions") or {},
        )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "diagram": {
                "levels": [
                    {"index": lv.index, "energy": lv.energy,
                     **({"label": lv.label} if lv.label is not None else {}),
                     **({"m_f": lv.m_f} if lv.m_f is not None else {})}
                    for lv in self.diagram.levels
                ],
                "modes": [
                    {"id": m.id, "detuning_mhz": self.detuning_mhz.get(m.id, 0.0)}
                    for m in self.diagram.modes
                ],
                "couplings": [
                    {"upper": c.upper, "lower": c.lower, "mode": c.mode,
                     "rabi_mhz": self.rabi_mhz.get(c.pair, 0.0)}
                    for c in self.diagram.couplings
                ],
                "decays": [
                    {"upper": d.upper, "lower": d.lower,
                     "rate_mhz": self.rate_mhz.get(d.key, 0.0)}
                    for d in self.diagram.decays
                ],
            },
        }
        if self.gamma_mhz:
            out["gammas_mhz"] = {f"{i}-{j}": v for (i, j), v in self.gamma_mhz.items()}
        if self.initial is not None:
            out["initial_state"] = self.initial
        if self.solver_raw is not None:
            out["solver"] = self.solver_raw
        if self.sweep_raw is not None:
            out["sweep"] = self.sweep_raw
        if self.observables:
            out["observables"] = [observable_name(el) for el in self.observables]
        if self.extensions:
            out["extensions"] = self.extensions
        return out


def load_config(path: str) -> ConfigDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return ConfigDocument.from_dict(data)


def dump_config(doc: ConfigDocument, path: str | None = None) -> str:
    text = json.dumps(doc.to_dict(), indent=2) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text

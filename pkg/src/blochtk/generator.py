"""Symbolic generation of the rotating-frame Bloch equations.

A validated :class:`~blochtk.levels.LevelDiagram` is turned into a sparse
linear superoperator over the independent density-matrix elements: the N
populations rho_ii and the N(N-1)/2 coherences sigma_ij (i < j), giving
N(N+1)/2 coupled equations. sigma_ji is represented as the conjugate of
sigma_ij and never stored.

Sign convention
---------------
Each level k gets a rotating-frame phase theta_k with theta_u - theta_l
equal to the driving mode frequency for every coupled pair (u upper in
energy). The stored coherence for pair (i, j) then evolves with a frame
detuning that, for a driven pair whose lower state is i, equals
+delta = +(omega_mode - omega_transition). With that choice Im(sigma_ij)
of a driven lower-upper pair is the absorption-like quadrature, the
resonant two-level system Rabi-oscillates at 2*Omega, and its steady
state is rho_22 = 2 Omega^2 (gamma/Gamma) / (delta^2 + gamma^2 +
4 Omega^2 gamma/Gamma).

Frame detunings are additive along coupling paths, so multi-photon
coherences pick up signed sums such as delta_31 = delta_21 + delta_32.
A diagram whose coupling loops cannot satisfy a single frame raises
:class:`LoopInconsistency`.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .layout import coherence_pairs
from .levels import LevelDiagram, derived_gammas

Pair = tuple[int, int]


class Element(NamedTuple):
    """Independent density-matrix element: population (i == j) or coherence."""

    i: int
    j: int

    @property
    def is_population(self) -> bool:
        return self.i == self.j


def elements(n: int) -> list[Element]:
    """All independent elements in canonical order: populations, then pairs."""
    out = [Element(i, i) for i in range(1, n + 1)]
    out += [Element(i, j) for (i, j) in coherence_pairs(n)]
    return out


def equation_count(n: int) -> int:
    """Number of independent coupled equations for an n-level system."""
    if not (2 <= n <= 30):
        raise ValueError(f"level count out of range: {n}")
    return n * (n + 1) // 2


class TermKind(enum.Enum):
    RABI_DRIVE = "rabi_drive"
    DETUNING = "detuning"
    COHERENCE_DECAY = "coherence_decay"
    POP_DECAY_OUT = "population_decay_out"
    POP_DECAY_IN = "population_decay_in"


@dataclass(frozen=True)
class Term:
    """One structural term: d(target)/dt += scalar * parameter * source.

    ``scalar`` is the pure structural factor (+-1, +-1j); the physical rate
    is looked up in the bound :class:`ParameterSet` under ``key``, whose
    meaning depends on ``kind`` (coupling pair, decay channel, coherence
    pair, or detuning pair).
    """

    target: Element
    source: Element
    conjugate_source: bool
    kind: TermKind
    key: Pair
    scalar: complex


class LoopInconsistency(Exception):
    """No rotating frame exists: a coupling loop has inconsistent detunings."""

    def __init__(self, cycle: list[int], expected: dict[int, int], got: dict[int, int]):
        self.cycle = cycle
        self.expected = expected
        self.got = got
        path = "-".join(str(k) for k in cycle)
        super().__init__(
            f"coupling loop through levels {path} admits no rotating frame: "
            f"detuning sums along the two paths differ"
        )


@dataclass(frozen=True)
class DetuningMap:
    """Signed composition of mode detunings for every stored coherence.

    ``driven`` maps a coupled pair to ``(orientation, mode_id)`` where the
    stored pair detuning equals ``orientation * mode_detuning`` (+1 when the
    larger level index is the energetically upper state).

    ``steps`` maps every pair to an ordered tuple of ``(sign, driven_pair)``
    whose signed sum composes the pair's frame detuning; an empty tuple
    means the pair is disconnected and its detuning is identically zero.

    ``mode_combo`` gives the same composition as integer coefficients per
    mode id (used to find which pairs a swept mode touches).
    """

    driven: dict[Pair, tuple[int, int]]
    steps: dict[Pair, tuple[tuple[int, Pair], ...]]
    mode_combo: dict[Pair, dict[int, int]]

    def value(self, pair: Pair, mode_detuning: dict[int, float]) -> float:
        """Numeric frame detuning of ``pair``, summed in step order."""
        acc = 0.0
        for sign, dp in self.steps[pair]:
            orient, mode = self.driven[dp]
            handle = orient * mode_detuning[mode]
            acc = acc + sign * handle
        return acc


def _combo_add(a: dict[int, int], b: dict[int, int], sign: int) -> dict[int, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
        if out[k] == 0:
            del out[k]
    return out


def detuning_map(diagram: LevelDiagram) -> DetuningMap:
    """Build the rotating frame and compose per-pair detunings.

    BFS assigns each level a formal potential (an integer combination of
    mode detuning handles); every coupling constrains potential(upper) -
    potential(lower) to its mode handle. A non-tree coupling whose
    constraint disagrees with the assigned potentials raises
    :class:`LoopInconsistency`. Pairs in different components compose to
    zero (their coherences are dynamically decoupled).
    """
    n = diagram.n_levels
    adj: dict[int, list[tuple[int, int, int]]] = {lv.index: [] for lv in diagram.levels}
    for c in diagram.couplings:
        adj[c.upper].append((c.lower, c.mode, -1))  # step upper->lower: +handle... sign below
        adj[c.lower].append((c.upper, c.mode, +1))

    # potential[k]: formal mode combination with potential(upper)-potential(lower)=mode
    potential: dict[int, dict[int, int]] = {}
    parent: dict[int, int | None] = {}
    component: dict[int, int] = {}
    for root in sorted(adj):
        if root in potential:
            continue
        potential[root] = {}
        parent[root] = None
        component[root] = root
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for (b, mode, up) in sorted(adj[a], key=lambda e: (e[0], e[1])):
                # up=+1 means b is the upper level of this edge
                combo_b = _combo_add(potential[a], {mode: 1}, up)
                if b not in potential:
                    potential[b] = combo_b
                    parent[b] = a
                    component[b] = root
                    queue.append(b)
                elif potential[b] != combo_b:
                    cycle = _tree_path(parent, a, b)
                    raise LoopInconsistency(cycle, potential[b], combo_b)

    driven: dict[Pair, tuple[int, int]] = {}
    for c in diagram.couplings:
        lo, hi = c.pair
        orient = +1 if hi == c.upper else -1
        driven[(lo, hi)] = (orient, c.mode)

    steps: dict[Pair, tuple[tuple[int, Pair], ...]] = {}
    combo: dict[Pair, dict[int, int]] = {}
    for (i, j) in coherence_pairs(n):
        if (i, j) in driven:
            steps[(i, j)] = ((+1, (i, j)),)
            orient, mode = driven[(i, j)]
            combo[(i, j)] = {mode: orient}
            continue
        if component.get(i) != component.get(j) or i not in component:
            steps[(i, j)] = ()
            combo[(i, j)] = {}
            continue
        # stored pair detuning is potential(j) - potential(i): walk j -> i
        path = _tree_path(parent, j, i)
        stp: list[tuple[int, Pair]] = []
        cmb: dict[int, int] = {}
        for a, b in zip(path, path[1:]):
            edge = next(c for c in diagram.couplings if c.pair == (min(a, b), max(a, b)))
            orient, mode = driven[edge.pair]
            step_up = +1 if a == edge.upper else -1  # contribution of step a->b is +mode if a upper
            sign = step_up * orient
            stp.append((sign, edge.pair))
            cmb = _combo_add(cmb, {mode: 1}, step_up)
        # canonical summand order (by driven pair) so composed lines read
        # like delta31 = delta21 + delta32 and the engine sums identically
        stp.sort(key=lambda s: s[1])
        steps[(i, j)] = tuple(stp)
        combo[(i, j)] = cmb
    return DetuningMap(driven=driven, steps=steps, mode_combo=combo)


def _tree_path(parent: dict[int, int | None], a: int, b: int) -> list[int]:
    """Path a..b through the BFS tree (via lowest common ancestor)."""
    anc_a = [a]
    while parent[anc_a[-1]] is not None:
        anc_a.append(parent[anc_a[-1]])
    anc_b = [b]
    while parent[anc_b[-1]] is not None:
        anc_b.append(parent[anc_b[-1]])
    set_a = {k: pos for pos, k in enumerate(anc_a)}
    meet = next(k for k in anc_b if k in set_a)
    head = anc_a[: set_a[meet] + 1]
    tail = anc_b[: anc_b.index(meet)]
    return head + tail[::-1]


@dataclass
class ParameterSet:
    """Numeric bindings (rad/s) for every handle a BlochSystem reads."""

    rabi: dict[Pair, float] = field(default_factory=dict)
    decay: dict[Pair, float] = field(default_factory=dict)
    gamma: dict[Pair, float] = field(default_factory=dict)
    mode_detuning: dict[int, float] = field(default_factory=dict)

    @classmethod
    def for_diagram(cls, diagram: LevelDiagram,
                    rabi: dict[Pair, float],
                    decay: dict[Pair, float],
                    mode_detuning: dict[int, float] | None = None,
                    gamma_overrides: dict[Pair, float] | None = None) -> "ParameterSet":
        """Bind rates for a diagram, filling gamma from the decay channels."""
        gam = derived_gammas(diagram, decay)
        if gamma_overrides:
            gam.update(gamma_overrides)
        det = {m.id: 0.0 for m in diagram.modes}
        if mode_detuning:
            det.update(mode_detuning)
        return cls(rabi=dict(rabi), decay=dict(decay), gamma=gam, mode_detuning=det)

    def check_bound(self, system: "BlochSystem") -> None:
        for t in system.terms:
            if t.kind is TermKind.RABI_DRIVE and t.key not in self.rabi:
                raise KeyError(f"unbound Rabi handle for pair {t.key}")
            if t.kind in (TermKind.POP_DECAY_IN, TermKind.POP_DECAY_OUT) and t.key not in self.decay:
                raise KeyError(f"unbound decay handle for channel {t.key}")
            if t.kind is TermKind.COHERENCE_DECAY and t.key not in self.gamma:
                raise KeyError(f"unbound gamma handle for pair {t.key}")
        for dp, (_, mode) in system.detunings.driven.items():
            if mode not in self.mode_detuning:
                raise KeyError(f"unbound detuning for mode {mode} (pair {dp})")


@dataclass(frozen=True)
class BlochSystem:
    """The generated equations: a sparse term list plus detuning composition."""

    n_levels: int
    terms: tuple[Term, ...]
    detunings: DetuningMap

    @property
    def element_order(self) -> list[Element]:
        return elements(self.n_levels)

    def terms_for(self, el: Element) -> list[Term]:
        return [t for t in self.terms if t.target == el]


def _ref(a: int, b: int) -> tuple[Element, bool]:
    """Stored representation of the frame-matrix element at (row a, col b)."""
    if a == b:
        return Element(a, a), False
    if a > b:
        return Element(b, a), False
    return Element(a, b), True


def generate(diagram: LevelDiagram) -> BlochSystem:
    """Generate the term list for a validated diagram.

    Purely structural and deterministic: couplings and channels contribute
    terms in diagram order, and rows follow the canonical element order.
    """
    n = diagram.n_levels
    dmap = detuning_map(diagram)  # raises LoopInconsistency on bad loops
    terms: list[Term] = []

    for i in range(1, n + 1):
        tgt = Element(i, i)
        # drive: + i Omega (R_ki - R_ik) for every coupling {i,k}
        for c in diagram.couplings:
            if i not in c.pair:
                continue
            k = c.upper if c.lower == i else c.lower
            src1, conj1 = _ref(k, i)
            terms.append(Term(tgt, src1, conj1, TermKind.RABI_DRIVE, c.pair, 1j))
            src2, conj2 = _ref(i, k)
            terms.append(Term(tgt, src2, conj2, TermKind.RABI_DRIVE, c.pair, -1j))
        for d in diagram.decays:
            if d.upper == i:
                terms.append(Term(tgt, Element(i, i), False,
                                  TermKind.POP_DECAY_OUT, d.key, -1))
        for d in diagram.decays:
            if d.lower == i:
                terms.append(Term(tgt, Element(d.upper, d.upper), False,
                                  TermKind.POP_DECAY_IN, d.key, 1))

    for (i, j) in coherence_pairs(n):
        tgt = Element(i, j)
        # stored element sits at frame-matrix position (row j, col i)
        for c in diagram.couplings:  # + i Omega R_ki for couplings {j,k}
            if j not in c.pair:
                continue
            k = c.upper if c.lower == j else c.lower
            src, conj = _ref(k, i)
            terms.append(Term(tgt, src, conj, TermKind.RABI_DRIVE, c.pair, 1j))
        for c in diagram.couplings:  # - i Omega R_jk for couplings {i,k}
            if i not in c.pair:
                continue
            k = c.upper if c.lower == i else c.lower
            src, conj = _ref(j, k)
            terms.append(Term(tgt, src, conj, TermKind.RABI_DRIVE, c.pair, -1j))
        terms.append(Term(tgt, tgt, False, TermKind.DETUNING, (i, j), 1j))
        terms.append(Term(tgt, tgt, False, TermKind.COHERENCE_DECAY, (i, j), -1))

    return BlochSystem(n_levels=n, terms=tuple(terms), detunings=dmap)


# ---------------------------------------------------------------------------
# rendering


def _sub(i: int, j: int) -> str:
    return f"{i}{j}" if i <= 9 and j <= 9 else f"{i},{j}"


def _el_plain(el: Element, conj: bool) -> str:
    s = f"ρ{_sub(el.i, el.j)}" if el.is_population else f"σ{_sub(el.i, el.j)}"
    return s + ("*" if conj else "")


def _el_latex(el: Element, conj: bool) -> str:
    if el.is_population:
        return f"\\rho_{{{el.i}{el.j}}}" if el.i <= 9 else f"\\rho_{{{el.i},{el.j}}}"
    core = f"\\sigma_{{{el.i}{el.j}}}" if el.j <= 9 else f"\\sigma_{{{el.i},{el.j}}}"
    return core + ("^{*}" if conj else "")


def render(system: BlochSystem, format: str = "plain") -> str:
    """Render one equation line per independent element.

    Term order per line is drive, then the grouped (i delta - gamma) pair
    for coherences, then population decay. Output is deterministic.
    """
    if format not in ("plain", "latex"):
        raise ValueError(f"unknown format: {format}")
    latex = format == "latex"
    lines = []
    for el in system.element_order:
        row = system.terms_for(el)
        parts: list[str] = []
        det_part = ""
        gam_part = ""
        for t in row:
            if t.kind is TermKind.DETUNING:
                det_part = _detuning_symbol(el, latex)
                continue
            if t.kind is TermKind.COHERENCE_DECAY:
                gam_part = (f"\\gamma_{{{_lx_sub(el.i, el.j)}}}" if latex
                            else f"γ{_sub(el.i, el.j)}")
                continue
            parts.append(_term_text(t, latex))
        if det_part or gam_part:
            sig = _el_latex(el, False) if latex else _el_plain(el, False)
            if latex:
                parts.append(f"+ (i{det_part} - {gam_part}){sig}")
            else:
                parts.append(f"+ (i {det_part} - {gam_part}) {sig}")
        body = " ".join(parts).lstrip("+ ") if parts else "0"
        if latex:
            name = _el_latex(el, False)
            lines.append(f"\\frac{{d{name}}}{{dt}} = {body}")
        else:
            name = _el_plain(el, False)
            lines.append(f"d{name}/dt = {body}")
    return "\n".join(lines) + "\n"


def _lx_sub(i: int, j: int) -> str:
    return f"{i}{j}" if i <= 9 and j <= 9 else f"{i},{j}"


def _detuning_symbol(el: Element, latex: bool) -> str:
    if latex:
        return f"\\delta_{{{_lx_sub(el.i, el.j)}}}"
    return f"δ{_sub(el.i, el.j)}"


def _term_text(t: Term, latex: bool) -> str:
    sign = "+" if (t.scalar.real > 0 or t.scalar.imag > 0) else "-"
    imag = t.scalar.imag != 0
    if t.kind is TermKind.RABI_DRIVE:
        i, j = t.key
        sym = f"\\Omega_{{{_lx_sub(i, j)}}}" if latex else f"Ω{_sub(i, j)}"
    else:  # population decay
        u, l = t.key
        sym = f"\\Gamma_{{{_lx_sub(u, l)}}}" if latex else f"Γ{_sub(u, l)}"
    src = _el_latex(t.source, t.conjugate_source) if latex else _el_plain(t.source, t.conjugate_source)
    if latex:
        return f"{sign} {'i' if imag else ''}{sym}{src}"
    return f"{sign} {'i ' if imag else ''}{sym} {src}"

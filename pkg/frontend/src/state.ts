// Studio state: the working config document, its canvas layout, the last
// run results, and a dirty flag. Every mutation re-validates; edits that
// would break an invariant are rejected and reported instead of applied.

import { defaultLayout, reorientEdges, CanvasSize } from "./layout.js";
import {
  ConfigDocument,
  DiagramSpec,
  EvolveResult,
  LayoutMap,
  MAX_LEVELS,
  MIN_LEVELS,
  SweepResult,
  Violation,
} from "./types.js";
import { validateDiagram } from "./validate.js";

export type RunResults =
  | { kind: "evolve"; runs: EvolveResult[] }
  | { kind: "sweep"; runs: SweepResult[] }
  | null;

export interface EditOutcome {
  ok: boolean;
  violations: Violation[];
}

const LAYOUT_KEY = "ui_layout";

export class StudioState {
  doc: ConfigDocument;
  layout: LayoutMap;
  size: CanvasSize;
  results: RunResults = null;
  dirty = false;
  violations: Violation[] = [];
  private listeners: (() => void)[] = [];

  constructor(doc: ConfigDocument, size: CanvasSize = { width: 760, height: 460 }) {
    this.size = size;
    this.doc = doc;
    this.layout = readLayout(doc) ?? defaultLayout(doc.diagram, size);
    this.violations = validateDiagram(doc.diagram);
  }

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  get valid(): boolean {
    return this.violations.length === 0;
  }

  /** Apply a diagram transformation; reject (and report) if it validates
   * worse than before. Successful edits clear stale results. */
  edit(transform: (d: DiagramSpec) => DiagramSpec): EditOutcome {
    const next = reorientEdges(transform(structuredClone(this.doc.diagram)));
    const violations = validateDiagram(next);
    if (violations.length > 0) {
      this.notify();
      return { ok: false, violations };
    }
    this.doc = { ...this.doc, diagram: next };
    this.violations = [];
    this.results = null;
    this.dirty = true;
    this.syncLayout();
    this.notify();
    return { ok: true, violations: [] };
  }

  addLevel(energy: number): EditOutcome {
    const n = this.doc.diagram.levels.length;
    if (n + 1 > MAX_LEVELS) {
      return {
        ok: false,
        violations: [{ code: "level_count", message: `at most ${MAX_LEVELS} levels` }],
      };
    }
    return this.edit((d) => ({
      ...d,
      levels: [...d.levels, { index: n + 1, energy }],
    }));
  }

  removeLevel(index: number): EditOutcome {
    const n = this.doc.diagram.levels.length;
    if (n - 1 < MIN_LEVELS) {
      return {
        ok: false,
        violations: [{ code: "level_count", message: `at least ${MIN_LEVELS} levels` }],
      };
    }
    // drop the level, re-pack indices, drop edges touching it, and prune
    // modes left without a coupling to drive
    const renumber = (k: number) => (k > index ? k - 1 : k);
    return this.edit((d) => {
      const couplings = d.couplings
        .filter((c) => c.upper !== index && c.lower !== index)
        .map((c) => ({ ...c, upper: renumber(c.upper), lower: renumber(c.lower) }));
      return {
        levels: d.levels
          .filter((l) => l.index !== index)
          .map((l) => ({ ...l, index: renumber(l.index) })),
        modes: d.modes.filter((m) => couplings.some((c) => c.mode === m.id)),
        couplings,
        decays: d.decays
          .filter((dc) => dc.upper !== index && dc.lower !== index)
          .map((dc) => ({ ...dc, upper: renumber(dc.upper), lower: renumber(dc.lower) })),
      };
    });
  }

  moveLevel(index: number, energy: number): EditOutcome {
    return this.edit((d) => ({
      ...d,
      levels: d.levels.map((l) => (l.index === index ? { ...l, energy } : l)),
    }));
  }

  /** Add the coupling if the pair is free, remove it if present. */
  toggleCoupling(a: number, b: number, rabiMhz = 5.0): EditOutcome {
    const existing = this.doc.diagram.couplings.find(
      (c) => pair(c.upper, c.lower) === pair(a, b),
    );
    if (existing) {
      return this.edit((d) => ({
        ...d,
        couplings: d.couplings.filter((c) => c !== findSame(d.couplings, existing)),
        modes: d.modes.filter((m) =>
          d.couplings.some((c) => c !== findSame(d.couplings, existing) && c.mode === m.id),
        ),
      }));
    }
    const modeId = nextModeId(this.doc.diagram);
    const energy = new Map(this.doc.diagram.levels.map((l) => [l.index, l.energy]));
    const [upper, lower] = energy.get(a)! > energy.get(b)! ? [a, b] : [b, a];
    return this.edit((d) => ({
      ...d,
      modes: [...d.modes, { id: modeId, detuning_mhz: 0.0 }],
      couplings: [...d.couplings, { upper, lower, mode: modeId, rabi_mhz: rabiMhz }],
    }));
  }

  toggleDecay(a: number, b: number, rateMhz = 5.0): EditOutcome {
    const energy = new Map(this.doc.diagram.levels.map((l) => [l.index, l.energy]));
    const [upper, lower] = energy.get(a)! > energy.get(b)! ? [a, b] : [b, a];
    const existing = this.doc.diagram.decays.find(
      (dc) => dc.upper === upper && dc.lower === lower,
    );
    if (existing) {
      return this.edit((d) => ({
        ...d,
        decays: d.decays.filter((dc) => !(dc.upper === upper && dc.lower === lower)),
      }));
    }
    return this.edit((d) => ({
      ...d,
      decays: [...d.decays, { upper, lower, rate_mhz: rateMhz }],
    }));
  }

  setRabi(upper: number, lower: number, rabiMhz: number): EditOutcome {
    return this.edit((d) => ({
      ...d,
      couplings: d.couplings.map((c) =>
        pair(c.upper, c.lower) === pair(upper, lower) ? { ...c, rabi_mhz: rabiMhz } : c,
      ),
    }));
  }

  setDecayRate(upper: number, lower: number, rateMhz: number): EditOutcome {
    return this.edit((d) => ({
      ...d,
      decays: d.decays.map((dc) =>
        dc.upper === upper && dc.lower === lower ? { ...dc, rate_mhz: rateMhz } : dc,
      ),
    }));
  }

  setModeDetuning(modeId: number, detuningMhz: number): EditOutcome {
    return this.edit((d) => ({
      ...d,
      modes: d.modes.map((m) => (m.id === modeId ? { ...m, detuning_mhz: detuningMhz } : m)),
    }));
  }

  setResults(results: RunResults): void {
    this.results = results;
    this.notify();
  }

  /** Keep layout keys in step with the level set; new levels get a
   * synthesized position, stale keys are dropped. */
  private syncLayout(): void {
    const fresh = defaultLayout(this.doc.diagram, this.size);
    const merged: LayoutMap = {};
    for (const l of this.doc.diagram.levels) {
      const key = String(l.index);
      merged[key] = this.layout[key] ?? fresh[key];
      // y always tracks energy
      merged[key] = [merged[key][0], fresh[key][1]];
    }
    this.layout = merged;
  }

  /** Export the document with the canvas layout stowed in extensions. */
  exportDocument(): ConfigDocument {
    const doc = structuredClone(this.doc);
    doc.extensions = { ...(doc.extensions ?? {}), [LAYOUT_KEY]: this.layout };
    return doc;
  }

  static importDocument(doc: ConfigDocument,
                        size: CanvasSize = { width: 760, height: 460 }): StudioState {
    const n = doc.diagram?.levels?.length ?? 0;
    if (n < MIN_LEVELS || n > MAX_LEVELS) {
      throw new Error(`level count out of range: ${n}`);
    }
    const state = new StudioState(structuredClone(doc), size);
    state.dirty = false;
    return state;
  }
}

function readLayout(doc: ConfigDocument): LayoutMap | null {
  const raw = doc.extensions?.[LAYOUT_KEY];
  if (!raw || typeof raw !== "object") return null;
  return raw as LayoutMap;
}

function pair(a: number, b: number): string {
  return a < b ? `${a},${b}` : `${b},${a}`;
}

function findSame<T extends { upper: number; lower: number }>(list: T[], probe: T): T {
  return list.find((c) => pair(c.upper, c.lower) === pair(probe.upper, probe.lower))!;
}

function nextModeId(diagram: DiagramSpec): number {
  return diagram.modes.reduce((mx, m) => Math.max(mx, m.id), 0) + 1;
}

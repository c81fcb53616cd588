// Client-side mirror of the core diagram validation, so the studio never
// submits a config the endpoint would reject. Codes and key phrases match
// the core's messages.

import { DiagramSpec, MAX_LEVELS, MIN_LEVELS, Violation } from "./types.js";

export function validateDiagram(diagram: DiagramSpec): Violation[] {
  const out: Violation[] = [];
  const n = diagram.levels.length;

  if (n < MIN_LEVELS || n > MAX_LEVELS) {
    out.push({
      code: "level_count",
      message: `need ${MIN_LEVELS} <= N <= ${MAX_LEVELS}, got ${n}`,
    });
  }
  const indices = diagram.levels.map((l) => l.index).sort((a, b) => a - b);
  const wantIndices = Array.from({ length: n }, (_, k) => k + 1);
  if (JSON.stringify(indices) !== JSON.stringify(wantIndices)) {
    out.push({
      code: "level_indices",
      message: `level indices must be 1..${n} with no gaps or duplicates`,
    });
    return out;
  }

  const energy = new Map(diagram.levels.map((l) => [l.index, l.energy]));
  const modeIds = diagram.modes.map((m) => m.id);
  if (new Set(modeIds).size !== modeIds.length) {
    out.push({ code: "mode_ids", message: "duplicate field-mode ids" });
  }
  const usedModes = new Set(diagram.couplings.map((c) => c.mode));
  for (const m of diagram.modes) {
    if (!usedModes.has(m.id)) {
      out.push({ code: "unused_mode", message: `mode ${m.id} drives no coupling` });
    }
  }

  const seenPairs = new Set<string>();
  for (const c of diagram.couplings) {
    if (c.upper === c.lower) {
      out.push({ code: "self_coupling", message: `coupling on level ${c.upper} with itself` });
      continue;
    }
    if (!energy.has(c.upper) || !energy.has(c.lower)) {
      out.push({
        code: "coupling_ref",
        message: `coupling ${c.upper}-${c.lower} references unknown level`,
      });
      continue;
    }
    if (!modeIds.includes(c.mode)) {
      out.push({
        code: "coupling_mode",
        message: `coupling ${c.upper}-${c.lower} references unknown mode ${c.mode}`,
      });
    }
    if (energy.get(c.upper)! <= energy.get(c.lower)!) {
      out.push({
        code: "coupling_order",
        message: `coupling ${c.upper}-${c.lower}: energy(${c.upper}) must exceed energy(${c.lower})`,
      });
    }
    const key = pairKey(c.upper, c.lower);
    if (seenPairs.has(key)) {
      out.push({
        code: "duplicate coupling",
        message: `pair (${key}): a single field mode drives each transition`,
      });
    }
    seenPairs.add(key);
  }

  const seenChannels = new Set<string>();
  for (const d of diagram.decays) {
    if (!energy.has(d.upper) || !energy.has(d.lower)) {
      out.push({
        code: "decay_ref",
        message: `decay ${d.upper}->${d.lower} references unknown level`,
      });
      continue;
    }
    if (energy.get(d.upper)! <= energy.get(d.lower)!) {
      out.push({
        code: "upward decay",
        message: `decay ${d.upper}->${d.lower} is not strictly downward in energy`,
      });
    }
    const key = `${d.upper}->${d.lower}`;
    if (seenChannels.has(key)) {
      out.push({ code: "duplicate_decay", message: `duplicate decay channel ${key}` });
    }
    seenChannels.add(key);
  }

  if (out.length === 0) {
    const loop = loopInconsistency(diagram);
    if (loop) out.push(loop);
  }
  return out;
}

function pairKey(a: number, b: number): string {
  return a < b ? `${a},${b}` : `${b},${a}`;
}

// A rotating frame requires every coupling loop to compose consistent
// detuning sums. Assign each level a formal combination of mode handles
// by BFS; a non-tree coupling whose constraint disagrees has no frame.
function loopInconsistency(diagram: DiagramSpec): Violation | null {
  type Combo = Map<number, number>;
  const potential = new Map<number, Combo>();
  const adj = new Map<number, { other: number; mode: number; up: number }[]>();
  for (const l of diagram.levels) adj.set(l.index, []);
  for (const c of diagram.couplings) {
    adj.get(c.upper)!.push({ other: c.lower, mode: c.mode, up: -1 });
    adj.get(c.lower)!.push({ other: c.upper, mode: c.mode, up: +1 });
  }
  const comboAdd = (a: Combo, mode: number, sign: number): Combo => {
    const out = new Map(a);
    const v = (out.get(mode) ?? 0) + sign;
    if (v === 0) out.delete(mode);
    else out.set(mode, v);
    return out;
  };
  const comboEq = (a: Combo, b: Combo): boolean => {
    if (a.size !== b.size) return false;
    for (const [k, v] of a) if (b.get(k) !== v) return false;
    return true;
  };
  const roots = [...adj.keys()].sort((x, y) => x - y);
  for (const root of roots) {
    if (potential.has(root)) continue;
    potential.set(root, new Map());
    const queue = [root];
    while (queue.length) {
      const a = queue.shift()!;
      const edges = [...adj.get(a)!].sort((p, q) => p.other - q.other || p.mode - q.mode);
      for (const e of edges) {
        const combo = comboAdd(potential.get(a)!, e.mode, e.up);
        const existing = potential.get(e.other);
        if (existing === undefined) {
          potential.set(e.other, combo);
          queue.push(e.other);
        } else if (!comboEq(existing, combo)) {
          return {
            code: "loop_inconsistency",
            message:
              "coupling loop admits no rotating frame: detuning sums along two paths differ",
          };
        }
      }
    }
  }
  return null;
}

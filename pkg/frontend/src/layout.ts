// Canvas placement of levels: y tracks energy (higher energy sits higher),
// x is free. A layout map travels inside the config's extensions block.

import { DiagramSpec, LayoutMap, LevelSpec } from "./types.js";

export interface CanvasSize {
  width: number;
  height: number;
}

export const LEVEL_HALF_WIDTH = 42;
const MARGIN = 48;

/** Synthesize positions from energies: equal energies share a row and are
 * spread horizontally; y is proportional to energy. */
export function defaultLayout(diagram: DiagramSpec, size: CanvasSize): LayoutMap {
  const energies = diagram.levels.map((l) => l.energy);
  const eMin = Math.min(...energies);
  const eMax = Math.max(...energies);
  const span = eMax - eMin || 1;
  const layout: LayoutMap = {};
  const byEnergy = new Map<number, LevelSpec[]>();
  for (const l of diagram.levels) {
    const group = byEnergy.get(l.energy) ?? [];
    group.push(l);
    byEnergy.set(l.energy, group);
  }
  for (const group of byEnergy.values()) {
    group.sort((a, b) => a.index - b.index);
    group.forEach((l, k) => {
      const x = MARGIN + ((k + 0.5) / group.length) * (size.width - 2 * MARGIN);
      const y = energyToY(l.energy, eMin, span, size);
      layout[String(l.index)] = [x, y];
    });
  }
  return layout;
}

export function energyToY(energy: number, eMin: number, span: number,
                          size: CanvasSize): number {
  return size.height - MARGIN - ((energy - eMin) / span) * (size.height - 2 * MARGIN);
}

export function yToEnergy(y: number, eMin: number, span: number,
                          size: CanvasSize): number {
  return eMin + ((size.height - MARGIN - y) / (size.height - 2 * MARGIN)) * span;
}

/** Re-orient couplings and decays after a level's energy changed: whoever
 * is higher in energy becomes the upper end. Returns a new diagram; ties
 * are left alone (the validator rejects them). */
export function reorientEdges(diagram: DiagramSpec): DiagramSpec {
  const energy = new Map(diagram.levels.map((l) => [l.index, l.energy]));
  const flip = <T extends { upper: number; lower: number }>(edge: T): T => {
    if (energy.get(edge.upper)! < energy.get(edge.lower)!) {
      return { ...edge, upper: edge.lower, lower: edge.upper };
    }
    return edge;
  };
  return {
    ...diagram,
    couplings: diagram.couplings.map(flip),
    decays: diagram.decays.map(flip),
  };
}

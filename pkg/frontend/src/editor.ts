// Canvas diagram editor: levels are horizontal bars dragged vertically
// (y maps back to energy), couplings draw as straight arrows, decays as
// wavy lines. Click a level to select; click a second level to finish a
// pending coupling/decay toggle.

import { LEVEL_HALF_WIDTH, yToEnergy } from "./layout.js";
import { StudioState } from "./state.js";

export type PendingEdge = "coupling" | "decay" | null;

export class DiagramEditor {
  private pending: PendingEdge = null;
  private selected: number | null = null;
  private dragging: number | null = null;
  onMessage: (text: string) => void = () => undefined;

  constructor(private canvas: HTMLCanvasElement, private state: StudioState) {
    canvas.addEventListener("pointerdown", (e) => this.pointerDown(e));
    canvas.addEventListener("pointermove", (e) => this.pointerMove(e));
    canvas.addEventListener("pointerup", () => (this.dragging = null));
    state.onChange(() => this.draw());
    this.draw();
  }

  startEdge(kind: PendingEdge): void {
    this.pending = kind;
    this.selected = null;
    this.onMessage(kind ? `pick two levels to toggle a ${kind}` : "");
  }

  private hitLevel(x: number, y: number): number | null {
    for (const [key, [lx, ly]] of Object.entries(this.state.layout)) {
      if (Math.abs(x - lx) <= LEVEL_HALF_WIDTH + 4 && Math.abs(y - ly) <= 8) {
        return Number(key);
      }
    }
    return null;
  }

  private pointerDown(e: PointerEvent): void {
    const rect = this.canvas.getBoundingClientRect();
    const x = e.clientX - rect.left;
    const y = e.clientY - rect.top;
    const hit = this.hitLevel(x, y);
    if (hit === null) return;
    if (this.pending) {
      if (this.selected === null) {
        this.selected = hit;
        this.onMessage(`level ${hit} picked; pick the other end`);
        this.draw();
        return;
      }
      if (this.selected !== hit) {
        const outcome = this.pending === "coupling"
          ? this.state.toggleCoupling(this.selected, hit)
          : this.state.toggleDecay(this.selected, hit);
        this.onMessage(outcome.ok ? "" : outcome.violations.map((v) => v.message).join("; "));
      }
      this.pending = null;
      this.selected = null;
      this.draw();
      return;
    }
    this.dragging = hit;
    this.canvas.setPointerCapture(e.pointerId);
  }

  private pointerMove(e: PointerEvent): void {
    if (this.dragging === null) return;
    const rect = this.canvas.getBoundingClientRect();
    const y = e.clientY - rect.top;
    const energies = this.state.doc.diagram.levels.map((l) => l.energy);
    const eMin = Math.min(...energies);
    const span = Math.max(...energies) - eMin || 1;
    const energy = yToEnergy(y, eMin, span, this.state.size);
    const outcome = this.state.moveLevel(this.dragging, energy);
    if (!outcome.ok) {
      this.onMessage(outcome.violations.map((v) => v.message).join("; "));
    }
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    const pos = (idx: number) => this.state.layout[String(idx)] ?? [0, 0];

    for (const c of this.state.doc.diagram.couplings) {
      const [x1, y1] = pos(c.lower);
      const [x2, y2] = pos(c.upper);
      this.arrow(ctx, x1, y1, x2, y2, "#c43535");
      ctx.fillStyle = "#c43535";
      ctx.font = "11px system-ui, sans-serif";
      ctx.fillText(`Ω=${c.rabi_mhz} MHz (m${c.mode})`,
                   (x1 + x2) / 2 + 6, (y1 + y2) / 2);
    }
    for (const d of this.state.doc.diagram.decays) {
      const [x1, y1] = pos(d.upper);
      const [x2, y2] = pos(d.lower);
      this.wavy(ctx, x1, y1, x2, y2, "#caa31b");
    }
    for (const l of this.state.doc.diagram.levels) {
      const [x, y] = pos(l.index);
      ctx.strokeStyle = this.selected === l.index ? "#0b69c7" : "#222";
      ctx.lineWidth = this.selected === l.index ? 4 : 3;
      ctx.beginPath();
      ctx.moveTo(x - LEVEL_HALF_WIDTH, y);
      ctx.lineTo(x + LEVEL_HALF_WIDTH, y);
      ctx.stroke();
      ctx.fillStyle = "#222";
      ctx.font = "12px system-ui, sans-serif";
      const tag = l.m_f !== undefined ? `|${l.index}⟩ m=${l.m_f}` : `|${l.index}⟩`;
      ctx.fillText(tag, x + LEVEL_HALF_WIDTH + 6, y + 4);
    }
  }

  private arrow(ctx: CanvasRenderingContext2D, x1: number, y1: number,
                x2: number, y2: number, color: string): void {
    ctx.strokeStyle = color;
    ctx.fillStyle = color;
    ctx.lineWidth = 1.6;
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    ctx.lineTo(x2, y2);
    ctx.stroke();
    const ang = Math.atan2(y2 - y1, x2 - x1);
    ctx.beginPath();
    ctx.moveTo(x2, y2);
    ctx.lineTo(x2 - 9 * Math.cos(ang - 0.4), y2 - 9 * Math.sin(ang - 0.4));
    ctx.lineTo(x2 - 9 * Math.cos(ang + 0.4), y2 - 9 * Math.sin(ang + 0.4));
    ctx.fill();
  }

  private wavy(ctx: CanvasRenderingContext2D, x1: number, y1: number,
               x2: number, y2: number, color: string): void {
    const dx = x2 - x1, dy = y2 - y1;
    const len = Math.hypot(dx, dy);
    const nx = -dy / len, ny = dx / len;
    const waves = Math.max(4, Math.floor(len / 16));
    ctx.strokeStyle = color;
    ctx.lineWidth = 1.4;
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    for (let k = 1; k <= waves; k++) {
      const t = k / waves;
      const amp = 5 * Math.sin(t * waves * Math.PI);
      ctx.lineTo(x1 + dx * t + nx * amp, y1 + dy * t + ny * amp);
    }
    ctx.stroke();
  }
}

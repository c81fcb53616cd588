// Hand-rolled canvas line plots for trajectories and spectra. Several runs
// can be overlaid (old curves fade) until the config changes.

export interface PlotSeries {
  label: string;
  x: number[];
  y: number[];
}

export interface PlotScale {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                 "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"];

export function seriesScale(series: PlotSeries[], padFrac = 0.06): PlotScale {
  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const s of series) {
    for (const v of s.x) { if (v < xMin) xMin = v; if (v > xMax) xMax = v; }
    for (const v of s.y) { if (v < yMin) yMin = v; if (v > yMax) yMax = v; }
  }
  if (!isFinite(xMin)) return { xMin: 0, xMax: 1, yMin: 0, yMax: 1 };
  if (xMin === xMax) { xMin -= 0.5; xMax += 0.5; }
  if (yMin === yMax) { yMin -= 0.5; yMax += 0.5; }
  const pad = (yMax - yMin) * padFrac;
  return { xMin, xMax, yMin: yMin - pad, yMax: yMax + pad };
}

/** Round tick positions covering [lo, hi] at a 1/2/5 decade step. */
export function ticks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo;
  if (span <= 0 || !isFinite(span)) return [lo];
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= target)!;
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += step) out.push(round12(v));
  return out;
}

function round12(v: number): number {
  return Number(v.toPrecision(12));
}

export function toPixel(v: number, lo: number, hi: number,
                        pixLo: number, pixHi: number): number {
  return pixLo + ((v - lo) / (hi - lo)) * (pixHi - pixLo);
}

export interface DrawOptions {
  xLabel: string;
  faded?: boolean;
}

const M = { left: 56, right: 12, top: 10, bottom: 34 };

export function drawPlot(canvas: HTMLCanvasElement, groups: PlotSeries[][],
                         opts: DrawOptions): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const W = canvas.width, H = canvas.height;
  ctx.clearRect(0, 0, W, H);
  const all = groups.flat();
  if (all.length === 0) return;
  const sc = seriesScale(all);
  const px = (v: number) => toPixel(v, sc.xMin, sc.xMax, M.left, W - M.right);
  const py = (v: number) => toPixel(v, sc.yMin, sc.yMax, H - M.bottom, M.top);

  ctx.strokeStyle = "#ccc";
  ctx.fillStyle = "#444";
  ctx.font = "11px system-ui, sans-serif";
  ctx.lineWidth = 1;
  for (const t of ticks(sc.xMin, sc.xMax)) {
    const x = px(t);
    ctx.beginPath(); ctx.moveTo(x, M.top); ctx.lineTo(x, H - M.bottom); ctx.stroke();
    ctx.textAlign = "center";
    ctx.fillText(fmt(t), x, H - M.bottom + 14);
  }
  for (const t of ticks(sc.yMin, sc.yMax)) {
    const y = py(t);
    ctx.beginPath(); ctx.moveTo(M.left, y); ctx.lineTo(W - M.right, y); ctx.stroke();
    ctx.textAlign = "right";
    ctx.fillText(fmt(t), M.left - 6, y + 3);
  }
  ctx.textAlign = "center";
  ctx.fillText(opts.xLabel, (M.left + W - M.right) / 2, H - 6);

  groups.forEach((series, g) => {
    const lastGroup = g === groups.length - 1;
    ctx.globalAlpha = lastGroup ? 1.0 : 0.35;
    series.forEach((s, k) => {
      ctx.strokeStyle = PALETTE[k % PALETTE.length];
      ctx.lineWidth = 1.4;
      ctx.beginPath();
      s.x.forEach((xv, i) => {
        const x = px(xv), y = py(s.y[i]);
        if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
      });
      ctx.stroke();
    });
  });
  ctx.globalAlpha = 1.0;

  // legend from the most recent group
  const latest = groups[groups.length - 1];
  let lx = M.left + 8;
  latest.forEach((s, k) => {
    ctx.fillStyle = PALETTE[k % PALETTE.length];
    ctx.fillRect(lx, M.top + 4, 14, 3);
    ctx.fillStyle = "#222";
    ctx.textAlign = "left";
    ctx.fillText(s.label, lx + 18, M.top + 9);
    lx += 26 + ctx.measureText(s.label).width;
  });
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(round12(v));
}

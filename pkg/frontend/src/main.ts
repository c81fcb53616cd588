// Studio bootstrap: wires the editor canvas, the parameter table, the
// equation panel (live, text verbatim from the core), and the run/plot
// controls against the /api endpoint.

import { cancelRun, fetchEquations, runEvolve, runSweep } from "./api.js";
import { DiagramEditor } from "./editor.js";
import { equationHeader, equationPanelText } from "./equations.js";
import { drawPlot, PlotSeries } from "./plot.js";
import { StudioState } from "./state.js";
import { ConfigDocument, EvolveResult, SweepResult } from "./types.js";
import { validateDiagram } from "./validate.js";

const TWO_LEVEL: ConfigDocument = {
  diagram: {
    levels: [
      { index: 1, energy: 0.0, label: "g" },
      { index: 2, energy: 1.0, label: "e" },
    ],
    modes: [{ id: 1, detuning_mhz: 0.0 }],
    couplings: [{ upper: 2, lower: 1, mode: 1, rabi_mhz: 5.0 }],
    decays: [{ upper: 2, lower: 1, rate_mhz: 5.0 }],
  },
  solver: { t_total_s: 1e-6, h_s: 5e-12, stride: 100 },
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function bootstrap(): void {
  const canvas = el<HTMLCanvasElement>("diagram");
  const plotCanvas = el<HTMLCanvasElement>("plot");
  const message = el<HTMLDivElement>("message");
  const eqHeader = el<HTMLDivElement>("eq-header");
  const eqBody = el<HTMLPreElement>("eq-body");
  const paramsDiv = el<HTMLDivElement>("params");

  let state = new StudioState(structuredClone(TWO_LEVEL),
                              { width: canvas.width, height: canvas.height });
  let editor = new DiagramEditor(canvas, state);
  editor.onMessage = (t) => (message.textContent = t);
  const overlays: { kind: "evolve" | "sweep"; series: PlotSeries[] }[] = [];

  const refreshEquations = async () => {
    if (!state.valid) {
      eqHeader.textContent = "invalid diagram";
      eqBody.textContent = state.violations.map((v) => `${v.code}: ${v.message}`).join("\n");
      return;
    }
    const resp = await fetchEquations(state.doc);
    if (resp.ok) {
      eqHeader.textContent = equationHeader(resp.result.count);
      eqBody.textContent = equationPanelText(resp.result);
    } else {
      eqHeader.textContent = "equations unavailable";
      eqBody.textContent = resp.errors.map((e) => e.message).join("\n");
    }
  };

  const refreshParams = () => {
    paramsDiv.replaceChildren();
    for (const c of state.doc.diagram.couplings) {
      paramsDiv.append(numberRow(`Ω ${c.lower}↔${c.upper} (MHz)`, c.rabi_mhz,
        (v) => state.setRabi(c.upper, c.lower, v)));
    }
    for (const d of state.doc.diagram.decays) {
      paramsDiv.append(numberRow(`Γ ${d.upper}→${d.lower} (MHz)`, d.rate_mhz,
        (v) => state.setDecayRate(d.upper, d.lower, v)));
    }
    for (const m of state.doc.diagram.modes) {
      paramsDiv.append(numberRow(`δ mode ${m.id} (MHz)`, m.detuning_mhz,
        (v) => state.setModeDetuning(m.id, v)));
    }
  };

  const numberRow = (label: string, value: number, apply: (v: number) => unknown) => {
    const row = document.createElement("label");
    row.className = "param-row";
    const span = document.createElement("span");
    span.textContent = label;
    const input = document.createElement("input");
    input.type = "number";
    input.step = "0.1";
    input.value = String(value);
    input.addEventListener("change", () => apply(Number(input.value)));
    row.append(span, input);
    return row;
  };

  const redrawPlots = () => {
    if (overlays.length === 0) {
      const ctx = plotCanvas.getContext("2d");
      ctx?.clearRect(0, 0, plotCanvas.width, plotCanvas.height);
      return;
    }
    const kind = overlays[overlays.length - 1].kind;
    drawPlot(plotCanvas, overlays.filter((o) => o.kind === kind).map((o) => o.series),
             { xLabel: kind === "evolve" ? "time (µs)" : "detuning (MHz)" });
  };

  state.onChange(() => {
    overlays.length = 0;  // config changed: stale overlays out
    redrawPlots();
    refreshParams();
    void refreshEquations();
  });

  el<HTMLButtonElement>("btn-coupling").addEventListener("click",
    () => editor.startEdge("coupling"));
  el<HTMLButtonElement>("btn-decay").addEventListener("click",
    () => editor.startEdge("decay"));
  el<HTMLButtonElement>("btn-add-level").addEventListener("click", () => {
    const top = Math.max(...state.doc.diagram.levels.map((l) => l.energy));
    const out = state.addLevel(top + 0.2);
    if (!out.ok) message.textContent = out.violations.map((v) => v.message).join("; ");
  });
  el<HTMLButtonElement>("btn-cancel").addEventListener("click", () => cancelRun());

  el<HTMLButtonElement>("btn-evolve").addEventListener("click", async () => {
    if (!preflight()) return;
    const resp = await runEvolve(state.doc);
    if (!resp.ok) { message.textContent = resp.errors.map((e) => e.message).join("; "); return; }
    overlays.push({ kind: "evolve", series: evolveSeries(resp.result) });
    redrawPlots();
  });

  el<HTMLButtonElement>("btn-sweep").addEventListener("click", async () => {
    if (!preflight()) return;
    if (!state.doc.sweep) {
      state.doc.sweep = { width_mhz: 40, step_mhz: 0.5, swept_mode: 1,
                          t_interaction_s: 1e-6, h_s: 1e-9 };
    }
    const resp = await runSweep(state.doc);
    if (!resp.ok) { message.textContent = resp.errors.map((e) => e.message).join("; "); return; }
    overlays.push({ kind: "sweep", series: sweepSeries(resp.result) });
    redrawPlots();
  });

  const preflight = (): boolean => {
    const violations = validateDiagram(state.doc.diagram);
    if (violations.length > 0) {
      message.textContent = violations.map((v) => v.message).join("; ");
      return false;
    }
    message.textContent = "";
    return true;
  };

  el<HTMLButtonElement>("btn-export").addEventListener("click", () => {
    const blob = new Blob([JSON.stringify(state.exportDocument(), null, 2) + "\n"],
                          { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "diagram.json";
    a.click();
    URL.revokeObjectURL(a.href);
  });

  el<HTMLInputElement>("file-import").addEventListener("change", async (e) => {
    const input = e.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const doc = JSON.parse(await file.text()) as ConfigDocument;
      state = StudioState.importDocument(doc, { width: canvas.width, height: canvas.height });
      editor = new DiagramEditor(canvas, state);
      editor.onMessage = (t) => (message.textContent = t);
      state.onChange(() => { overlays.length = 0; redrawPlots(); refreshParams(); void refreshEquations(); });
      overlays.length = 0;
      redrawPlots();
      refreshParams();
      await refreshEquations();
      message.textContent = `imported ${file.name}`;
    } catch (err) {
      message.textContent = `import failed: ${(err as Error).message}`;
    } finally {
      input.value = "";
    }
  });

  refreshParams();
  void refreshEquations();
}

function evolveSeries(result: EvolveResult): PlotSeries[] {
  const t = result.times_s.map((v) => v * 1e6);
  return result.columns.map((label, k) => ({ label, x: t, y: result.data[k] }));
}

function sweepSeries(result: SweepResult): PlotSeries[] {
  return result.columns.map((label, k) => ({
    label, x: result.detunings_mhz, y: result.data[k],
  }));
}

document.addEventListener("DOMContentLoaded", bootstrap);

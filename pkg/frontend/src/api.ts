// Thin client for the core's JSON endpoint. One run in flight at a time;
// starting a new run cancels the previous one.

import {
  ApiResponse,
  ConfigDocument,
  EquationsResult,
  EvolveResult,
  SweepResult,
  Violation,
} from "./types.js";

let inFlight: AbortController | null = null;

async function post<T>(payload: Record<string, unknown>,
                       cancellable = false): Promise<ApiResponse<T>> {
  let signal: AbortSignal | undefined;
  if (cancellable) {
    inFlight?.abort();
    inFlight = new AbortController();
    signal = inFlight.signal;
  }
  try {
    const resp = await fetch("/api", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
    return (await resp.json()) as ApiResponse<T>;
  } catch (err) {
    if ((err as Error).name === "AbortError") throw err;
    return {
      ok: false,
      errors: [{ code: "network", message: String(err) }],
    };
  }
}

export function cancelRun(): void {
  inFlight?.abort();
  inFlight = null;
}

export function fetchValidation(config: ConfigDocument) {
  return post<{ valid: boolean; violations: Violation[] }>({ op: "validate", config });
}

export function fetchEquations(config: ConfigDocument, format = "plain") {
  return post<EquationsResult>({ op: "equations", config, format });
}

export function runEvolve(config: ConfigDocument) {
  return post<EvolveResult>({ op: "evolve", config }, true);
}

export function runSweep(config: ConfigDocument) {
  return post<SweepResult>({ op: "sweep", config }, true);
}

export function fetchCode(config: ConfigDocument, mode: "temporal" | "detuning") {
  return post<{ source: string; manifest: Record<string, Record<string, number>> }>(
    { op: "codegen", config, mode },
  );
}

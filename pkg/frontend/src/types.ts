// Shared config-document shapes (the same JSON schema the core CLI reads).

export interface LevelSpec {
  index: number;
  energy: number;
  label?: string;
  m_f?: number;
}

export interface ModeSpec {
  id: number;
  detuning_mhz: number;
}

export interface CouplingSpec {
  upper: number;
  lower: number;
  mode: number;
  rabi_mhz: number;
}

export interface DecaySpec {
  upper: number;
  lower: number;
  rate_mhz: number;
}

export interface DiagramSpec {
  levels: LevelSpec[];
  modes: ModeSpec[];
  couplings: CouplingSpec[];
  decays: DecaySpec[];
}

export interface SolverSpec {
  t_total_s: number;
  h_s: number;
  stride: number;
}

export interface SweepSpec {
  width_mhz: number;
  step_mhz: number;
  swept_mode: number;
  t_interaction_s: number;
  h_s: number;
}

export interface ConfigDocument {
  diagram: DiagramSpec;
  gammas_mhz?: Record<string, number>;
  initial_state?: {
    populations?: Record<string, number>;
    coherences?: Record<string, [number, number]>;
  };
  solver?: SolverSpec;
  sweep?: SweepSpec;
  observables?: string[];
  extensions?: Record<string, unknown>;
}

export interface Violation {
  code: string;
  message: string;
}

export interface EquationsResult {
  text: string;
  count: number;
}

export interface SeriesResult {
  columns: string[];
  data: number[][];
  trace_error: number;
}

export interface EvolveResult extends SeriesResult {
  times_s: number[];
}

export interface SweepResult extends SeriesResult {
  detunings_mhz: number[];
}

export type ApiResponse<T> =
  | { ok: true; result: T }
  | { ok: false; errors: Violation[] };

/** Canvas placement per level index: [x, y] in pixels. */
export type LayoutMap = Record<string, [number, number]>;

export const MIN_LEVELS = 2;
export const MAX_LEVELS = 30;

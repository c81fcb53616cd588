// Equation panel content. The displayed body is the server's rendered text
// verbatim: the studio holds no equation logic of its own, so what you read
// is exactly what the solver integrates.

import { EquationsResult } from "./types.js";

export function equationHeader(count: number): string {
  return `N(N+1)/2 = ${count} equations`;
}

/** The panel body: the core's text, unmodified. */
export function equationPanelText(result: EquationsResult): string {
  return result.text;
}

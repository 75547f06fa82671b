/** Keyboard-first flow: hand-labelling thousands of trigrams is the whole
 * job, so every action has a key.  1/2/3 label the focused position as
 * Māori/English/foreign, arrows or Tab move focus, Enter submits.
 */

import type { DecisionLabel } from "./api.js";

export type KeyAction =
  | { kind: "assign"; label: DecisionLabel }
  | { kind: "focus"; step: 1 | -1 }
  | { kind: "submit" };

const LABEL_KEYS: Record<string, DecisionLabel> = {
  "1": "M",
  "2": "P",
  "3": "F",
  m: "M",
  p: "P",
  f: "F",
};

export function keyToAction(key: string, shift = false): KeyAction | null {
  const label = LABEL_KEYS[key.toLowerCase()];
  if (label) return { kind: "assign", label };
  if (key === "ArrowRight" || (key === "Tab" && !shift)) return { kind: "focus", step: 1 };
  if (key === "ArrowLeft" || (key === "Tab" && shift)) return { kind: "focus", step: -1 };
  if (key === "Enter") return { kind: "submit" };
  return null;
}

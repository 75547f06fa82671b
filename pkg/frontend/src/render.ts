/** HTML fragment builders.  Pure string functions so the interesting ones
 * (highlighting, counters) are testable without a browser.
 */

import type { Progress, TrigramTask } from "./api.js";
import type { AnnotationSession } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Wrap the task's trigram in <mark> inside a sample sentence.
 *
 * Samples are space-joined token streams and trigram words are
 * consecutive *word* tokens, so punctuation and number tokens between
 * them are skipped when matching, exactly as the service counts windows.
 */
export function highlightTrigram(sample: string, words: readonly string[]): string {
  const tokens = sample.split(" ");
  const wordIndexes = tokens
    .map((token, index) => ({ token, index }))
    .filter(({ token }) => /\p{L}/u.test(token))
    .map(({ index }) => index);
  for (let w = 0; w + words.length <= wordIndexes.length; w++) {
    let hit = true;
    for (let k = 0; k < words.length; k++) {
      const token = tokens[wordIndexes[w + k]!]!;
      if (token.toLowerCase() !== words[k]) {
        hit = false;
        break;
      }
    }
    if (hit) {
      const marked = new Set(words.map((_, k) => wordIndexes[w + k]!));
      return tokens
        .map((token, index) =>
          marked.has(index) ? `<mark>${escapeHtml(token)}</mark>` : escapeHtml(token),
        )
        .join(" ");
    }
  }
  return escapeHtml(sample);
}

export function renderQueue(tasks: readonly TrigramTask[], selected: string | null): string {
  if (tasks.length === 0) return `<p class="all-done">All trigrams resolved 🎉</p>`;
  const rows = tasks
    .map((t) => {
      const cls = t.task_id === selected ? "task selected" : "task";
      return (
        `<li class="${cls}" data-task="${escapeHtml(t.task_id)}">` +
        `<span class="count">${t.count}×</span> ` +
        `<span class="words">${escapeHtml(t.words.join(" "))}</span></li>`
      );
    })
    .join("");
  return `<ol class="queue">${rows}</ol>`;
}

const LABEL_NAMES: Record<string, string> = { M: "Māori", P: "English", F: "Foreign" };

export function renderPositions(session: AnnotationSession): string {
  const task = session.current;
  if (!task) return "";
  const cells = task.words
    .map((word, index) => {
      const position = index + 1;
      const open = task.ambiguous_positions.includes(position);
      const chosen = session.assignments.get(position);
      const classes = ["position"];
      if (!open) classes.push("locked");
      if (session.focus === position) classes.push("focused");
      const value = chosen
        ? `<span class="chosen label-${chosen}">${LABEL_NAMES[chosen]}</span>`
        : open
          ? `<span class="hint">1=Māori 2=English 3=Foreign</span>`
          : `<span class="hint">not ambiguous</span>`;
      const buttons = open
        ? ["M", "P", "F"]
            .map(
              (label) =>
                `<button data-assign="${position}:${label}"` +
                `${chosen === label ? ' class="active"' : ""}>${LABEL_NAMES[label]}</button>`,
            )
            .join("")
        : "";
      return (
        `<div class="${classes.join(" ")}" data-position="${position}">` +
        `<div class="word">${escapeHtml(word)}</div>${value}<div class="buttons">${buttons}</div></div>`
      );
    })
    .join("");
  return `<div class="positions">${cells}</div>`;
}

export function renderProgress(progress: Progress | null): string {
  if (!progress) return `<p class="muted">progress unavailable</p>`;
  const order = ["M", "P", "A", "U", "N", "S", "F"];
  const cells = order
    .map((code) => `<div class="stat"><dt>${code}</dt><dd>${progress.labels[code] ?? 0}</dd></div>`)
    .join("");
  const tasks = progress.tasks;
  return (
    `<dl class="labels">${cells}</dl>` +
    `<p class="tasks">${tasks.done}/${tasks.total} tasks done, ${tasks.pending} pending</p>`
  );
}

export function renderBanner(message: string | null): string {
  if (!message) return "";
  return `<div class="banner">${escapeHtml(message)} <button data-retry>retry</button></div>`;
}

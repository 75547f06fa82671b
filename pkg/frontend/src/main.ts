/** DOM wiring: binds the session to the page and the API client.
 * State changes all flow through AnnotationSession; this module only
 * repaints and forwards events.
 */

import { AnnotationApi, ApiError } from "./api.js";
import type { DecisionLabel } from "./api.js";
import { keyToAction } from "./keyboard.js";
import {
  renderBanner,
  renderPositions,
  renderProgress,
  renderQueue,
  highlightTrigram,
  escapeHtml,
} from "./render.js";
import { AnnotationSession } from "./state.js";

const api = new AnnotationApi("");
const session = new AnnotationSession();

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function paint(): void {
  el("banner").innerHTML = renderBanner(session.banner);
  el("queue").innerHTML =
    session.phase === "loading" ? `<p class="muted">loading…</p>` : renderQueue(session.queue, session.current?.task_id ?? null);
  const task = session.current;
  if (task) {
    el("task-title").textContent = `${task.words.join(" ")} (${task.count} occurrences)`;
    el("samples").innerHTML = task.samples
      .map((s) => `<li>${highlightTrigram(s, task.words)}</li>`)
      .join("");
    el("positions").innerHTML = renderPositions(session);
    el("form-error").textContent = session.formError ?? "";
  } else {
    el("task-title").textContent = session.phase === "empty" ? "All trigrams resolved" : "";
    el("samples").innerHTML = "";
    el("positions").innerHTML = "";
    el("form-error").textContent = "";
  }
  el("progress").innerHTML = renderProgress(session.progress);
}

async function refresh(): Promise<void> {
  try {
    const [tasks, progress] = await Promise.all([api.listTasks(50), api.getProgress()]);
    session.loadQueue(tasks);
    session.applyProgress(progress);
  } catch (error) {
    session.connectionLost(error instanceof Error ? error.message : String(error));
  }
  paint();
}

async function submit(): Promise<void> {
  const submission = session.beginSubmission();
  paint();
  if (!submission) return;
  try {
    const progress = await api.submitDecision(submission.taskId, submission.assignments);
    session.completeSubmission(progress);
  } catch (error) {
    if (error instanceof ApiError) {
      session.failSubmission(submission, error.message, error.retriable);
    } else {
      session.failSubmission(submission, String(error), true);
    }
  }
  paint();
}

function bind(): void {
  document.addEventListener("keydown", (event) => {
    if ((event.target as HTMLElement | null)?.tagName === "INPUT") return;
    const action = keyToAction(event.key, event.shiftKey);
    if (!action) return;
    event.preventDefault();
    if (action.kind === "assign" && session.focus !== null) {
      session.assign(session.focus, action.label);
      paint();
    } else if (action.kind === "focus") {
      session.focusNext(action.step);
      paint();
    } else if (action.kind === "submit") {
      void submit();
    }
  });

  el("positions").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest("button[data-assign]");
    if (!button) return;
    const [position, label] = (button.getAttribute("data-assign") ?? "").split(":");
    session.assign(Number(position), label as DecisionLabel);
    paint();
  });

  el("banner").addEventListener("click", (event) => {
    if ((event.target as HTMLElement).hasAttribute("data-retry")) void refresh();
  });

  el("submit").addEventListener("click", () => void submit());

  el("word-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const word = (el("word-input") as HTMLInputElement).value.trim();
    const target = (el("word-target") as HTMLSelectElement).value;
    if (!word) return;
    void api
      .addWord(word, target)
      .then((added) => {
        el("word-result").innerHTML =
          `<span class="ok">added “${escapeHtml(added.word)}” to the ${added.target} list ` +
          `(${added.spellings} indexed spelling${added.spellings === 1 ? "" : "s"})</span>`;
        (el("word-input") as HTMLInputElement).value = "";
      })
      .catch((error: unknown) => {
        const message = error instanceof Error ? error.message : String(error);
        el("word-result").innerHTML = `<span class="error">${escapeHtml(message)}</span>`;
      });
  });

  // live counters while annotating elsewhere
  window.setInterval(() => {
    void api.getProgress().then((progress) => {
      session.applyProgress(progress);
      el("progress").innerHTML = renderProgress(session.progress);
    }).catch(() => undefined);
  }, 15_000);
}

bind();
void refresh();

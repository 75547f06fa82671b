/** Annotation session state, kept free of DOM and network concerns so the
 * whole flow is unit-testable: queue -> focus -> assign -> validate ->
 * optimistic advance, with rollback when a submission fails.
 */

import type { DecisionLabel, Progress, TrigramTask } from "./api.js";

export type QueuePhase = "loading" | "ready" | "empty" | "error";

export interface PendingSubmission {
  taskId: string;
  assignments: Map<number, DecisionLabel>;
}

export class AnnotationSession {
  phase: QueuePhase = "loading";
  queue: TrigramTask[] = [];
  assignments = new Map<number, DecisionLabel>();
  focus: number | null = null;
  formError: string | null = null;
  banner: string | null = null;
  progress: Progress | null = null;
  private rollback: TrigramTask | null = null;

  get current(): TrigramTask | null {
    return this.queue.length > 0 ? (this.queue[0] ?? null) : null;
  }

  /** Positions the annotator must label, in reading order. */
  get openPositions(): number[] {
    return this.current ? [...this.current.ambiguous_positions].sort() : [];
  }

  loadQueue(tasks: TrigramTask[]): void {
    this.queue = tasks.filter((t) => t.status === "pending");
    this.phase = this.queue.length > 0 ? "ready" : "empty";
    this.banner = null;
    this.resetForm();
  }

  connectionLost(message: string): void {
    this.phase = this.queue.length > 0 ? "ready" : "error";
    this.banner = message;
  }

  private resetForm(): void {
    this.assignments = new Map();
    this.formError = null;
    this.focus = this.openPositions[0] ?? null;
  }

  assign(position: number, label: DecisionLabel): void {
    if (!this.current || !this.current.ambiguous_positions.includes(position)) return;
    this.assignments.set(position, label);
    this.formError = null;
    const remaining = this.openPositions.filter((p) => !this.assignments.has(p));
    this.focus = remaining[0] ?? position;
  }

  focusNext(step = 1): void {
    const open = this.openPositions;
    if (open.length === 0 || this.focus === null) return;
    const at = open.indexOf(this.focus);
    const next = open[(at + step + open.length) % open.length];
    this.focus = next ?? this.focus;
  }

  /** Inline validation: every ambiguous position needs a label. */
  validate(): string | null {
    if (!this.current) return "no task selected";
    const missing = this.openPositions.filter((p) => !this.assignments.has(p));
    if (missing.length > 0) {
      const word = this.current.words[missing[0]! - 1];
      return `position ${missing[0]} ("${word}") is unassigned`;
    }
    return null;
  }

  /** Optimistic advance: pop the task and hand back the submission; the
   * caller restores it with `failSubmission` if the POST fails. */
  beginSubmission(): PendingSubmission | null {
    const task = this.current;
    const error = this.validate();
    if (!task || error) {
      this.formError = error;
      return null;
    }
    const submission = { taskId: task.task_id, assignments: new Map(this.assignments) };
    this.rollback = task;
    this.queue = this.queue.slice(1);
    this.resetForm();
    if (this.queue.length === 0) this.phase = "empty";
    return submission;
  }

  completeSubmission(progress: Progress): void {
    this.rollback = null;
    this.progress = progress;
  }

  /** Non-destructive failure: the task returns to the head of the queue
   * with its assignments intact. */
  failSubmission(submission: PendingSubmission, message: string, retriable: boolean): void {
    if (this.rollback) {
      this.queue = [this.rollback, ...this.queue];
      this.phase = "ready";
      this.rollback = null;
      this.assignments = new Map(submission.assignments);
      this.focus = this.openPositions[0] ?? null;
    }
    if (retriable) {
      this.banner = message;
    } else {
      this.formError = message;
    }
  }

  applyProgress(progress: Progress): void {
    this.progress = progress;
  }
}

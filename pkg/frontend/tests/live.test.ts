/** Round-trip against a real running service.
 *
 * Start one first and point REOTAG_API at it, e.g.
 *   reo-tag serve --corpus resolved.tsv --store fresh.jsonl --bind 127.0.0.1:8765
 *   REOTAG_API=http://127.0.0.1:8765 npm test
 * Skipped when REOTAG_API is unset.
 */

import { describe, expect, it } from "vitest";

import { AnnotationApi } from "../src/api.js";
import { AnnotationSession } from "../src/state.js";

const base = process.env.REOTAG_API;

describe.skipIf(!base)("live service round-trip", () => {
  it("loads the queue, submits a decision, and sees the A-count drop", async () => {
    const api = new AnnotationApi(base!);
    const session = new AnnotationSession();
    session.loadQueue(await api.listTasks(50));
    const task = session.current;
    if (!task) {
      expect(session.phase).toBe("empty");
      return;
    }
    const before = await api.getProgress();
    for (const position of task.ambiguous_positions) {
      session.assign(position, "P");
    }
    const submission = session.beginSubmission();
    expect(submission).not.toBeNull();
    const progress = await api.submitDecision(submission!.taskId, submission!.assignments);
    session.completeSubmission(progress);
    const dropped = (before.labels.A ?? 0) - (progress.labels.A ?? 0);
    expect(dropped).toBeGreaterThan(0);
    expect(dropped % task.ambiguous_positions.length).toBe(0);
    expect(progress.tasks.done).toBe(before.tasks.done + 1);
  });
});

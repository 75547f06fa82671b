/** Typed client for the annotation service HTTP API.
 *
 * Every mutation the UI makes goes through this module, so a full
 * annotation session is replayable from the service's decision log.
 */

export type DecisionLabel = "M" | "P" | "F";

export interface TrigramTask {
  task_id: string;
  words: [string, string, string];
  count: number;
  ambiguous_positions: number[];
  samples: string[];
  status: "pending" | "done" | "skipped";
}

export interface Progress {
  labels: Record<string, number>;
  tasks: { total: number; pending: number; done: number };
}

export interface SentenceToken {
  surface: string;
  label: string;
}

export interface Sentence {
  date: string;
  doc: string;
  seq: number;
  class: string;
  tokens: SentenceToken[];
}

export interface WordAdded {
  word: string;
  target: string;
  spellings: number;
}

/** Non-2xx response; status 0 means the service was unreachable. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }

  get retriable(): boolean {
    return this.status === 0 || this.status >= 500;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class AnnotationApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch {
      throw new ApiError(0, "annotation service unreachable");
    }
    if (!response.ok) {
      let detail = `${response.status} ${response.statusText}`;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  async listTasks(limit = 20): Promise<TrigramTask[]> {
    const body = await this.request<{ tasks: TrigramTask[] }>(
      `/api/tasks?limit=${limit}`,
    );
    return body.tasks;
  }

  getTask(taskId: string): Promise<TrigramTask> {
    return this.request<TrigramTask>(`/api/tasks/${encodeURIComponent(taskId)}`);
  }

  async submitDecision(
    taskId: string,
    assignments: ReadonlyMap<number, DecisionLabel>,
    annotator = "ui",
  ): Promise<Progress> {
    const payload: Record<string, DecisionLabel> = {};
    for (const [position, label] of assignments) payload[String(position)] = label;
    const body = await this.request<{ ok: boolean; progress: Progress }>(
      "/api/decisions",
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ task_id: taskId, assignments: payload, annotator }),
      },
    );
    return body.progress;
  }

  getProgress(): Promise<Progress> {
    return this.request<Progress>("/api/progress");
  }

  getSentence(doc: string, seq: number): Promise<Sentence> {
    return this.request<Sentence>(
      `/api/sentences/${encodeURIComponent(doc)}/${seq}`,
    );
  }

  addWord(word: string, target: string): Promise<WordAdded> {
    return this.request<WordAdded>("/api/lexicon/words", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ word, target }),
    });
  }
}

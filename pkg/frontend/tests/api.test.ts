import { describe, expect, it, vi } from "vitest";

import { AnnotationApi, ApiError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("request shapes", () => {
  it("lists tasks with the limit parameter", async () => {
    const fetchFn = vi.fn().mockResolvedValue(jsonResponse({ tasks: [] }));
    const api = new AnnotationApi("http://svc", fetchFn);
    await api.listTasks(7);
    expect(fetchFn).toHaveBeenCalledWith("http://svc/api/tasks?limit=7", undefined);
  });

  it("posts decisions with stringified positions", async () => {
    const fetchFn = vi
      .fn()
      .mockResolvedValue(jsonResponse({ ok: true, progress: { labels: {}, tasks: { total: 0, pending: 0, done: 0 } } }));
    const api = new AnnotationApi("", fetchFn);
    await api.submitDecision("tg-1", new Map([[1, "P"], [3, "M"]]), "alice");
    const [url, init] = fetchFn.mock.calls[0]!;
    expect(url).toBe("/api/decisions");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body)).toEqual({
      task_id: "tg-1",
      assignments: { "1": "P", "3": "M" },
      annotator: "alice",
    });
  });

  it("fetches sentence context by doc and seq", async () => {
    const fetchFn = vi.fn().mockResolvedValue(jsonResponse({ doc: "d", seq: 4, tokens: [] }));
    const api = new AnnotationApi("", fetchFn);
    await api.getSentence("debate 2010", 4);
    expect(fetchFn.mock.calls[0]![0]).toBe("/api/sentences/debate%202010/4");
  });

  it("adds lexicon words", async () => {
    const fetchFn = vi.fn().mockResolvedValue(jsonResponse({ word: "kaumātua", target: "maori", spellings: 4 }));
    const api = new AnnotationApi("", fetchFn);
    const added = await api.addWord("kaumātua", "maori");
    expect(added.spellings).toBe(4);
    expect(JSON.parse(fetchFn.mock.calls[0]![1].body)).toEqual({ word: "kaumātua", target: "maori" });
  });
});

describe("error mapping", () => {
  it("extracts the service detail message", async () => {
    const fetchFn = vi.fn().mockResolvedValue(
      jsonResponse({ detail: "conflict: move to ambiguous list instead" }, 409),
    );
    const api = new AnnotationApi("", fetchFn);
    const error = await api.addWord("house", "maori").catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(409);
    expect((error as ApiError).message).toBe("conflict: move to ambiguous list instead");
    expect((error as ApiError).retriable).toBe(false);
  });

  it("network failure becomes a retriable status-0 error", async () => {
    const fetchFn = vi.fn().mockRejectedValue(new TypeError("fetch failed"));
    const api = new AnnotationApi("", fetchFn);
    const error = await api.getProgress().catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(0);
    expect((error as ApiError).retriable).toBe(true);
  });

  it("5xx is retriable, non-JSON body tolerated", async () => {
    const fetchFn = vi.fn().mockResolvedValue(new Response("boom", { status: 502, statusText: "Bad Gateway" }));
    const api = new AnnotationApi("", fetchFn);
    const error = (await api.getProgress().catch((e: unknown) => e)) as ApiError;
    expect(error.retriable).toBe(true);
    expect(error.message).toMatch(/502/);
  });
});

import { describe, expect, it, vi } from "vitest";

import type { FetchFn } from "../src/api.js";
import type { SessionState, VerdictResponse } from "../src/types.js";
import { renderApp } from "../src/view.js";
import { Workbench } from "../src/workbench.js";

const VERDICT: VerdictResponse = {
  label: "Better",
  probability: 0.97,
  top_contributions: [{ name: "token_len_diff", value: 6, importance: 0.2 }],
  model_id: "cafe0123",
};

function okResponse(body: unknown): Response {
  return {
    ok: true,
    status: 200,
    json: async () => body,
  } as unknown as Response;
}

function errorResponse(status: number, body: unknown): Response {
  return {
    ok: false,
    status,
    json: async () => body,
  } as unknown as Response;
}

describe("submit", () => {
  it("scores a real revision and appends exactly one attempt", async () => {
    const fetchFn = vi.fn(async () => okResponse(VERDICT));
    const bench = new Workbench({
      baseUrl: "http://service.test",
      fetchFn: fetchFn as unknown as FetchFn,
      now: () => 1_700_000_000_000,
    });

    const state = await bench.submit("The cat sat.", "The cat sat down.");

    expect(fetchFn).toHaveBeenCalledOnce();
    const [url, init] = fetchFn.mock.calls[0]! as unknown as [string, RequestInit];
    expect(url).toBe("http://service.test/api/v1/predict");
    expect(JSON.parse(init.body as string)).toEqual({
      s1: "The cat sat.",
      s2: "The cat sat down.",
    });

    expect(state.attempts).toHaveLength(1);
    const attempt = state.attempts[0]!;
    expect(attempt.label).toBe("Better");
    expect(attempt.probability).toBe(0.97);
    expect(attempt.modelId).toBe("cafe0123");
    expect(state.banner).toBeNull();
    expect(state.pending).toBe(false);

    const html = renderApp(state);
    expect((html.match(/class="verdict-card/g) ?? []).length).toBe(1);
  });

  it("blocks identical texts client-side without calling the service", async () => {
    const fetchFn = vi.fn();
    const bench = new Workbench({ fetchFn: fetchFn as unknown as FetchFn });

    const state = await bench.submit("same  text", " same text ");

    expect(fetchFn).not.toHaveBeenCalled();
    expect(state.attempts).toHaveLength(0);
    expect(state.fieldError?.message).toContain("no revision detected");
    expect(renderApp(state)).toContain("no revision detected");
  });

  it("raises a banner when the service is unreachable, leaving history intact", async () => {
    let fail = false;
    const fetchFn = vi.fn(async () => {
      if (fail) {
        throw new TypeError("fetch failed");
      }
      return okResponse(VERDICT);
    });
    const bench = new Workbench({ fetchFn: fetchFn as unknown as FetchFn });

    await bench.submit("The cat sat.", "The cat sat down.");
    fail = true;
    const state = await bench.submit("The cat sat.", "The fluffy cat sat.");

    expect(state.banner).toBe("prediction service unreachable");
    expect(state.attempts).toHaveLength(1);
    expect(state.pending).toBe(false);

    const html = renderApp(state);
    expect(html).toContain(`role="alert"`);
    expect((html.match(/class="verdict-card/g) ?? []).length).toBe(1);
  });

  it("surfaces the service's own error detail in the banner", async () => {
    const fetchFn = vi.fn(async () =>
      errorResponse(503, { detail: "no model loaded" }),
    );
    const bench = new Workbench({ fetchFn: fetchFn as unknown as FetchFn });

    const state = await bench.submit("The cat sat.", "The cat sat down.");

    expect(state.banner).toBe("no model loaded");
    expect(state.attempts).toHaveLength(0);
  });

  it("a later success clears the banner", async () => {
    let fail = true;
    const fetchFn = vi.fn(async () => {
      if (fail) {
        throw new TypeError("fetch failed");
      }
      return okResponse(VERDICT);
    });
    const bench = new Workbench({ fetchFn: fetchFn as unknown as FetchFn });

    await bench.submit("The cat sat.", "The cat sat down.");
    expect(bench.getState().banner).not.toBeNull();

    fail = false;
    const state = await bench.submit("The cat sat.", "The cat sat down!");
    expect(state.banner).toBeNull();
    expect(state.attempts).toHaveLength(1);
  });

  it("keeps at most one request in flight; later submissions queue", async () => {
    const resolvers: Array<(r: Response) => void> = [];
    const fetchFn = vi.fn(
      () => new Promise<Response>((resolve) => resolvers.push(resolve)),
    );
    const bench = new Workbench({ fetchFn: fetchFn as unknown as FetchFn });

    const first = bench.submit("The cat sat.", "The cat sat down.");
    const second = bench.submit("The cat sat.", "The fluffy cat sat.");
    await Promise.resolve();

    // the second request must not start while the first is in flight
    expect(fetchFn).toHaveBeenCalledTimes(1);

    resolvers[0]!(okResponse(VERDICT));
    await first;
    await vi.waitFor(() => expect(fetchFn).toHaveBeenCalledTimes(2));

    resolvers[1]!(okResponse({ ...VERDICT, probability: 0.42, label: "NotBetter" }));
    const state = await second;

    expect(state.attempts.map((a) => a.s2Text)).toEqual([
      "The cat sat down.",
      "The fluffy cat sat.",
    ]);
    expect(state.attempts[1]!.probability).toBe(0.42);
  });

  it("a failed request does not wedge the queue", async () => {
    let fail = true;
    const fetchFn = vi.fn(async () => {
      if (fail) {
        throw new TypeError("fetch failed");
      }
      return okResponse(VERDICT);
    });
    const bench = new Workbench({ fetchFn: fetchFn as unknown as FetchFn });

    await bench.submit("The cat sat.", "The cat sat down.");
    fail = false;
    const state = await bench.submit("The cat sat.", "The cat sat down!");

    expect(state.attempts).toHaveLength(1);
    expect(fetchFn).toHaveBeenCalledTimes(2);
  });

  it("notifies onChange with each state, ending in the rendered result", async () => {
    const seen: SessionState[] = [];
    const fetchFn = vi.fn(async () => okResponse(VERDICT));
    const bench = new Workbench({
      fetchFn: fetchFn as unknown as FetchFn,
      onChange: (s) => seen.push(s),
    });

    await bench.submit("The cat sat.", "The cat sat down.");

    expect(seen.length).toBeGreaterThanOrEqual(2);
    expect(seen[0]!.pending).toBe(true);
    const last = seen[seen.length - 1]!;
    expect(last.pending).toBe(false);
    expect(last.attempts).toHaveLength(1);
    expect(last).toBe(bench.getState());
  });
});

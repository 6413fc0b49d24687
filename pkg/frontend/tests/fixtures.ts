// A small in-memory stand-in for the turkpos HTTP API, speaking the same
// payloads, plus canned records for unit tests.

import type { AnalysisRecord } from "../src/types";

export const TAGSET = ["NOUN", "VERB", "ADJ", "ADV", "PRON"];

export function makeAnalysis(
  tokens: string[],
  tags: string[],
  overrides: Partial<AnalysisRecord> = {},
): AnalysisRecord {
  const frequencies: Record<string, [string, number][]> = {};
  tokens.forEach((token, i) => {
    const tag = tags[i];
    frequencies[tag] = frequencies[tag] ?? [];
    const hit = frequencies[tag].find((p) => p[0] === token);
    if (hit) hit[1] += 1;
    else frequencies[tag].push([token, 1]);
  });
  return {
    id: "an-1",
    created_at: 1,
    source: "text",
    input_hash: "h",
    model_version: "v0001",
    result: {
      source: "text",
      filename: null,
      sentences: [
        {
          tokens,
          tags,
          confidences: tokens.map(() => 0.9),
          oov: tokens.map((t) => t === "zebra"),
        },
      ],
      frequencies,
    },
    ...overrides,
  };
}

export type FakeServer = {
  fetchFn: (url: string, init?: RequestInit) => Promise<Response>;
  requests: { url: string; init?: RequestInit }[];
  corrections: unknown[];
  state: { modelVersion: string; retrain: string; analysisCount: number };
};

/** Tiny fake backend: deterministic tags (round-robin over the tagset by
 * token index), correction intake, and a one-poll retrain that bumps the
 * model version. */
export function makeServer(): FakeServer {
  const state = { modelVersion: "v0001", retrain: "idle", analysisCount: 0 };
  const corrections: unknown[] = [];
  const requests: { url: string; init?: RequestInit }[] = [];

  const json = (body: unknown, status = 200) =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  async function route(url: string, init?: RequestInit): Promise<Response> {
    const method = init?.method ?? "GET";
    const path = url.split("?")[0];
    if (path === "/api/tagset") {
      return json({ tags: TAGSET, model_version: state.modelVersion });
    }
    if (path === "/api/analyses" && method === "POST") {
      const { text } = JSON.parse(String(init?.body));
      const tokens = text
        .toLowerCase()
        .replace(/[.,!?]/g, " ")
        .split(/\s+/)
        .filter(Boolean);
      if (!tokens.length) return json({ detail: "empty input" }, 400);
      state.analysisCount += 1;
      const record = makeAnalysis(
        tokens,
        tokens.map((_: string, i: number) => TAGSET[i % TAGSET.length]),
        { id: `an-${state.analysisCount}`, model_version: state.modelVersion },
      );
      return json(record, 201);
    }
    if (path === "/api/documents" && method === "POST") {
      const text = String(init?.body);
      state.analysisCount += 1;
      const tokens = text.toLowerCase().split(/\s+/).filter(Boolean);
      const record = makeAnalysis(
        tokens,
        tokens.map((_: string, i: number) => TAGSET[i % TAGSET.length]),
        { id: `an-${state.analysisCount}`, model_version: state.modelVersion },
      );
      record.result.source = "document";
      record.result.filename = new URL(url, "http://x").searchParams.get("filename");
      record.source = "document";
      return json(record, 201);
    }
    if (path === "/api/corrections" && method === "POST") {
      const body = JSON.parse(String(init?.body));
      const ack = { id: `corr-${corrections.length + 1}`, submitted_at: 2, original_tag: "NOUN", ...body };
      corrections.push(ack);
      return json(ack, 201);
    }
    if (path === "/api/admin/retrain" && method === "POST") {
      if (!corrections.length) return json({ detail: "no pending corrections to merge" }, 422);
      state.retrain = "running";
      return json({ status: "running", pending_corrections: corrections.length }, 202);
    }
    if (path === "/api/admin/retrain") {
      if (state.retrain === "running") {
        // complete on the next poll
        state.retrain = "completed";
        return json({ status: "running", error: null, started_at: 1, finished_at: null, model_version: state.modelVersion });
      }
      if (state.retrain === "completed" && state.modelVersion === "v0001") {
        state.modelVersion = "v0002";
      }
      return json({
        status: state.retrain,
        error: null,
        started_at: 1,
        finished_at: 2,
        model_version: state.modelVersion,
      });
    }
    return json({ detail: `no route ${method} ${path}` }, 404);
  }

  return {
    fetchFn: (url, init) => {
      requests.push({ url, init });
      return route(url, init);
    },
    requests,
    corrections,
    state,
  };
}

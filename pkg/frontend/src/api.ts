// Typed client for the turkpos HTTP API. All server interaction of the UI
// funnels through this module; nothing else touches fetch.

import type {
  AnalysisRecord,
  CorrectionAck,
  RetrainStatus,
  TagsetResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parse<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  analyzeText(text: string): Promise<AnalysisRecord> {
    return this.request("/api/analyses", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  uploadDocument(content: string | Blob, filename: string): Promise<AnalysisRecord> {
    const query = new URLSearchParams({ filename }).toString();
    return this.request(`/api/documents?${query}`, {
      method: "POST",
      headers: { "Content-Type": "text/plain; charset=utf-8" },
      body: content,
    });
  }

  getAnalysis(id: string): Promise<AnalysisRecord> {
    return this.request(`/api/analyses/${encodeURIComponent(id)}`);
  }

  getTagset(): Promise<TagsetResponse> {
    return this.request("/api/tagset");
  }

  submitCorrection(body: {
    analysis_id: string;
    sentence_index: number;
    token_index: number;
    corrected_tag: string;
  }): Promise<CorrectionAck> {
    return this.request("/api/corrections", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  startRetrain(): Promise<{ status: string; pending_corrections: number }> {
    return this.request("/api/admin/retrain", { method: "POST" });
  }

  retrainStatus(): Promise<RetrainStatus> {
    return this.request("/api/admin/retrain");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    return parse<T>(await this.fetchFn(this.base + path, init));
  }
}

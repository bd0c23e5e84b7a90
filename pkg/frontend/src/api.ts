import type {
  CorpusStats,
  SearchResponse,
  SentimentRect,
  SessionEventBody,
} from "./types.js";
import { isFullRect } from "./rect.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail?: string,
  ) {
    super(detail ? `${code}: ${detail}` : code);
  }
}

async function throwApiError(response: Response): Promise<never> {
  let code = "unknown_error";
  let detail: string | undefined;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    code = body.error ?? code;
    detail = body.detail;
  } catch {
    // non-JSON error body; keep the generic code
  }
  throw new ApiError(response.status, code, detail);
}

/** Typed client for the backend HTTP interface. */
export class SearchClient {
  constructor(readonly baseUrl: string) {}

  async search(
    query: string,
    rect?: SentimentRect,
    limit?: number,
  ): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: query });
    if (rect && !isFullRect(rect)) {
      params.set("pos_min", String(rect.pos_min));
      params.set("pos_max", String(rect.pos_max));
      params.set("neg_min", String(rect.neg_min));
      params.set("neg_max", String(rect.neg_max));
    }
    if (limit !== undefined) {
      params.set("limit", String(limit));
    }
    const response = await fetch(`${this.baseUrl}/search?${params}`);
    if (!response.ok) {
      await throwApiError(response);
    }
    return (await response.json()) as SearchResponse;
  }

  async postEvent(event: SessionEventBody): Promise<void> {
    const response = await fetch(`${this.baseUrl}/events`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(event),
    });
    if (!response.ok) {
      await throwApiError(response);
    }
  }

  async corpusStats(): Promise<CorpusStats> {
    const response = await fetch(`${this.baseUrl}/corpus/stats`);
    if (!response.ok) {
      await throwApiError(response);
    }
    return (await response.json()) as CorpusStats;
  }

  async report(kind: "treatment" | "taxonomy"): Promise<unknown> {
    const response = await fetch(`${this.baseUrl}/report/${kind}`);
    if (!response.ok) {
      await throwApiError(response);
    }
    return response.json();
  }
}

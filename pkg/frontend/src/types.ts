/** Wire types mirroring the backend HTTP interface field-for-field. */

export type Treatment = "BA" | "SC" | "PC";

export interface SentimentRect {
  pos_min: number;
  pos_max: number;
  neg_min: number;
  neg_max: number;
}

export interface Hit {
  doc_id: string;
  title: string;
  abstract: string;
  positivity: number;
  negativity: number;
  display_category: string;
  bm25_score: number;
  in_focus: boolean;
}

export interface AttributeSummary {
  bin_edges: number[];
  counts: number[];
  mean: number;
  stddev: number;
  count: number;
}

export interface Distributions {
  positivity: AttributeSummary;
  negativity: AttributeSummary;
}

export interface SearchResponse {
  total_matches: number;
  hits: Hit[];
  active_rect: SentimentRect;
  distributions: Distributions | null;
}

export interface CorpusStats extends Distributions {
  document_count: number;
}

export type EventKind =
  | "task_start"
  | "query"
  | "filter_change"
  | "result_select"
  | "questionnaire"
  | "task_end";

export interface SessionEventBody {
  ts_ms: number;
  user_id: string;
  treatment: Treatment;
  task_id: string;
  kind: EventKind;
  payload: Record<string, unknown>;
}

/** Payload shapes of the labelaudit HTTP API, mirrored verbatim. */

export interface TreeLabel {
  name: string;
  count: number;
}

export interface TreeCategory {
  name: string;
  duplication_score: number;
  labels: TreeLabel[];
}

export interface LabelsTree {
  categories: TreeCategory[];
  snapshot_version: number;
}

export interface CooccurrencePayload {
  category: string;
  labels: string[];
  counts: number[][];
  snapshot_version: number;
}

export interface RecordRow {
  id: string;
  fields: Record<string, string>;
  labels: Record<string, string[]>;
}

export interface RecordsPayload {
  rows: RecordRow[];
  snapshot_version: number;
}

export interface SnapshotStats {
  snapshot_version: number;
  n_records: number;
  n_categories: number;
  n_labels: number;
  n_assigned_labels: number;
  schema: Record<string, string[]>;
  model_trained: boolean;
  trained_on_version: number | null;
}

export interface ProjectionPoint {
  id: string;
  x: number;
  y: number;
  color: number | null;
}

export interface ProjectionConfigPayload {
  layout: string;
  color: string;
  perplexity: number;
  iterations: number;
  learning_rate: number;
  seed: number;
  max_points: number;
}

export interface ProjectionPayload {
  points: ProjectionPoint[];
  subsampled: boolean;
  config: ProjectionConfigPayload;
  cache_key: string;
  snapshot_version: number;
}

export interface SelectPayload {
  record_ids: string[];
  cache_key: string;
  snapshot_version: number;
}

export interface ConfidenceRowPayload {
  record_id: string;
  vector: number[];
  score: number;
  by_category: Record<string, number>;
}

export interface ConfidencePayload {
  label_order: string[];
  rows: ConfidenceRowPayload[];
  snapshot_version: number;
}

export interface DensityRowPayload {
  record_id: string;
  density: number | null;
  label_count: number;
  word_count: number;
}

export interface DensityPayload {
  rows: DensityRowPayload[];
  ranked_ids: string[];
  snapshot_version: number;
}

export interface HighlightPayload {
  start: number;
  end: number;
  token: string;
  sign: "positive" | "negative" | "none";
}

export interface ExplanationPayload {
  record_id: string | null;
  category: string;
  target_label: string;
  target_probability: number;
  top_labels: [string, number][];
  contributions: [string, number][];
  highlights: HighlightPayload[];
  intercept: number;
  snapshot_version: number;
}

export type ScopeKind = "corpus" | "subgroup" | "record";

export interface ScopePayload {
  kind: ScopeKind;
  record_ids?: string[];
}

export interface RelabelOpPayload {
  kind: "remove" | "modify" | "insert";
  scope: ScopePayload;
  label?: string | null;
  new_label?: string | null;
  category?: string | null;
  note?: string | null;
}

/** One history row: the op fields flattened together with id and status. */
export interface HistoryEntry extends RelabelOpPayload {
  op_id: number;
  status: "pending" | "reverted" | "applied";
  timestamp?: string;
}

export interface HistoryPayload {
  ops: HistoryEntry[];
  snapshot_version: number;
}

export interface JobStatus {
  job_id: string;
  status: "queued" | "running" | "done" | "error";
  result: unknown;
  error: { code: string; detail: string } | null;
  snapshot_version: number;
}

export interface MetricsPayload {
  metrics: { hamming_loss: number; micro_f1: number; macro_f1: number };
  trained_on_version: number;
  snapshot_version: number;
}

export interface ApplyPayload {
  snapshot_version: number;
  applied_op_ids: number[];
}

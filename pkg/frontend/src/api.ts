/** Typed client for the labelaudit HTTP API, including job polling. */

import type {
  ApplyPayload,
  ConfidencePayload,
  CooccurrencePayload,
  DensityPayload,
  ExplanationPayload,
  HistoryPayload,
  JobStatus,
  LabelsTree,
  MetricsPayload,
  ProjectionPayload,
  RecordsPayload,
  RelabelOpPayload,
  SelectPayload,
  SnapshotStats,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
    readonly snapshotVersion: number | null,
  ) {
    super(`${code}: ${detail}`);
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export class Api {
  constructor(
    private readonly base: string = "",
    private readonly pollMs: number = 1000,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    const body = await response.json();
    if (!response.ok) {
      const err = body as { code?: string; detail?: string; snapshot_version?: number };
      throw new ApiError(
        response.status,
        err.code ?? "error",
        err.detail ?? response.statusText,
        err.snapshot_version ?? null,
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  /** Submit a job-producing request, then poll /jobs/{id} to completion. */
  async runJob<T>(path: string, payload: unknown): Promise<T> {
    const submitted = await this.post<{ job_id: string }>(path, payload);
    for (;;) {
      const job = await this.request<JobStatus>(`/jobs/${submitted.job_id}`);
      if (job.status === "done") {
        return job.result as T;
      }
      if (job.status === "error") {
        const err = job.error ?? { code: "error", detail: "job failed" };
        throw new ApiError(500, err.code, err.detail, job.snapshot_version);
      }
      await sleep(this.pollMs);
    }
  }

  snapshot(): Promise<SnapshotStats> {
    return this.request("/snapshot");
  }

  labelsTree(): Promise<LabelsTree> {
    return this.request("/labels/tree");
  }

  cooccurrence(category: string): Promise<CooccurrencePayload> {
    return this.request(
      `/labels/cooccurrence?category=${encodeURIComponent(category)}`,
    );
  }

  records(filter: { label?: string; ids?: string[] } = {}): Promise<RecordsPayload> {
    const params = new URLSearchParams();
    if (filter.label !== undefined) {
      params.set("label", filter.label);
    }
    if (filter.ids !== undefined) {
      params.set("ids", filter.ids.join(","));
    }
    const query = params.toString();
    return this.request(`/records${query ? `?${query}` : ""}`);
  }

  metrics(): Promise<MetricsPayload> {
    return this.request("/metrics");
  }

  confidence(): Promise<ConfidencePayload> {
    return this.request("/confidence");
  }

  density(): Promise<DensityPayload> {
    return this.request("/density");
  }

  projection(config: Record<string, unknown>): Promise<ProjectionPayload> {
    return this.runJob("/projection", { config });
  }

  train(
    vectorizerConfig: Record<string, unknown> = {},
    trainingConfig: Record<string, unknown> = {},
  ): Promise<unknown> {
    return this.runJob("/train", {
      vectorizer_config: vectorizerConfig,
      training_config: trainingConfig,
    });
  }

  selectPolygon(cacheKey: string, polygon: [number, number][]): Promise<SelectPayload> {
    return this.post("/projection/select", { cache_key: cacheKey, polygon });
  }

  explain(
    recordId: string,
    category: string,
    config: Record<string, unknown> = {},
  ): Promise<ExplanationPayload> {
    return this.post("/explain", { record_id: recordId, category, config });
  }

  propose(op: RelabelOpPayload): Promise<{ op_id: number; snapshot_version: number }> {
    return this.post("/relabel/propose", { op });
  }

  revert(opId: number): Promise<{ op_id: number; status: string }> {
    return this.post("/relabel/revert", { op_id: opId });
  }

  apply(baseVersion: number): Promise<ApplyPayload> {
    return this.post("/relabel/apply", { base_version: baseVersion });
  }

  history(): Promise<HistoryPayload> {
    return this.request("/relabel/history");
  }
}

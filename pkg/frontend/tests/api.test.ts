import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { Api, ApiError } from "../src/api.js";
import { FakeServer, fixture } from "./helpers.js";

let server: FakeServer;
let api: Api;

beforeEach(() => {
  server = new FakeServer();
  server.install();
  api = new Api("", 0);
});

afterEach(() => {
  server.uninstall();
});

describe("request plumbing", () => {
  it("returns parsed payloads", async () => {
    server.set("GET /snapshot", fixture("snapshot"));
    const stats = await api.snapshot();
    expect(stats.n_records).toBe(80);
    expect(stats.model_trained).toBe(true);
  });

  it("raises ApiError with the server's error envelope", async () => {
    server.set(
      "GET /confidence",
      { code: "model_not_trained", detail: "POST /train first", snapshot_version: 0 },
      409,
    );
    const err = await api.confidence().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.code).toBe("model_not_trained");
    expect(err.snapshotVersion).toBe(0);
  });

  it("builds record queries from the filter", async () => {
    server.setFn("GET /records", () => ({ body: { rows: [], snapshot_version: 0 } }));
    await api.records();
    await api.records({ label: "too_hot" });
    await api.records({ ids: ["a", "b"] });
    const paths = server.calls("GET", "/records").map((r) => r.path);
    expect(paths).toEqual([
      "/records",
      "/records?label=too_hot",
      "/records?ids=a%2Cb",
    ]);
  });
});

describe("job polling", () => {
  it("polls until done and unwraps the result", async () => {
    let polls = 0;
    server.set("POST /projection", { job_id: "j1", cache_key: "k", snapshot_version: 0 });
    server.setFn("GET /jobs/j1", () => {
      polls += 1;
      return polls < 3
        ? { body: { job_id: "j1", status: "running", result: null, error: null, snapshot_version: 0 } }
        : { body: { job_id: "j1", status: "done", result: { points: [] }, error: null, snapshot_version: 0 } };
    });
    const result = await api.projection({ layout: "word-vector" });
    expect(polls).toBe(3);
    expect(result).toEqual({ points: [] });
  });

  it("surfaces job failures as ApiError", async () => {
    server.set("POST /train", { job_id: "j2", snapshot_version: 0 });
    server.set("GET /jobs/j2", {
      job_id: "j2",
      status: "error",
      result: null,
      error: { code: "validation_error", detail: "k too large" },
      snapshot_version: 0,
    });
    const err = (await api.train().catch((e) => e)) as ApiError;
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("validation_error");
    expect(err.detail).toBe("k too large");
  });
});

describe("write endpoints", () => {
  it("posts the selection polygon under its cache key", async () => {
    server.set("POST /projection/select", fixture("projection_select"));
    await api.selectPolygon("abc", [[0, 0], [1, 0], [1, 1]]);
    const [req] = server.calls("POST", "/projection/select");
    expect(req.body).toEqual({ cache_key: "abc", polygon: [[0, 0], [1, 0], [1, 1]] });
  });

  it("wraps relabel ops and versions the apply", async () => {
    server.set("POST /relabel/propose", fixture("propose_1"));
    server.set("POST /relabel/apply", fixture("apply"));
    await api.propose({ kind: "remove", scope: { kind: "corpus" }, label: "x" });
    await api.apply(0);
    expect(server.calls("POST", "/relabel/propose")[0].body).toEqual({
      op: { kind: "remove", scope: { kind: "corpus" }, label: "x" },
    });
    expect(server.calls("POST", "/relabel/apply")[0].body).toEqual({
      base_version: 0,
    });
  });
});

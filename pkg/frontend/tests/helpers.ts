/** Shared test scaffolding: fixture loading, a fake fetch that serves
 * recorded server responses, and the DOM skeleton the app mounts into.
 *
 * Fixtures under tests/fixtures are verbatim response bodies captured from
 * a live service (see scripts/record_fixtures.py in the repository root).
 */

import { readFileSync } from "node:fs";
import { resolve } from "node:path";

export function fixture<T = any>(name: string): T {
  // vitest runs with the frontend directory as its root.
  const path = resolve(process.cwd(), "tests", "fixtures", `${name}.json`);
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}

export interface RecordedRequest {
  method: string;
  path: string;
  body: any;
}

type Responder = (req: RecordedRequest) => { status?: number; body: unknown };

/** Route table keyed by "METHOD /path". Most-specific key wins: a key with
 * the full query string beats the bare path. Handlers can be swapped
 * mid-test to walk a server through states (pending -> applied, v0 -> v1).
 */
export class FakeServer {
  readonly requests: RecordedRequest[] = [];
  private readonly routes = new Map<string, Responder>();
  private realFetch: typeof fetch | undefined;

  set(key: string, body: unknown, status = 200): void {
    this.routes.set(key, () => ({ status, body }));
  }

  setFn(key: string, responder: Responder): void {
    this.routes.set(key, responder);
  }

  install(): void {
    this.realFetch = globalThis.fetch;
    globalThis.fetch = (async (input: any, init?: RequestInit) => {
      const url = String(input);
      const path = url.startsWith("http") ? new URL(url).pathname + new URL(url).search : url;
      const method = (init?.method ?? "GET").toUpperCase();
      const body = init?.body ? JSON.parse(String(init.body)) : null;
      const req: RecordedRequest = { method, path, body };
      this.requests.push(req);
      const bare = path.split("?")[0];
      const responder =
        this.routes.get(`${method} ${path}`) ?? this.routes.get(`${method} ${bare}`);
      if (!responder) {
        return respond(404, { code: "not_found", detail: `no route ${method} ${path}` });
      }
      const { status = 200, body: payload } = responder(req);
      return respond(status, payload);
    }) as typeof fetch;
  }

  uninstall(): void {
    if (this.realFetch) {
      globalThis.fetch = this.realFetch;
    }
  }

  calls(method: string, barePath: string): RecordedRequest[] {
    return this.requests.filter(
      (r) => r.method === method && r.path.split("?")[0] === barePath,
    );
  }
}

function respond(status: number, body: unknown): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  } as unknown as Response;
}

/** A trained-session fake: every read endpoint serves the v0 fixtures and
 * both jobs complete immediately.
 */
export function trainedServer(): FakeServer {
  const server = new FakeServer();
  server.set("GET /health", fixture("health"));
  server.set("GET /snapshot", fixture("snapshot"));
  server.set("GET /labels/tree", fixture("labels_tree"));
  server.set(
    "GET /labels/cooccurrence?category=problem",
    fixture("cooccurrence_problem"),
  );
  server.set("GET /metrics", fixture("metrics"));
  server.set("GET /confidence", fixture("confidence"));
  server.set("GET /density", fixture("density"));
  server.set("POST /train", fixture("train_submit"));
  server.set(
    `GET /jobs/${fixture("train_submit").job_id}`,
    fixture("jobs_train_done"),
  );
  server.set("POST /projection", fixture("projection_submit"));
  server.set(
    `GET /jobs/${fixture("projection_submit").job_id}`,
    fixture("jobs_projection_done"),
  );
  server.set("POST /projection/select", fixture("projection_select"));
  server.set("POST /explain", fixture("explain"));
  server.set("POST /relabel/propose", fixture("propose_1"));
  server.set("GET /relabel/history", fixture("history_pending"));
  server.set("POST /relabel/revert", fixture("revert_2"));
  server.set("POST /relabel/apply", fixture("apply"));
  // Records filtered by ids: echo rows for the requested subset.
  server.setFn("GET /records", (req) => {
    const query = new URLSearchParams(req.path.split("?")[1] ?? "");
    const all = fixture("records_all");
    if (query.get("label") === "too_hot") {
      return { body: fixture("records_label_too_hot") };
    }
    const ids = query.get("ids");
    if (ids) {
      const wanted = new Set(ids.split(","));
      return {
        body: {
          rows: all.rows.filter((r: any) => wanted.has(r.id)),
          snapshot_version: all.snapshot_version,
        },
      };
    }
    return { body: all };
  });
  return server;
}

/** The pane skeleton from index.html, minus styling. */
export function mountDom(): void {
  document.body.innerHTML = `
    <span id="status"></span>
    <button id="train-btn"></button>
    <button id="project-btn"></button>
    <select id="color-mode">
      <option value="confidence" selected>confidence</option>
      <option value="info-density">info density</option>
    </select>
    <div id="banner"></div>
    <div id="error"></div>
    <div id="sunburst"></div>
    <div id="chord"></div>
    <div id="scatter"></div>
    <nav id="tabs">
      <button data-tab="inspect">Inspect</button>
      <button data-tab="categorize">Categorize</button>
      <button data-tab="explain">Explain</button>
      <button data-tab="relabel">Relabel</button>
    </nav>
    <div id="tab-inspect" class="tab-pane"></div>
    <div id="tab-categorize" class="tab-pane"></div>
    <div id="tab-explain" class="tab-pane"></div>
    <div id="tab-relabel" class="tab-pane"></div>
  `;
}

export function flush(times = 3): Promise<void> {
  let p = Promise.resolve();
  for (let i = 0; i < times; i += 1) {
    p = p.then(() => new Promise((resolve) => setTimeout(resolve, 0)));
  }
  return p;
}

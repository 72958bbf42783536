/** App wiring: one Api, one Store, imperative chart renders, reactive tabs.
 *
 * Interaction flow mirrors the audit loop: sunburst -> expand a category
 * into the chord view -> drill into records by label or lasso -> inspect,
 * heatmap, explain -> compose relabel ops -> apply and refresh everything.
 */

import { Api, ApiError } from "./api.js";
import { renderChord } from "./chord.js";
import { Scatter } from "./scatter.js";
import { Store } from "./state.js";
import { renderSunburst } from "./sunburst.js";
import {
  renderExplanation,
  renderHeatmap,
  renderInspect,
  renderRelabel,
} from "./tabs.js";
import type { RelabelOpPayload } from "./types.js";
import type { AppState, TabName } from "./state.js";

const EXPLAIN_CONFIG = { n_samples: 300, seed: 0 };

export interface AppOptions {
  api?: Api;
  root?: ParentNode;
}

export interface AppHandles {
  api: Api;
  store: Store;
  ready: Promise<void>;
  refreshAll(): Promise<void>;
  showProjection(): Promise<void>;
}

function pane(root: ParentNode, id: string): HTMLElement {
  const node = root.querySelector<HTMLElement>(`#${id}`);
  if (!node) {
    throw new Error(`missing pane #${id}`);
  }
  return node;
}

function scopeIdsFor(state: AppState): string[] {
  if (state.scopeKind === "corpus") {
    return [];
  }
  // Checkboxes override the lasso when both exist.
  return state.checkedIds.size > 0
    ? [...state.checkedIds].sort()
    : state.lassoIds;
}

/** Perplexity the server will accept for n points (must stay under n/3). */
function usablePerplexity(n: number): number {
  return Math.max(2, Math.min(30, Math.floor(n / 3) - 1));
}

export function initApp(options: AppOptions = {}): AppHandles {
  const api = options.api ?? new Api();
  const root = options.root ?? document;
  const store = new Store();

  const sunburstPane = pane(root, "sunburst");
  const chordPane = pane(root, "chord");
  const scatterPane = pane(root, "scatter");
  const statusEl = pane(root, "status");
  const bannerEl = pane(root, "banner");
  const errorEl = pane(root, "error");
  const tabsNav = pane(root, "tabs");
  const tabPanes: Record<TabName, HTMLElement> = {
    inspect: pane(root, "tab-inspect"),
    categorize: pane(root, "tab-categorize"),
    explain: pane(root, "tab-explain"),
    relabel: pane(root, "tab-relabel"),
  };
  const trainButton = pane(root, "train-btn");
  const projectButton = pane(root, "project-btn");
  const colorSelect = pane(root, "color-mode") as HTMLSelectElement;

  let scatter: Scatter | null = null;

  /** Run a handler; domain errors turn into the banner or the inline box. */
  async function guard(action: () => Promise<void>): Promise<void> {
    store.update({ inlineError: null, busy: true });
    try {
      await action();
      store.update({ busy: false });
    } catch (err) {
      if (err instanceof ApiError && err.code === "stale_version") {
        store.update({
          busy: false,
          banner:
            "The snapshot changed on the server; views were reloaded. " +
            "Review pending ops and apply again.",
        });
        await refreshAll();
        return;
      }
      const detail =
        err instanceof ApiError ? `${err.code}: ${err.detail}` : String(err);
      store.update({ busy: false, inlineError: detail });
    }
  }

  async function refreshAll(): Promise<void> {
    const [stats, tree, records, history] = await Promise.all([
      api.snapshot(),
      api.labelsTree(),
      api.records(),
      api.history(),
    ]);
    store.update({
      stats,
      tree,
      snapshotVersion: stats.snapshot_version,
      rows: records.rows,
      rowsSource: "all records",
      history: history.ops,
      currentLabel: null,
      checkedIds: new Set(),
      lassoIds: [],
      scopeKind: "corpus",
      projection: null,
      confidence: null,
      explanation: null,
    });
    scatter = null;
    scatterPane.textContent = "";
    chordPane.textContent = "";
    renderSunburst(sunburstPane, tree, {
      onCategory: (name) => void guard(() => expandCategory(name)),
      onLabel: (name) => void guard(() => drillLabel(name)),
    });
    if (stats.model_trained) {
      await loadConfidence();
    }
  }

  async function loadConfidence(): Promise<void> {
    const confidence = await api.confidence();
    store.update({ confidence });
  }

  async function expandCategory(name: string): Promise<void> {
    const payload = await api.cooccurrence(name);
    store.update({ expandedCategory: name });
    renderChord(chordPane, payload, {
      onLabel: (label) => void guard(() => drillLabel(label)),
    });
  }

  async function drillLabel(label: string): Promise<void> {
    const records = await api.records({ label });
    store.update({
      currentLabel: label,
      rows: records.rows,
      rowsSource: `label "${label}"`,
      scopeKind: "corpus",
      checkedIds: new Set(),
      activeTab: "inspect",
    });
  }

  async function showProjection(): Promise<void> {
    const stats = store.state.stats ?? (await api.snapshot());
    const trained = stats.model_trained;
    const colorMode = trained ? colorSelect.value : "info-density";
    const config = {
      layout: trained ? "confidence-vector" : "word-vector",
      color: colorMode,
      perplexity: usablePerplexity(Math.min(stats.n_records, 2000)),
      iterations: 260,
      seed: 0,
    };
    const projection = await api.projection(config);
    store.update({ projection, colorMode });
    scatter = new Scatter(scatterPane, projection, colorMode, {
      onLasso: (polygon) => void guard(() => lassoSelect(polygon)),
    });
  }

  async function lassoSelect(polygon: [number, number][]): Promise<void> {
    const projection = store.state.projection;
    if (!projection) {
      return;
    }
    let selected;
    try {
      selected = await api.selectPolygon(projection.cache_key, polygon);
    } catch (err) {
      if (err instanceof ApiError && err.code === "unknown_cache_key") {
        // The server restarted or evicted the layout; rebuild and retry.
        await showProjection();
        const fresh = store.state.projection;
        if (!fresh) {
          return;
        }
        selected = await api.selectPolygon(fresh.cache_key, polygon);
      } else {
        throw err;
      }
    }
    const records = await api.records({ ids: selected.record_ids });
    store.update({
      lassoIds: selected.record_ids,
      rows: records.rows,
      rowsSource: `lasso (${selected.record_ids.length})`,
      scopeKind: "subgroup",
      checkedIds: new Set(),
      activeTab: "inspect",
    });
    scatter?.markSelected(new Set(selected.record_ids));
  }

  async function explainCell(recordId: string, category: string): Promise<void> {
    const explanation = await api.explain(recordId, category, EXPLAIN_CONFIG);
    let row = store.state.rows.find((r) => r.id === recordId);
    if (!row) {
      const fetched = await api.records({ ids: [recordId] });
      row = fetched.rows[0];
    }
    const text = row
      ? Object.values(row.fields).filter(Boolean).join(" ")
      : "";
    store.update({ explanation, activeTab: "explain" });
    renderExplanation(tabPanes.explain, explanation, text);
  }

  async function proposeOp(op: RelabelOpPayload): Promise<void> {
    await api.propose(op);
    const history = await api.history();
    store.update({ history: history.ops });
  }

  async function revertOp(opId: number): Promise<void> {
    await api.revert(opId);
    const history = await api.history();
    store.update({ history: history.ops });
  }

  async function applyPending(): Promise<void> {
    const result = await api.apply(store.state.snapshotVersion);
    store.update({
      banner:
        `Applied ops [${result.applied_op_ids.join(", ")}]; ` +
        `snapshot is now version ${result.snapshot_version}.`,
    });
    await refreshAll();
  }

  function renderTabs(state: AppState): void {
    for (const button of tabsNav.querySelectorAll<HTMLElement>("[data-tab]")) {
      button.classList.toggle("active", button.dataset.tab === state.activeTab);
    }
    for (const [name, node] of Object.entries(tabPanes)) {
      node.classList.toggle("active", name === state.activeTab);
    }

    renderInspect(tabPanes.inspect, state.rows, state.checkedIds, {
      onToggle: (recordId, checked) => {
        const next = new Set(state.checkedIds);
        if (checked) {
          next.add(recordId);
        } else {
          next.delete(recordId);
        }
        // A record scope holds exactly one id; several become a subgroup.
        const scopeKind =
          next.size === 1
            ? "record"
            : next.size > 1 || state.lassoIds.length
              ? "subgroup"
              : "corpus";
        store.update({ checkedIds: next, scopeKind });
      },
    });

    const categories = state.stats ? Object.keys(state.stats.schema) : [];
    if (state.confidence) {
      const onlyIds =
        state.rowsSource === "all records"
          ? null
          : new Set(state.rows.map((r) => r.id));
      renderHeatmap(tabPanes.categorize, state.confidence, categories, onlyIds, {
        onCell: (recordId, category) =>
          void guard(() => explainCell(recordId, category)),
      });
    } else {
      tabPanes.categorize.textContent =
        "Train a model to see per-category confidence.";
    }

    renderRelabel(
      tabPanes.relabel,
      state.scopeKind,
      scopeIdsFor(state),
      state.history,
      {
        onPropose: (op) => void guard(() => proposeOp(op)),
        onRevert: (opId) => void guard(() => revertOp(opId)),
        onApply: () => void guard(() => applyPending()),
      },
    );
  }

  store.subscribe((state) => {
    const stats = state.stats;
    statusEl.textContent = stats
      ? `v${stats.snapshot_version} | ${stats.n_records} records | ` +
        `${stats.n_labels} labels | rows: ${state.rowsSource}` +
        (state.busy ? " | working..." : "")
      : "loading...";
    bannerEl.textContent = state.banner ?? "";
    bannerEl.classList.toggle("visible", state.banner !== null);
    errorEl.textContent = state.inlineError ?? "";
    errorEl.classList.toggle("visible", state.inlineError !== null);
    renderTabs(state);
  });

  tabsNav.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const tab = target.dataset.tab as TabName | undefined;
    if (tab) {
      store.update({ activeTab: tab });
    }
  });
  bannerEl.addEventListener("click", () => store.update({ banner: null }));
  trainButton.addEventListener("click", () =>
    void guard(async () => {
      await api.train();
      const stats = await api.snapshot();
      store.update({ stats });
      await loadConfidence();
    }),
  );
  projectButton.addEventListener("click", () =>
    void guard(() => showProjection()),
  );
  colorSelect.addEventListener("change", () => {
    const projection = store.state.projection;
    if (projection && scatter && !store.state.stats?.model_trained) {
      // No model: only the density channel exists, repaint locally.
      scatter.recolor(colorSelect.value);
      store.update({ colorMode: colorSelect.value });
      return;
    }
    if (projection) {
      void guard(() => showProjection());
    }
  });

  const ready = guard(() => refreshAll());
  return { api, store, ready, refreshAll, showProjection };
}

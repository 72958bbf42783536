/** Tab panes: record table, per-category confidence heatmap, explanation
 * view, and the relabel composer with its history list.
 *
 * Every value shown here came from the server; the client never recomputes
 * scores, probabilities, or label sets.
 */

import { confidenceColor } from "./color.js";
import type {
  ConfidencePayload,
  ExplanationPayload,
  HistoryEntry,
  RecordRow,
  RelabelOpPayload,
  ScopeKind,
} from "./types.js";

type Child = Node | string;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  node.append(...children);
  return node;
}

function formatLabels(byCategory: Record<string, string[]>): string {
  const parts: string[] = [];
  for (const [category, labels] of Object.entries(byCategory)) {
    if (labels.length) {
      parts.push(`${category}: ${labels.join(", ")}`);
    }
  }
  return parts.join(" | ");
}

export interface InspectHandlers {
  onToggle(recordId: string, checked: boolean): void;
}

export function renderInspect(
  container: HTMLElement,
  rows: RecordRow[],
  checkedIds: Set<string>,
  handlers: InspectHandlers,
): void {
  container.textContent = "";
  const table = el("table", { class: "inspect-table" });
  const head = el(
    "tr",
    {},
    el("th"),
    el("th", {}, "record"),
    el("th", {}, "text"),
    el("th", {}, "labels"),
  );
  table.appendChild(el("thead", {}, head));
  const body = el("tbody");
  for (const row of rows) {
    const checkbox = el("input", { type: "checkbox" }) as HTMLInputElement;
    checkbox.checked = checkedIds.has(row.id);
    checkbox.dataset.id = row.id;
    checkbox.addEventListener("change", () =>
      handlers.onToggle(row.id, checkbox.checked),
    );
    const text = Object.values(row.fields).filter(Boolean).join(" ");
    const tr = el(
      "tr",
      { class: "inspect-row" },
      el("td", {}, checkbox),
      el("td", { class: "record-id" }, row.id),
      el("td", { class: "record-text" }, text),
      el("td", { class: "record-labels" }, formatLabels(row.labels)),
    );
    tr.dataset.id = row.id;
    body.appendChild(tr);
  }
  table.appendChild(body);
  container.appendChild(table);
}

export interface HeatmapHandlers {
  onCell(recordId: string, category: string): void;
}

/** Confidence heatmap: one row per record, one column per category.
 *
 * `onlyIds` restricts the rows (lasso or checkbox subgroup); null shows the
 * whole report.
 */
export function renderHeatmap(
  container: HTMLElement,
  confidence: ConfidencePayload,
  categories: string[],
  onlyIds: Set<string> | null,
  handlers: HeatmapHandlers,
): void {
  container.textContent = "";
  const table = el("table", { class: "heatmap" });
  const head = el("tr", {}, el("th", {}, "record"));
  for (const category of categories) {
    head.appendChild(el("th", {}, category));
  }
  table.appendChild(el("thead", {}, head));
  const body = el("tbody");
  for (const row of confidence.rows) {
    if (onlyIds && !onlyIds.has(row.record_id)) {
      continue;
    }
    const tr = el("tr", {}, el("td", { class: "record-id" }, row.record_id));
    for (const category of categories) {
      const value = row.by_category[category];
      const cell = el("td", { class: "heat-cell" });
      cell.dataset.record = row.record_id;
      cell.dataset.category = category;
      if (value !== undefined) {
        cell.dataset.value = value.toFixed(4);
        cell.style.backgroundColor = confidenceColor(value);
        cell.title = `${row.record_id} / ${category}: ${value.toFixed(3)}`;
      }
      cell.addEventListener("click", () =>
        handlers.onCell(row.record_id, category),
      );
      tr.appendChild(cell);
    }
    body.appendChild(tr);
  }
  table.appendChild(body);
  container.appendChild(table);
}

/** Text with the explanation's byte spans wrapped in signed marks. */
function highlightedText(
  text: string,
  highlights: ExplanationPayload["highlights"],
): DocumentFragment {
  const fragment = document.createDocumentFragment();
  const spans = [...highlights].sort((a, b) => a.start - b.start);
  let cursor = 0;
  for (const span of spans) {
    if (span.start < cursor) {
      continue;
    }
    if (span.start > cursor) {
      fragment.append(text.slice(cursor, span.start));
    }
    const mark = el(
      "span",
      { class: `hl hl-${span.sign}` },
      text.slice(span.start, span.end),
    );
    mark.dataset.token = span.token;
    fragment.append(mark);
    cursor = span.end;
  }
  if (cursor < text.length) {
    fragment.append(text.slice(cursor));
  }
  return fragment;
}

const MAX_LABEL_BARS = 5;

export function renderExplanation(
  container: HTMLElement,
  explanation: ExplanationPayload,
  recordText: string,
): void {
  container.textContent = "";
  container.appendChild(
    el(
      "h3",
      {},
      `${explanation.target_label} (${explanation.category}) ` +
        `p=${explanation.target_probability.toFixed(3)}`,
    ),
  );

  const labelList = el("div", { class: "label-bars" });
  for (const [label, p] of explanation.top_labels.slice(0, MAX_LABEL_BARS)) {
    const bar = el("div", { class: "bar" });
    bar.style.width = `${Math.round(p * 100)}%`;
    const row = el(
      "div",
      { class: "label-bar" },
      el("span", { class: "bar-name" }, label),
      bar,
      el("span", { class: "bar-value" }, p.toFixed(3)),
    );
    row.dataset.label = label;
    labelList.appendChild(row);
  }
  container.appendChild(labelList);

  const weights = explanation.contributions.map(([, w]) => Math.abs(w));
  const maxWeight = Math.max(...weights, 1e-12);
  const contribList = el("div", { class: "contributions" });
  for (const [token, weight] of explanation.contributions) {
    const sign = weight > 0 ? "positive" : weight < 0 ? "negative" : "none";
    const bar = el("div", { class: "bar" });
    bar.style.width = `${Math.round((Math.abs(weight) / maxWeight) * 100)}%`;
    const row = el(
      "div",
      { class: `contribution ${sign}` },
      el("span", { class: "bar-name" }, token),
      bar,
      el("span", { class: "bar-value" }, weight.toFixed(4)),
    );
    row.dataset.token = token;
    contribList.appendChild(row);
  }
  container.appendChild(contribList);

  const textPane = el("p", { class: "highlighted-text" });
  textPane.appendChild(highlightedText(recordText, explanation.highlights));
  container.appendChild(textPane);
}

export interface RelabelHandlers {
  onPropose(op: RelabelOpPayload): void;
  onRevert(opId: number): void;
  onApply(): void;
}

function option(value: string, selected: boolean): HTMLOptionElement {
  const node = el("option", { value }, value);
  node.selected = selected;
  return node;
}

function describeOp(entry: HistoryEntry): string {
  const scopeIds = entry.scope.record_ids ?? [];
  const scope =
    entry.scope.kind === "corpus"
      ? "corpus"
      : `${entry.scope.kind} (${scopeIds.length})`;
  switch (entry.kind) {
    case "remove":
      return `remove ${entry.label} @ ${scope}`;
    case "modify":
      return `modify ${entry.label} -> ${entry.new_label} @ ${scope}`;
    default:
      return `insert ${entry.new_label} [${entry.category}] @ ${scope}`;
  }
}

/** The relabel composer plus history.
 *
 * The scope dropdown arrives pre-set by whatever drove the current
 * selection (label click, lasso, checkboxes) but stays editable.
 */
export function renderRelabel(
  container: HTMLElement,
  scopeKind: ScopeKind,
  scopeIds: string[],
  history: HistoryEntry[],
  handlers: RelabelHandlers,
): void {
  container.textContent = "";

  const kindSelect = el("select", { class: "op-kind" }) as HTMLSelectElement;
  for (const kind of ["remove", "modify", "insert"]) {
    kindSelect.appendChild(option(kind, kind === "remove"));
  }
  const scopeSelect = el("select", { class: "op-scope" }) as HTMLSelectElement;
  for (const kind of ["corpus", "subgroup", "record"]) {
    scopeSelect.appendChild(option(kind, kind === scopeKind));
  }
  const labelInput = el("input", {
    class: "op-label",
    placeholder: "label",
  }) as HTMLInputElement;
  const newLabelInput = el("input", {
    class: "op-new-label",
    placeholder: "new label",
  }) as HTMLInputElement;
  const categoryInput = el("input", {
    class: "op-category",
    placeholder: "category",
  }) as HTMLInputElement;
  const noteInput = el("input", {
    class: "op-note",
    placeholder: "note",
  }) as HTMLInputElement;

  const proposeButton = el("button", { class: "propose" }, "Propose");
  proposeButton.addEventListener("click", () => {
    const kind = kindSelect.value as RelabelOpPayload["kind"];
    const scope =
      scopeSelect.value === "corpus"
        ? { kind: "corpus" as ScopeKind }
        : { kind: scopeSelect.value as ScopeKind, record_ids: scopeIds };
    const op: RelabelOpPayload = { kind, scope };
    if (labelInput.value) op.label = labelInput.value;
    if (newLabelInput.value) op.new_label = newLabelInput.value;
    if (categoryInput.value) op.category = categoryInput.value;
    if (noteInput.value) op.note = noteInput.value;
    handlers.onPropose(op);
  });

  const applyButton = el("button", { class: "apply" }, "Apply pending");
  applyButton.addEventListener("click", () => handlers.onApply());

  const scopeInfo = el(
    "span",
    { class: "scope-info" },
    scopeKind === "corpus"
      ? "whole corpus"
      : `${scopeIds.length} record(s) selected`,
  );

  container.appendChild(
    el(
      "div",
      { class: "relabel-form" },
      kindSelect,
      scopeSelect,
      scopeInfo,
      labelInput,
      newLabelInput,
      categoryInput,
      noteInput,
      proposeButton,
      applyButton,
    ),
  );

  const list = el("ul", { class: "history" });
  for (const entry of history) {
    const item = el(
      "li",
      { class: `history-entry status-${entry.status}` },
      `#${entry.op_id} ${describeOp(entry)} `,
      el("span", { class: "status" }, entry.status),
    );
    item.dataset.opId = String(entry.op_id);
    if (entry.status === "pending") {
      const revert = el("button", { class: "revert" }, "Revert");
      revert.addEventListener("click", () => handlers.onRevert(entry.op_id));
      item.appendChild(revert);
    }
    list.appendChild(item);
  }
  container.appendChild(list);
}

/** Single mutable app state with change notification.
 *
 * The UI never computes metrics: every number held here is a server
 * response field, kept verbatim alongside the snapshot version it came
 * from.
 */

import type {
  ConfidencePayload,
  DensityPayload,
  ExplanationPayload,
  HistoryEntry,
  LabelsTree,
  ProjectionPayload,
  RecordRow,
  ScopeKind,
  SnapshotStats,
} from "./types.js";

export type TabName = "inspect" | "categorize" | "explain" | "relabel";

export interface AppState {
  snapshotVersion: number;
  stats: SnapshotStats | null;
  tree: LabelsTree | null;
  expandedCategory: string | null;
  currentLabel: string | null;
  activeTab: TabName;
  rows: RecordRow[];
  rowsSource: string;
  checkedIds: Set<string>;
  lassoIds: string[];
  scopeKind: ScopeKind;
  projection: ProjectionPayload | null;
  colorMode: string;
  confidence: ConfidencePayload | null;
  density: DensityPayload | null;
  explanation: ExplanationPayload | null;
  history: HistoryEntry[];
  banner: string | null;
  inlineError: string | null;
  busy: boolean;
}

export function initialState(): AppState {
  return {
    snapshotVersion: 0,
    stats: null,
    tree: null,
    expandedCategory: null,
    currentLabel: null,
    activeTab: "inspect",
    rows: [],
    rowsSource: "all records",
    checkedIds: new Set(),
    lassoIds: [],
    scopeKind: "corpus",
    projection: null,
    colorMode: "confidence",
    confidence: null,
    density: null,
    explanation: null,
    history: [],
    banner: null,
    inlineError: null,
    busy: false,
  };
}

export class Store {
  readonly state: AppState = initialState();
  private readonly listeners: Array<(state: AppState) => void> = [];

  subscribe(listener: (state: AppState) => void): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<AppState>): void {
    Object.assign(this.state, patch);
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }
}

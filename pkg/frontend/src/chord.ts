/** Expanded category view: label arcs on a circle, co-occurring labels
 * connected with white chords whose width tracks the co-assignment count. */

import { chordPath, arcPath, angularLayout, type Arc } from "./geometry.js";
import type { CooccurrencePayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SIZE = 420;
const CENTER = SIZE / 2;
const RADIUS = 150;

export interface ChordHandlers {
  onLabel(name: string, category: string): void;
}

interface Pair {
  i: number;
  j: number;
  count: number;
}

function coPairs(counts: number[][]): Pair[] {
  const pairs: Pair[] = [];
  for (let i = 0; i < counts.length; i += 1) {
    for (let j = i + 1; j < counts.length; j += 1) {
      if (counts[i][j] > 0) {
        pairs.push({ i, j, count: counts[i][j] });
      }
    }
  }
  return pairs;
}

/** A sliver of label i's arc, deterministic per partner. */
function sliver(arc: Arc, rank: number, total: number): Arc {
  const span = arc.endAngle - arc.startAngle;
  const width = span / Math.max(total, 1);
  return {
    startAngle: arc.startAngle + rank * width,
    endAngle: arc.startAngle + (rank + 1) * width,
  };
}

export function renderChord(
  container: HTMLElement,
  payload: CooccurrencePayload,
  handlers: ChordHandlers,
): void {
  container.textContent = "";
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
  svg.setAttribute("class", "chord");

  const appearances = payload.labels.map((_, i) => payload.counts[i][i]);
  const arcs = angularLayout(appearances.map((n) => Math.max(n, 1)));

  const pairs = coPairs(payload.counts);
  const maxCount = pairs.reduce((m, p) => Math.max(m, p.count), 1);
  const partnerRank = payload.labels.map(() => 0);
  const partnerTotal = payload.labels.map(
    (_, i) => pairs.filter((p) => p.i === i || p.j === i).length,
  );

  for (const pair of pairs) {
    const a = sliver(arcs[pair.i], partnerRank[pair.i], partnerTotal[pair.i]);
    const b = sliver(arcs[pair.j], partnerRank[pair.j], partnerTotal[pair.j]);
    partnerRank[pair.i] += 1;
    partnerRank[pair.j] += 1;
    const ribbon = document.createElementNS(SVG_NS, "path");
    ribbon.setAttribute("d", chordPath(CENTER, CENTER, RADIUS - 4, a, b));
    ribbon.setAttribute("fill", "white");
    ribbon.setAttribute("fill-opacity", String(0.35 + 0.6 * (pair.count / maxCount)));
    ribbon.setAttribute("class", "chord-ribbon");
    ribbon.dataset.pair = `${payload.labels[pair.i]}|${payload.labels[pair.j]}`;
    ribbon.dataset.count = String(pair.count);
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${payload.labels[pair.i]} + ${payload.labels[pair.j]}: ${pair.count}`;
    ribbon.appendChild(title);
    svg.appendChild(ribbon);
  }

  payload.labels.forEach((label, i) => {
    const arc = arcs[i];
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute(
      "d",
      arcPath(CENTER, CENTER, RADIUS, RADIUS + 26, arc.startAngle, arc.endAngle),
    );
    path.setAttribute("fill", "rgb(90, 110, 140)");
    path.setAttribute("class", "chord-arc");
    path.dataset.label = label;
    path.dataset.appearances = String(payload.counts[i][i]);
    path.addEventListener("click", () => handlers.onLabel(label, payload.category));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${label}: ${payload.counts[i][i]} records`;
    path.appendChild(title);
    svg.appendChild(path);
  });

  container.appendChild(svg);
}

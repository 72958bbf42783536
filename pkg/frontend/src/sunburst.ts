/** Two-ring sunburst: categories inside (color = duplication score from the
 * server), labels outside (sector size = record count). */

import { duplicationColor } from "./color.js";
import { angularLayout, arcPath } from "./geometry.js";
import type { LabelsTree } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SIZE = 420;
const CENTER = SIZE / 2;

export interface SunburstHandlers {
  onCategory(name: string): void;
  onLabel(name: string, category: string): void;
}

export function renderSunburst(
  container: HTMLElement,
  tree: LabelsTree,
  handlers: SunburstHandlers,
): void {
  container.textContent = "";
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
  svg.setAttribute("class", "sunburst");

  const categories = tree.categories;
  // Category sector size follows its record-count total so the outer ring
  // nests exactly inside it; empty categories keep a clickable zero span.
  const totals = categories.map((c) =>
    c.labels.reduce((s, l) => s + l.count, 0),
  );
  const categoryArcs = angularLayout(totals);

  categories.forEach((category, i) => {
    const arc = categoryArcs[i];
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", arcPath(CENTER, CENTER, 60, 130, arc.startAngle, arc.endAngle));
    path.setAttribute("fill", duplicationColor(category.duplication_score));
    path.setAttribute("class", "category-arc");
    path.dataset.category = category.name;
    path.dataset.duplication = String(category.duplication_score);
    path.addEventListener("click", () => handlers.onCategory(category.name));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${category.name} (duplication ${category.duplication_score.toFixed(3)})`;
    path.appendChild(title);
    svg.appendChild(path);

    const span = arc.endAngle - arc.startAngle;
    const weights = category.labels.map((l) => l.count);
    const labelTotal = weights.reduce((s, w) => s + w, 0);
    let angle = arc.startAngle;
    category.labels.forEach((label) => {
      const fraction = labelTotal > 0 ? label.count / labelTotal : 0;
      const sweep = span * fraction;
      const leaf = document.createElementNS(SVG_NS, "path");
      leaf.setAttribute("d", arcPath(CENTER, CENTER, 134, 190, angle, angle + sweep));
      leaf.setAttribute("fill", duplicationColor(category.duplication_score));
      leaf.setAttribute("fill-opacity", "0.55");
      leaf.setAttribute("class", "label-arc");
      leaf.dataset.label = label.name;
      leaf.dataset.category = category.name;
      leaf.dataset.count = String(label.count);
      leaf.addEventListener("click", () => handlers.onLabel(label.name, category.name));
      const leafTitle = document.createElementNS(SVG_NS, "title");
      leafTitle.textContent = `${label.name}: ${label.count} records`;
      leaf.appendChild(leafTitle);
      svg.appendChild(leaf);
      angle += sweep;
    });
  });

  container.appendChild(svg);
}

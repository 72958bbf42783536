/** Projection scatter with lasso selection.
 *
 * Layout is fixed by the server payload; color is a presentation of the
 * per-point channel the server sent. Re-coloring never moves points. The
 * lasso polygon is converted back to projection data coordinates before
 * the caller posts it, because selection is server-authoritative.
 */

import { pointColor } from "./color.js";
import { dataBounds, polygonPath, Viewport } from "./geometry.js";
import type { ProjectionPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const WIDTH = 520;
export const HEIGHT = 420;

export interface ScatterHandlers {
  onLasso(polygon: [number, number][]): void;
}

export class Scatter {
  private readonly svg: SVGSVGElement;
  private readonly viewport: Viewport;
  private readonly dots = new Map<string, SVGCircleElement>();
  private readonly colorMin: number;
  private readonly colorMax: number;
  private lassoPixels: [number, number][] = [];
  private lassoPreview: SVGPathElement | null = null;
  private drawing = false;

  constructor(
    container: HTMLElement,
    private readonly payload: ProjectionPayload,
    colorMode: string,
    private readonly handlers: ScatterHandlers,
  ) {
    container.textContent = "";
    if (payload.subsampled) {
      const notice = document.createElement("p");
      notice.className = "subsample-notice";
      notice.textContent =
        `Showing a seeded sample of ${payload.points.length} points ` +
        `(max_points=${payload.config.max_points}).`;
      container.appendChild(notice);
    }

    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    this.svg.setAttribute("class", "scatter");
    this.viewport = new Viewport(dataBounds(payload.points), WIDTH, HEIGHT);

    const finite = payload.points
      .map((p) => p.color)
      .filter((c): c is number => c !== null && Number.isFinite(c));
    this.colorMin = finite.length ? Math.min(...finite) : 0;
    this.colorMax = finite.length ? Math.max(...finite) : 1;

    for (const point of payload.points) {
      const [px, py] = this.viewport.toPixel(point.x, point.y);
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(px));
      dot.setAttribute("cy", String(py));
      dot.setAttribute("r", "3");
      dot.setAttribute("class", "point");
      dot.dataset.id = point.id;
      this.dots.set(point.id, dot);
      this.svg.appendChild(dot);
    }
    this.recolor(colorMode);

    this.svg.addEventListener("mousedown", (e) => this.beginLasso(e));
    this.svg.addEventListener("mousemove", (e) => this.extendLasso(e));
    this.svg.addEventListener("mouseup", () => this.finishLasso());
    container.appendChild(this.svg);
  }

  /** Repaint fills only; positions are untouched. */
  recolor(mode: string): void {
    for (const point of this.payload.points) {
      const dot = this.dots.get(point.id);
      if (dot) {
        dot.setAttribute(
          "fill",
          pointColor(point.color, mode, this.colorMin, this.colorMax),
        );
      }
    }
  }

  markSelected(ids: Set<string>): void {
    for (const [id, dot] of this.dots) {
      dot.classList.toggle("selected", ids.has(id));
    }
  }

  private pixelOf(event: MouseEvent): [number, number] {
    const rect = this.svg.getBoundingClientRect();
    let px = event.clientX - rect.left;
    let py = event.clientY - rect.top;
    if (rect.width > 0 && rect.height > 0) {
      px *= WIDTH / rect.width;
      py *= HEIGHT / rect.height;
    }
    return [px, py];
  }

  private beginLasso(event: MouseEvent): void {
    this.drawing = true;
    this.lassoPixels = [this.pixelOf(event)];
    this.lassoPreview = document.createElementNS(SVG_NS, "path");
    this.lassoPreview.setAttribute("class", "lasso");
    this.lassoPreview.setAttribute("fill", "none");
    this.lassoPreview.setAttribute("stroke", "rgb(60, 60, 60)");
    this.lassoPreview.setAttribute("stroke-dasharray", "4 3");
    this.svg.appendChild(this.lassoPreview);
  }

  private extendLasso(event: MouseEvent): void {
    if (!this.drawing || !this.lassoPreview) {
      return;
    }
    this.lassoPixels.push(this.pixelOf(event));
    this.lassoPreview.setAttribute("d", polygonPath(this.lassoPixels));
  }

  private finishLasso(): void {
    if (!this.drawing) {
      return;
    }
    this.drawing = false;
    this.lassoPreview?.remove();
    this.lassoPreview = null;
    if (this.lassoPixels.length < 3) {
      return;
    }
    const polygon = this.lassoPixels.map(
      ([px, py]) => this.viewport.toData(px, py),
    );
    this.handlers.onLasso(polygon);
  }
}

/** Pure SVG path helpers shared by the sunburst, chord, and scatter views. */

export interface Arc {
  startAngle: number; // radians, 0 points up, clockwise positive
  endAngle: number;
}

const TAU = Math.PI * 2;

export function polar(cx: number, cy: number, r: number, angle: number): [number, number] {
  // Angle 0 at 12 o'clock, increasing clockwise.
  return [cx + r * Math.sin(angle), cy - r * Math.cos(angle)];
}

/** Annular sector path between radii r0 < r1 over [a0, a1]. */
export function arcPath(
  cx: number,
  cy: number,
  r0: number,
  r1: number,
  a0: number,
  a1: number,
): string {
  const sweep = Math.min(Math.max(a1 - a0, 0), TAU - 1e-6);
  const large = sweep > Math.PI ? 1 : 0;
  const [x0, y0] = polar(cx, cy, r1, a0);
  const [x1, y1] = polar(cx, cy, r1, a0 + sweep);
  const [x2, y2] = polar(cx, cy, r0, a0 + sweep);
  const [x3, y3] = polar(cx, cy, r0, a0);
  return (
    `M ${x0} ${y0} ` +
    `A ${r1} ${r1} 0 ${large} 1 ${x1} ${y1} ` +
    `L ${x2} ${y2} ` +
    `A ${r0} ${r0} 0 ${large} 0 ${x3} ${y3} Z`
  );
}

/** Ribbon between two arcs on one circle, bowed through the center. */
export function chordPath(
  cx: number,
  cy: number,
  r: number,
  a: Arc,
  b: Arc,
): string {
  const [ax0, ay0] = polar(cx, cy, r, a.startAngle);
  const [ax1, ay1] = polar(cx, cy, r, a.endAngle);
  const [bx0, by0] = polar(cx, cy, r, b.startAngle);
  const [bx1, by1] = polar(cx, cy, r, b.endAngle);
  const largeA = a.endAngle - a.startAngle > Math.PI ? 1 : 0;
  const largeB = b.endAngle - b.startAngle > Math.PI ? 1 : 0;
  return (
    `M ${ax0} ${ay0} ` +
    `A ${r} ${r} 0 ${largeA} 1 ${ax1} ${ay1} ` +
    `Q ${cx} ${cy} ${bx0} ${by0} ` +
    `A ${r} ${r} 0 ${largeB} 1 ${bx1} ${by1} ` +
    `Q ${cx} ${cy} ${ax0} ${ay0} Z`
  );
}

export function polygonPath(points: [number, number][]): string {
  if (points.length === 0) {
    return "";
  }
  const [head, ...rest] = points;
  return (
    `M ${head[0]} ${head[1]} ` +
    rest.map(([x, y]) => `L ${x} ${y}`).join(" ") +
    " Z"
  );
}

export interface Bounds {
  minX: number;
  maxX: number;
  minY: number;
  maxY: number;
}

export function dataBounds(points: { x: number; y: number }[]): Bounds {
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const p of points) {
    minX = Math.min(minX, p.x);
    maxX = Math.max(maxX, p.x);
    minY = Math.min(minY, p.y);
    maxY = Math.max(maxY, p.y);
  }
  if (!Number.isFinite(minX)) {
    return { minX: 0, maxX: 1, minY: 0, maxY: 1 };
  }
  if (minX === maxX) {
    maxX = minX + 1;
  }
  if (minY === maxY) {
    maxY = minY + 1;
  }
  return { minX, maxX, minY, maxY };
}

/** Affine map between projection data space and a padded pixel viewport. */
export class Viewport {
  constructor(
    private readonly bounds: Bounds,
    readonly width: number,
    readonly height: number,
    private readonly pad: number = 16,
  ) {}

  toPixel(x: number, y: number): [number, number] {
    const { minX, maxX, minY, maxY } = this.bounds;
    const px = this.pad + ((x - minX) / (maxX - minX)) * (this.width - 2 * this.pad);
    const py = this.pad + ((y - minY) / (maxY - minY)) * (this.height - 2 * this.pad);
    return [px, py];
  }

  toData(px: number, py: number): [number, number] {
    const { minX, maxX, minY, maxY } = this.bounds;
    const x = minX + ((px - this.pad) / (this.width - 2 * this.pad)) * (maxX - minX);
    const y = minY + ((py - this.pad) / (this.height - 2 * this.pad)) * (maxY - minY);
    return [x, y];
  }
}

/** Proportional angular layout: one arc per weight, in order, over the circle. */
export function angularLayout(weights: number[], gap = 0.02): Arc[] {
  const total = weights.reduce((s, w) => s + w, 0);
  const usable = TAU - gap * weights.length;
  const arcs: Arc[] = [];
  let angle = 0;
  for (const w of weights) {
    const span = total > 0 ? (w / total) * usable : 0;
    arcs.push({ startAngle: angle, endAngle: angle + span });
    angle += span + gap;
  }
  return arcs;
}

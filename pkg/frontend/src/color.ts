/** Presentation-only color scales. Values always come from the server. */

function channel(a: number, b: number, t: number): number {
  return Math.round(a + (b - a) * t);
}

function lerp(from: [number, number, number], to: [number, number, number], t: number): string {
  const k = Math.min(1, Math.max(0, t));
  return `rgb(${channel(from[0], to[0], k)}, ${channel(from[1], to[1], k)}, ${channel(from[2], to[2], k)})`;
}

/** Duplication score in [0, 1]: slate gray up to hot red. */
export function duplicationColor(score: number): string {
  return lerp([86, 98, 112], [227, 66, 52], score);
}

/** Calibrated confidence in [0, 1]: amber (uncertain) to teal (confident). */
export function confidenceColor(value: number): string {
  return lerp([230, 160, 30], [26, 140, 130], value);
}

/** Density after the server's sentinel mapping, normalized to [0, 1]. */
export function densityColor(value: number, min: number, max: number): string {
  const t = max > min ? (value - min) / (max - min) : 0.5;
  return lerp([68, 58, 130], [120, 198, 120], t);
}

/** Normalize a projection color channel; nulls render neutral. */
export function pointColor(
  value: number | null,
  mode: string,
  min: number,
  max: number,
): string {
  if (value === null || Number.isNaN(value)) {
    return "rgb(150, 150, 150)";
  }
  if (mode === "confidence") {
    return confidenceColor(value);
  }
  return densityColor(value, min, max);
}

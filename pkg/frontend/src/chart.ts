/**
 * Line-chart rendering of the reconstructed session trace as inline SVG.
 * The point mapping is a pure function so it can be checked directly.
 */

export interface ChartGeom {
  width: number;
  height: number;
  pad: number;
}

export const DEFAULT_GEOM: ChartGeom = { width: 640, height: 200, pad: 10 };

/**
 * Map samples to SVG polyline coordinates: x spreads indices across the
 * padded width, y maps [min, max] to [bottom, top]. A constant trace is
 * drawn as a centered horizontal line.
 */
export function polylinePoints(samples: number[], geom: ChartGeom = DEFAULT_GEOM): string {
  const n = samples.length;
  if (n === 0) return "";
  const { width, height, pad } = geom;
  const lo = Math.min(...samples);
  const hi = Math.max(...samples);
  const span = hi - lo;
  const xStep = n > 1 ? (width - 2 * pad) / (n - 1) : 0;
  const points = samples.map((v, i) => {
    const x = pad + i * xStep;
    const y = span > 0 ? height - pad - ((v - lo) / span) * (height - 2 * pad) : height / 2;
    return `${round2(x)},${round2(y)}`;
  });
  return points.join(" ");
}

function round2(x: number): number {
  return Math.round(x * 100) / 100;
}

export function chartSvg(samples: number[], rateHz: number, geom: ChartGeom = DEFAULT_GEOM): string {
  const { width, height, pad } = geom;
  const duration = samples.length > 0 ? (samples.length - 1) / rateHz : 0;
  const axisY = height - pad;
  return [
    `<svg class="chart" viewBox="0 0 ${width} ${height}" role="img" aria-label="reconstructed trace">`,
    `<line class="axis" x1="${pad}" y1="${axisY}" x2="${width - pad}" y2="${axisY}"></line>`,
    `<polyline class="trace" fill="none" points="${polylinePoints(samples, geom)}"></polyline>`,
    `<text class="tick" x="${pad}" y="${height - 1}">0 s</text>`,
    `<text class="tick" x="${width - pad}" y="${height - 1}" text-anchor="end">${round2(duration)} s</text>`,
    `</svg>`,
  ].join("");
}

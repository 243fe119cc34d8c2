import type { ForecastResponse, GroupingResponse } from "./types.js";

/**
 * Chart-data mappers.  Every series placed on a chart is carried through
 * these functions verbatim - the client never recomputes decomposition
 * numbers, it only scales them to pixels at draw time.
 */

export interface ChartSeries {
  name: string;
  values: number[];
  /** 1-based sample index of the first value. */
  start: number;
}

export interface HeatmapCell {
  row: number;
  col: number;
  value: number;
  fill: string;
}

/** Grayscale for |w| in [0, 1]: 0 maps to white, 1 to black. */
export function grayscale(value: number): string {
  const clipped = Math.min(1, Math.max(0, Math.abs(value)));
  const channel = Math.round(255 * (1 - clipped));
  return `rgb(${channel},${channel},${channel})`;
}

export function heatmapCells(values: number[][]): HeatmapCell[] {
  const cells: HeatmapCell[] = [];
  values.forEach((rowValues, row) => {
    rowValues.forEach((value, col) => {
      cells.push({ row, col, value, fill: grayscale(value) });
    });
  });
  return cells;
}

/** The reconstruction panel plots the server's series untouched. */
export function reconstructionChartData(response: GroupingResponse): ChartSeries[] {
  const series: ChartSeries[] = Object.entries(response.groups).map(([name, values]) => ({
    name,
    values,
    start: 1,
  }));
  series.push({ name: "residual", values: response.residual, start: 1 });
  return series;
}

/** Forecast panel: fitted signal, then the horizon beyond the series end. */
export function forecastChartData(response: ForecastResponse): {
  fitted: ChartSeries;
  horizon: ChartSeries;
  lower?: ChartSeries;
  upper?: ChartSeries;
} {
  const n = response.fitted.length;
  const out: ReturnType<typeof forecastChartData> = {
    fitted: { name: `${response.group} (fitted)`, values: response.fitted, start: 1 },
    horizon: { name: `${response.group} (forecast)`, values: response.values, start: n + 1 },
  };
  if (response.lower && response.upper) {
    out.lower = { name: "lower", values: response.lower, start: n + 1 };
    out.upper = { name: "upper", values: response.upper, start: n + 1 };
  }
  return out;
}

export interface Extent {
  min: number;
  max: number;
}

export function extentOf(seriesList: Array<ArrayLike<number>>): Extent {
  let min = Infinity;
  let max = -Infinity;
  for (const values of seriesList) {
    for (let i = 0; i < values.length; i++) {
      const v = values[i];
      if (v < min) min = v;
      if (v > max) max = v;
    }
  }
  if (!isFinite(min)) return { min: 0, max: 1 };
  if (min === max) return { min: min - 1, max: max + 1 };
  return { min, max };
}

function scaleY(value: number, ext: Extent, height: number): number {
  return height - ((value - ext.min) / (ext.max - ext.min)) * height;
}

/** SVG path for a series inside a fixed index range [first, last]. */
export function linePath(
  series: ChartSeries,
  ext: Extent,
  width: number,
  height: number,
  first: number,
  last: number,
): string {
  const span = Math.max(1, last - first);
  const pieces: string[] = [];
  series.values.forEach((value, i) => {
    const x = ((series.start + i - first) / span) * width;
    const y = scaleY(value, ext, height);
    pieces.push(`${pieces.length === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`);
  });
  return pieces.join(" ");
}

/** Closed SVG path for the region between two aligned series. */
export function bandPath(
  lower: ChartSeries,
  upper: ChartSeries,
  ext: Extent,
  width: number,
  height: number,
  first: number,
  last: number,
): string {
  const span = Math.max(1, last - first);
  const xAt = (start: number, i: number) => (((start + i - first) / span) * width).toFixed(2);
  const forward = upper.values.map(
    (v, i) => `${i === 0 ? "M" : "L"}${xAt(upper.start, i)},${scaleY(v, ext, height).toFixed(2)}`,
  );
  const backward = [...lower.values]
    .map((v, i) => ({ v, i }))
    .reverse()
    .map(({ v, i }) => `L${xAt(lower.start, i)},${scaleY(v, ext, height).toFixed(2)}`);
  return [...forward, ...backward, "Z"].join(" ");
}

export function scatterPoints(
  a: number[],
  b: number[],
  size: number,
): Array<{ x: number; y: number }> {
  const ext = extentOf([a, b]);
  const scale = (v: number) => ((v - ext.min) / (ext.max - ext.min)) * size;
  return a.map((value, i) => ({ x: scale(value), y: size - scale(b[i]) }));
}

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
];

export function seriesColor(position: number, name?: string): string {
  if (name === "residual") return "#bbbbbb";
  return PALETTE[position % PALETTE.length];
}

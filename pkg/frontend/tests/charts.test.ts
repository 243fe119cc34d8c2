import { describe, expect, it } from "vitest";
import {
  bandPath,
  extentOf,
  forecastChartData,
  grayscale,
  heatmapCells,
  linePath,
  reconstructionChartData,
  scatterPoints,
  seriesColor,
} from "../src/charts.js";

describe("grayscale mapping", () => {
  it("maps 0 to white and 1 to black", () => {
    expect(grayscale(0)).toBe("rgb(255,255,255)");
    expect(grayscale(1)).toBe("rgb(0,0,0)");
  });

  it("uses |value| and clips outside [0, 1]", () => {
    expect(grayscale(-1)).toBe("rgb(0,0,0)");
    expect(grayscale(1.7)).toBe("rgb(0,0,0)");
    expect(grayscale(0.5)).toBe("rgb(128,128,128)");
  });
});

describe("heatmap cells", () => {
  it("lays out the matrix row-major with grayscale fills", () => {
    const cells = heatmapCells([
      [1, 0],
      [0.25, -0.5],
    ]);
    expect(cells).toHaveLength(4);
    expect(cells[0]).toMatchObject({ row: 0, col: 0, fill: "rgb(0,0,0)" });
    expect(cells[1]).toMatchObject({ row: 0, col: 1, fill: "rgb(255,255,255)" });
    expect(cells[3].fill).toBe(grayscale(0.5));
  });
});

describe("chart data pass-through", () => {
  it("reconstruction series carry the server arrays verbatim", () => {
    const response = {
      groups: { trend: [1.5, 2.5], season: [0.25, -0.25] },
      residual: [0.01, -0.01],
      wcor: { order: ["trend", "season", "residual"], values: [] as number[][] },
    };
    const series = reconstructionChartData(response);
    expect(series.map((s) => s.name)).toEqual(["trend", "season", "residual"]);
    expect(series[0].values).toBe(response.groups.trend); // same array, no copy
    expect(series[2].values).toBe(response.residual);
  });

  it("forecast horizon starts one sample past the fitted signal", () => {
    const data = forecastChartData({
      group: "g",
      method: "recurrent",
      fitted: [1, 2, 3, 4],
      values: [5, 6],
      lower: [4.5, 5.5],
      upper: [5.5, 6.5],
    });
    expect(data.fitted.start).toBe(1);
    expect(data.horizon.start).toBe(5);
    expect(data.lower?.start).toBe(5);
    expect(data.horizon.values).toEqual([5, 6]);
  });
});

describe("geometry helpers", () => {
  it("computes extents with degenerate guards", () => {
    expect(extentOf([[2, -1, 4]])).toEqual({ min: -1, max: 4 });
    expect(extentOf([[3, 3]])).toEqual({ min: 2, max: 4 });
    expect(extentOf([[]])).toEqual({ min: 0, max: 1 });
  });

  it("builds line paths spanning the index range", () => {
    const d = linePath({ name: "s", values: [0, 1], start: 1 }, { min: 0, max: 1 }, 100, 50, 1, 2);
    expect(d).toBe("M0.00,50.00 L100.00,0.00");
  });

  it("closes the interval band polygon", () => {
    const ext = { min: 0, max: 1 };
    const lower = { name: "lo", values: [0, 0], start: 1 };
    const upper = { name: "hi", values: [1, 1], start: 1 };
    const d = bandPath(lower, upper, ext, 100, 50, 1, 2);
    expect(d.startsWith("M")).toBe(true);
    expect(d.endsWith("Z")).toBe(true);
    expect(d.match(/L/g)?.length).toBe(3);
  });

  it("scales scatter points into the box", () => {
    const points = scatterPoints([0, 1], [0, 1], 100);
    expect(points[0]).toEqual({ x: 0, y: 100 });
    expect(points[1]).toEqual({ x: 100, y: 0 });
  });

  it("keeps the residual gray and cycles the palette", () => {
    expect(seriesColor(3, "residual")).toBe("#bbbbbb");
    expect(seriesColor(0)).not.toBe(seriesColor(1));
  });
});

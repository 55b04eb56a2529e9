/**
 * Pure plot-model construction: extracts series from a dataset according to a
 * panel specification, computes padded axis ranges, tick positions, and the
 * data-to-pixel transforms. Rendering backends (SVG, PNG) consume the model.
 */

import { Dataset, columnIndex, distinctValues } from "./csv.js";
import { PANEL } from "./style.js";

export type Scale = "linear" | "log";

export interface PanelSpec {
  name: string;
  csv: string;
  title: string;
  xColumn: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  /** column whose distinct values split the rows into curves ("" = single) */
  groupBy: string;
  /** analytic columns drawn as lines; suffix distinguishes legend entries */
  lines: { column: string; suffix: string }[];
  /** Monte Carlo estimate drawn as markers with error bars */
  markers?: { column: string; errorColumn?: string; suffix: string };
}

export interface Series {
  label: string;
  kind: "line" | "markers";
  colorIndex: number;
  dashIndex: number;
  x: number[];
  y: number[];
  yerr: (number | null)[];
}

export interface Axis {
  scale: Scale;
  min: number;
  max: number;
  ticks: number[];
  label: string;
}

export interface PlotModel {
  title: string;
  x: Axis;
  y: Axis;
  series: Series[];
  skippedRows: number;
}

export function niceTicks(min: number, max: number, target = 6): number[] {
  if (!(max > min)) return [min];
  const span = max - min;
  const step0 = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= step0) {
      step = mag * m;
      break;
    }
  }
  const ticks: number[] = [];
  for (let t = Math.ceil(min / step) * step; t <= max + 1e-12 * span; t += step) {
    ticks.push(Math.abs(t) < 1e-12 * span ? 0 : t);
  }
  return ticks;
}

export function logTicks(min: number, max: number): number[] {
  const lo = Math.ceil(Math.log10(min) - 1e-9);
  const hi = Math.floor(Math.log10(max) + 1e-9);
  const ticks: number[] = [];
  for (let k = lo; k <= hi; k++) ticks.push(Math.pow(10, k));
  if (ticks.length === 0) ticks.push(min, max);
  return ticks;
}

function paddedRange(values: number[], scale: Scale): [number, number] {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (scale === "log" && v <= 0) continue;
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (!Number.isFinite(min)) {
    min = scale === "log" ? 0.1 : 0;
    max = 1;
  }
  if (min === max) {
    min = scale === "log" ? min / 2 : min - 0.5;
    max = scale === "log" ? max * 2 : max + 0.5;
  }
  const pad = PANEL.padFraction;
  if (scale === "log") {
    const span = Math.log10(max / min);
    return [Math.pow(10, Math.log10(min) - pad * span), Math.pow(10, Math.log10(max) + pad * span)];
  }
  const span = max - min;
  return [min - pad * span, max + pad * span];
}

function axis(values: number[], scale: Scale, label: string): Axis {
  const [min, max] = paddedRange(values, scale);
  return {
    scale,
    min,
    max,
    ticks: scale === "log" ? logTicks(min, max) : niceTicks(min, max),
    label,
  };
}

export function buildModel(spec: PanelSpec, data: Dataset, file: string): PlotModel {
  const xIdx = columnIndex(data, spec.xColumn, file);
  const groups = spec.groupBy
    ? distinctValues(data, spec.groupBy, file)
    : [null];
  const groupIdx = spec.groupBy ? columnIndex(data, spec.groupBy, file) : -1;

  const series: Series[] = [];
  let skipped = 0;
  const xsAll: number[] = [];
  const ysAll: number[] = [];

  groups.forEach((group, gi) => {
    const rows = data.rows.filter((row) => groupIdx < 0 || row[groupIdx] === group);
    const base = group === null || group === "" ? "" : String(group);
    for (let li = 0; li < spec.lines.length; li++) {
      const lineSpec = spec.lines[li];
      const colIdx = columnIndex(data, lineSpec.column, file);
      const xs: number[] = [];
      const ys: number[] = [];
      for (const row of rows) {
        const x = row[xIdx];
        const y = row[colIdx];
        if (typeof x !== "number" || typeof y !== "number") {
          skipped += 1;
          continue;
        }
        xs.push(x);
        ys.push(y);
      }
      if (xs.length === 0) continue;
      series.push({
        label: [base, lineSpec.suffix].filter(Boolean).join(" "),
        kind: "line",
        colorIndex: gi,
        dashIndex: li,
        x: xs,
        y: ys,
        yerr: xs.map(() => null),
      });
      xsAll.push(...xs);
      ysAll.push(...ys);
    }
    if (spec.markers) {
      const colIdx = columnIndex(data, spec.markers.column, file);
      const errIdx =
        spec.markers.errorColumn !== undefined
          ? columnIndex(data, spec.markers.errorColumn, file)
          : -1;
      const xs: number[] = [];
      const ys: number[] = [];
      const errs: (number | null)[] = [];
      for (const row of rows) {
        const x = row[xIdx];
        const y = row[colIdx];
        if (typeof x !== "number" || typeof y !== "number") {
          skipped += 1;
          continue;
        }
        xs.push(x);
        ys.push(y);
        const e = errIdx >= 0 ? row[errIdx] : null;
        errs.push(typeof e === "number" ? e : null);
      }
      if (xs.length > 0) {
        series.push({
          label: [base, spec.markers.suffix].filter(Boolean).join(" "),
          kind: "markers",
          colorIndex: gi,
          dashIndex: 0,
          x: xs,
          y: ys,
          yerr: errs,
        });
        xsAll.push(...xs);
        ysAll.push(...ys);
      }
    }
  });

  return {
    title: spec.title,
    x: axis(xsAll, spec.xScale, spec.xLabel),
    y: axis(ysAll, spec.yScale, spec.yLabel),
    series,
    skippedRows: skipped,
  };
}

export interface Transform {
  toX(v: number): number;
  toY(v: number): number;
  plotLeft: number;
  plotTop: number;
  plotWidth: number;
  plotHeight: number;
}

export function transform(model: PlotModel): Transform {
  const plotLeft = PANEL.marginLeft;
  const plotTop = PANEL.marginTop;
  const plotWidth = PANEL.width - PANEL.marginLeft - PANEL.marginRight;
  const plotHeight = PANEL.height - PANEL.marginTop - PANEL.marginBottom;
  const fx = (v: number): number => {
    const { min, max, scale } = model.x;
    const t =
      scale === "log"
        ? (Math.log10(v) - Math.log10(min)) / (Math.log10(max) - Math.log10(min))
        : (v - min) / (max - min);
    return plotLeft + t * plotWidth;
  };
  const fy = (v: number): number => {
    const { min, max, scale } = model.y;
    const t =
      scale === "log"
        ? (Math.log10(v) - Math.log10(min)) / (Math.log10(max) - Math.log10(min))
        : (v - min) / (max - min);
    return plotTop + (1 - t) * plotHeight;
  };
  return { toX: fx, toY: fy, plotLeft, plotTop, plotWidth, plotHeight };
}

export function formatTick(value: number, scale: Scale): string {
  if (scale === "log") {
    const exp = Math.round(Math.log10(value));
    if (exp >= -3 && exp <= 3) return String(Math.pow(10, exp));
    return `1e${exp}`;
  }
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) return value.toExponential(1).replace("e+", "e");
  return String(Number(value.toPrecision(6)));
}

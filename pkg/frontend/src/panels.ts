/**
 * The six shipped panel specifications, keyed by dataset name. Titles and
 * labels describe the quantities; the dataset files carry the parameters.
 */

import { PanelSpec } from "./plot.js";

const LT_LINES = [
  { column: "lt_analytic_l1", suffix: "theory (1 term)" },
  { column: "lt_analytic_l3", suffix: "theory (3 terms)" },
];
const LT_MARKERS = { column: "lt_mc", errorColumn: "lt_mc_ci95", suffix: "simulation" };

const COVERAGE_LINES = [{ column: "coverage_analytic", suffix: "theory" }];
const COVERAGE_MARKERS = {
  column: "coverage_mc",
  errorColumn: "coverage_mc_ci95",
  suffix: "simulation",
};

export const PANELS: Record<string, PanelSpec> = {
  fig1a: {
    name: "fig1a",
    csv: "fig1a.csv",
    title: "Interference Laplace transform vs deployment intensity",
    xColumn: "s",
    xLabel: "transform variable s (1/W)",
    yLabel: "E[exp(-s I)]",
    xScale: "log",
    yScale: "linear",
    groupBy: "curve",
    lines: LT_LINES,
    markers: LT_MARKERS,
  },
  fig1b: {
    name: "fig1b",
    csv: "fig1b.csv",
    title: "Interference Laplace transform vs absorption",
    xColumn: "s",
    xLabel: "transform variable s (1/W)",
    yLabel: "E[exp(-s I)]",
    xScale: "log",
    yScale: "linear",
    groupBy: "curve",
    lines: LT_LINES,
    markers: LT_MARKERS,
  },
  fig1c: {
    name: "fig1c",
    csv: "fig1c.csv",
    title: "THz-only rate coverage",
    xColumn: "x",
    xLabel: "SINR threshold (linear)",
    yLabel: "coverage probability",
    xScale: "log",
    yScale: "linear",
    groupBy: "curve",
    lines: COVERAGE_LINES,
    markers: COVERAGE_MARKERS,
  },
  fig2a: {
    name: "fig2a",
    csv: "fig2a.csv",
    title: "THz association probability",
    xColumn: "lambda_t",
    xLabel: "THz BS intensity (1/m^2)",
    yLabel: "association probability",
    xScale: "log",
    yScale: "linear",
    groupBy: "curve",
    lines: [{ column: "p_assoc_quadrature", suffix: "theory" }],
    markers: {
      column: "p_assoc_mc",
      errorColumn: "p_assoc_mc_ci95",
      suffix: "simulation",
    },
  },
  fig2b: {
    name: "fig2b",
    csv: "fig2b.csv",
    title: "Coexisting-network coverage, unit bias",
    xColumn: "x",
    xLabel: "SINR threshold (linear)",
    yLabel: "coverage probability",
    xScale: "log",
    yScale: "linear",
    groupBy: "curve",
    lines: COVERAGE_LINES,
    markers: COVERAGE_MARKERS,
  },
  fig2c: {
    name: "fig2c",
    csv: "fig2c.csv",
    title: "Network-mode comparison",
    xColumn: "x",
    xLabel: "SINR threshold (linear)",
    yLabel: "coverage probability",
    xScale: "log",
    yScale: "linear",
    groupBy: "curve",
    lines: COVERAGE_LINES,
    markers: COVERAGE_MARKERS,
  },
};

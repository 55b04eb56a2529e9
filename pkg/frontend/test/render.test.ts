import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterEach, describe, expect, it } from "vitest";
import { parseDataset } from "../src/csv.js";
import { PANELS } from "../src/panels.js";
import { buildModel, formatTick, logTicks, niceTicks } from "../src/plot.js";
import { renderPng } from "../src/png.js";
import { renderAll, renderPanel } from "../src/render.js";
import { renderSvg } from "../src/svg.js";
import {
  COVERAGE_CSV,
  EMPTY_CELL_CSV,
  LT_CSV,
  SINGLE_ROW_CSV,
} from "./fixtures.js";

const cleanups: string[] = [];
afterEach(() => {
  while (cleanups.length) rmSync(cleanups.pop()!, { recursive: true, force: true });
});

function tempDir(): string {
  const dir = mkdtempSync(join(tmpdir(), "figtest-"));
  cleanups.push(dir);
  return dir;
}

function writeManifest(dir: string, names: string[]): string {
  const manifest = {
    tool: "thzgeo",
    version: "0.1.0",
    figures: names.map((name) => ({ name, command: "coverage", output: `${name}.csv` })),
  };
  const path = join(dir, "manifest.json");
  writeFileSync(path, JSON.stringify(manifest));
  return path;
}

const ALL = ["fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c"];

function writeFixtureCsvs(dir: string, names = ALL): void {
  for (const name of names) {
    const text = name.startsWith("fig1a") || name.startsWith("fig1b")
      ? LT_CSV
      : name === "fig2a"
        ? EMPTY_CELL_CSV
        : COVERAGE_CSV;
    writeFileSync(join(dir, `${name}.csv`), text);
  }
}

describe("axis math", () => {
  it("nice linear ticks", () => {
    expect(niceTicks(0, 1)).toEqual([0, 0.2, 0.4, 0.6000000000000001, 0.8, 1]);
    expect(niceTicks(0.13, 0.87).length).toBeGreaterThan(2);
  });

  it("log ticks cover the decades", () => {
    expect(logTicks(5, 2000)).toEqual([10, 100, 1000]);
  });

  it("tick formatting", () => {
    expect(formatTick(100, "log")).toBe("100");
    expect(formatTick(1e9, "log")).toBe("1e9");
    expect(formatTick(0.5, "linear")).toBe("0.5");
  });
});

describe("buildModel", () => {
  it("splits curves and pairs lines with markers", () => {
    const data = parseDataset(COVERAGE_CSV, "cov.csv");
    const model = buildModel(PANELS.fig1c, data, "cov.csv");
    // two curves x (one line + one marker series)
    expect(model.series).toHaveLength(4);
    expect(model.series[0].kind).toBe("line");
    expect(model.series[1].kind).toBe("markers");
    expect(model.skippedRows).toBe(0);
    expect(model.x.scale).toBe("log");
  });

  it("skips empty-cell rows and counts them", () => {
    const data = parseDataset(EMPTY_CELL_CSV, "assoc.csv");
    const model = buildModel(PANELS.fig2a, data, "assoc.csv");
    expect(model.skippedRows).toBe(0); // quadrature and mc columns are full
    const withSeriesLine = {
      ...PANELS.fig2a,
      lines: [{ column: "p_assoc_series", suffix: "series" }],
    };
    const model2 = buildModel(withSeriesLine, data, "assoc.csv");
    expect(model2.skippedRows).toBe(1);
  });
});

describe("rendering", () => {
  it("svg output is deterministic and well-formed", () => {
    const data = parseDataset(COVERAGE_CSV, "cov.csv");
    const model = buildModel(PANELS.fig1c, data, "cov.csv");
    const a = renderSvg(model);
    const b = renderSvg(model);
    expect(a).toBe(b);
    expect(a.startsWith("<svg")).toBe(true);
    expect(a).toContain("polyline");
    expect(a.trim().endsWith("</svg>")).toBe(true);
  });

  it("png output is deterministic with a valid signature", () => {
    const data = parseDataset(COVERAGE_CSV, "cov.csv");
    const model = buildModel(PANELS.fig1c, data, "cov.csv");
    const a = renderPng(model);
    const b = renderPng(model);
    expect(Buffer.compare(a, b)).toBe(0);
    expect(a.subarray(0, 8)).toEqual(
      Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    );
  });

  it("renders a single-marker panel without crashing", () => {
    const dir = tempDir();
    writeFileSync(join(dir, "one.csv"), SINGLE_ROW_CSV);
    const outcome = renderPanel(
      PANELS.fig1c,
      join(dir, "one.csv"),
      join(dir, "one.svg"),
      "svg",
    );
    expect(outcome.error).toBeUndefined();
    expect(readFileSync(join(dir, "one.svg"), "utf-8")).toContain("<svg");
  });
});

describe("renderAll", () => {
  it("renders all six panels from a manifest", () => {
    const dir = tempDir();
    writeFixtureCsvs(dir);
    const manifest = writeManifest(dir, ALL);
    const outDir = join(dir, "out");
    const outcomes = renderAll(manifest, outDir, "svg");
    expect(outcomes).toHaveLength(6);
    expect(outcomes.every((o) => o.error === undefined)).toBe(true);
    for (const name of ALL) {
      expect(readFileSync(join(outDir, `${name}.svg`), "utf-8")).toContain("</svg>");
    }
  });

  it("reruns produce byte-identical images", () => {
    const dir = tempDir();
    writeFixtureCsvs(dir);
    const manifest = writeManifest(dir, ALL);
    const outA = join(dir, "a");
    const outB = join(dir, "b");
    renderAll(manifest, outA, "png");
    renderAll(manifest, outB, "png");
    for (const name of ALL) {
      const a = readFileSync(join(outA, `${name}.png`));
      const b = readFileSync(join(outB, `${name}.png`));
      expect(Buffer.compare(a, b)).toBe(0);
    }
  });

  it("missing csv yields a per-panel failure, others render", () => {
    const dir = tempDir();
    writeFixtureCsvs(dir, ALL.slice(0, 5)); // fig2c.csv missing
    const manifest = writeManifest(dir, ALL);
    const outcomes = renderAll(manifest, join(dir, "out"), "svg");
    const failed = outcomes.filter((o) => o.error !== undefined);
    expect(failed).toHaveLength(1);
    expect(failed[0].name).toBe("fig2c");
    expect(outcomes.filter((o) => o.error === undefined)).toHaveLength(5);
  });

  it("corrupted csv yields a named parse error", () => {
    const dir = tempDir();
    writeFixtureCsvs(dir);
    writeFileSync(join(dir, "fig1a.csv"), "curve,s\nbroken");
    const manifest = writeManifest(dir, ALL);
    const outcomes = renderAll(manifest, join(dir, "out"), "svg");
    const failed = outcomes.filter((o) => o.error !== undefined);
    expect(failed).toHaveLength(1);
    expect(failed[0].name).toBe("fig1a");
  });
});

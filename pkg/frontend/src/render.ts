/**
 * Panel rendering entry points: one panel from a dataset file, or every
 * panel listed in a figures manifest. Rendering is read-only over the CSVs
 * and never recomputes model quantities.
 */

import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { basename, join } from "node:path";
import { parseDataset } from "./csv.js";
import { PANELS } from "./panels.js";
import { PanelSpec, buildModel } from "./plot.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";

export type Format = "svg" | "png";

export interface RenderOutcome {
  name: string;
  output?: string;
  skippedRows?: number;
  error?: string;
}

export function renderPanel(
  spec: PanelSpec,
  csvPath: string,
  outPath: string,
  format: Format,
  log: (line: string) => void = () => {},
): RenderOutcome {
  const text = readFileSync(csvPath, "utf-8");
  const data = parseDataset(text, basename(csvPath));
  const model = buildModel(spec, data, basename(csvPath));
  if (model.skippedRows > 0) {
    log(`${spec.name}: skipped ${model.skippedRows} empty-cell entries`);
  }
  if (format === "svg") {
    writeFileSync(outPath, renderSvg(model), "utf-8");
  } else {
    writeFileSync(outPath, renderPng(model));
  }
  return { name: spec.name, output: outPath, skippedRows: model.skippedRows };
}

export interface ManifestEntry {
  name: string;
  output?: string;
  error?: string;
}

export function renderAll(
  manifestPath: string,
  outDir: string,
  format: Format,
  log: (line: string) => void = () => {},
): RenderOutcome[] {
  const manifest = JSON.parse(readFileSync(manifestPath, "utf-8"));
  const baseDir = join(manifestPath, "..");
  mkdirSync(outDir, { recursive: true });
  const outcomes: RenderOutcome[] = [];
  const entries: ManifestEntry[] = manifest.figures ?? [];
  for (const entry of entries) {
    const spec = PANELS[entry.name];
    if (spec === undefined) {
      outcomes.push({ name: entry.name, error: `no panel specification for "${entry.name}"` });
      continue;
    }
    if (entry.output === undefined) {
      outcomes.push({
        name: entry.name,
        error: entry.error ?? "manifest entry carries no output file",
      });
      continue;
    }
    const csvPath = join(baseDir, entry.output);
    const outPath = join(outDir, `${entry.name}.${format}`);
    try {
      outcomes.push(renderPanel(spec, csvPath, outPath, format, log));
    } catch (err) {
      outcomes.push({ name: entry.name, error: `${(err as Error).message}` });
    }
  }
  return outcomes;
}

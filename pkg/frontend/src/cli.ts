#!/usr/bin/env node
/**
 * render_figures --manifest <path> --out <dir> [--format svg|png]
 *
 * Reads a thzgeo figures manifest, renders every listed dataset to its
 * panel image, and exits nonzero if any panel fails.
 */

import { renderAll, Format } from "./render.js";

function usage(): never {
  process.stderr.write(
    "usage: render_figures --manifest <manifest.json> --out <dir> [--format svg|png]\n",
  );
  process.exit(2);
}

export function main(argv: string[]): number {
  let manifest: string | undefined;
  let out: string | undefined;
  let format: Format = "svg";
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case "--manifest":
        manifest = argv[++i];
        break;
      case "--out":
        out = argv[++i];
        break;
      case "--format": {
        const value = argv[++i];
        if (value !== "svg" && value !== "png") usage();
        format = value;
        break;
      }
      default:
        usage();
    }
  }
  if (!manifest || !out) usage();

  const outcomes = renderAll(manifest, out, format, (line) => {
    process.stderr.write(line + "\n");
  });
  let failures = 0;
  for (const outcome of outcomes) {
    if (outcome.error) {
      failures += 1;
      process.stderr.write(`${outcome.name}: ${outcome.error}\n`);
    } else {
      process.stderr.write(`${outcome.name}: wrote ${outcome.output}\n`);
    }
  }
  if (outcomes.length === 0) {
    process.stderr.write("manifest lists no figures\n");
    return 1;
  }
  return failures === 0 ? 0 : 1;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  (process.argv[1].endsWith("cli.js") || process.argv[1].endsWith("render_figures"));
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}

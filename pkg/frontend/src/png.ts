/**
 * Minimal deterministic PNG backend: a software rasterizer (lines, markers,
 * rectangles, 5x7 bitmap text) over an RGBA buffer, encoded with zlib from
 * the Node standard library. No native image dependencies.
 */

import { deflateSync } from "node:zlib";
import { PlotModel, Transform, formatTick, transform } from "./plot.js";
import { PANEL, color, marker } from "./style.js";

// 5x7 bitmap glyphs for the characters tick labels and titles use
const GLYPHS: Record<string, number[]> = {
  "0": [0x1f, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1f],
  "1": [0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x1f],
  "2": [0x1f, 0x01, 0x01, 0x1f, 0x10, 0x10, 0x1f],
  "3": [0x1f, 0x01, 0x01, 0x0f, 0x01, 0x01, 0x1f],
  "4": [0x11, 0x11, 0x11, 0x1f, 0x01, 0x01, 0x01],
  "5": [0x1f, 0x10, 0x10, 0x1f, 0x01, 0x01, 0x1f],
  "6": [0x1f, 0x10, 0x10, 0x1f, 0x11, 0x11, 0x1f],
  "7": [0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08],
  "8": [0x1f, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x1f],
  "9": [0x1f, 0x11, 0x11, 0x1f, 0x01, 0x01, 0x1f],
  ".": [0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c],
  "-": [0x00, 0x00, 0x00, 0x1f, 0x00, 0x00, 0x00],
  "+": [0x00, 0x04, 0x04, 0x1f, 0x04, 0x04, 0x00],
  e: [0x00, 0x00, 0x0e, 0x11, 0x1f, 0x10, 0x0e],
  " ": [0, 0, 0, 0, 0, 0, 0],
  A: [0x0e, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11],
  B: [0x1e, 0x11, 0x11, 0x1e, 0x11, 0x11, 0x1e],
  C: [0x0e, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0e],
  D: [0x1e, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1e],
  E: [0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x1f],
  F: [0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x10],
  G: [0x0e, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0f],
  H: [0x11, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11],
  I: [0x0e, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e],
  J: [0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0c],
  K: [0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11],
  L: [0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1f],
  M: [0x11, 0x1b, 0x15, 0x15, 0x11, 0x11, 0x11],
  N: [0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11],
  O: [0x0e, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e],
  P: [0x1e, 0x11, 0x11, 0x1e, 0x10, 0x10, 0x10],
  Q: [0x0e, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0d],
  R: [0x1e, 0x11, 0x11, 0x1e, 0x14, 0x12, 0x11],
  S: [0x0f, 0x10, 0x10, 0x0e, 0x01, 0x01, 0x1e],
  T: [0x1f, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04],
  U: [0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e],
  V: [0x11, 0x11, 0x11, 0x11, 0x11, 0x0a, 0x04],
  W: [0x11, 0x11, 0x11, 0x15, 0x15, 0x1b, 0x11],
  X: [0x11, 0x0a, 0x04, 0x04, 0x04, 0x0a, 0x11],
  Y: [0x11, 0x11, 0x0a, 0x04, 0x04, 0x04, 0x04],
  Z: [0x1f, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1f],
  "(": [0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02],
  ")": [0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08],
  "/": [0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10],
  "=": [0x00, 0x00, 0x1f, 0x00, 0x1f, 0x00, 0x00],
  "_": [0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1f],
  ",": [0x00, 0x00, 0x00, 0x00, 0x0c, 0x04, 0x08],
  ":": [0x00, 0x0c, 0x0c, 0x00, 0x0c, 0x0c, 0x00],
};

class Raster {
  data: Uint8Array;
  constructor(public width: number, public height: number) {
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const o = (yi * this.width + xi) * 4;
    this.data[o] = rgb[0];
    this.data[o + 1] = rgb[1];
    this.data[o + 2] = rgb[2];
    this.data[o + 3] = 255;
  }

  line(x0: number, y0: number, x1: number, y1: number, rgb: [number, number, number]): void {
    let xa = Math.round(x0);
    let ya = Math.round(y0);
    const xb = Math.round(x1);
    const yb = Math.round(y1);
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(xa, ya, rgb);
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        xa += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ya += sy;
      }
    }
  }

  disc(cx: number, cy: number, r: number, rgb: [number, number, number]): void {
    for (let y = -r; y <= r; y++) {
      for (let x = -r; x <= r; x++) {
        if (x * x + y * y <= r * r) this.set(cx + x, cy + y, rgb);
      }
    }
  }

  text(x: number, y: number, text: string, rgb: [number, number, number]): void {
    let cx = Math.round(x);
    for (const raw of text) {
      // the bitmap font folds letters to uppercase; "e" stays for exponents
      const ch = raw in GLYPHS ? raw : raw.toUpperCase();
      const glyph = GLYPHS[ch] ?? GLYPHS[" "];
      for (let row = 0; row < 7; row++) {
        for (let col = 0; col < 5; col++) {
          if ((glyph[row] >> (4 - col)) & 1) this.set(cx + col, y + row, rgb);
        }
      }
      cx += 6;
    }
  }
}

function hexToRgb(hex: string): [number, number, number] {
  return [
    parseInt(hex.slice(1, 3), 16),
    parseInt(hex.slice(3, 5), 16),
    parseInt(hex.slice(5, 7), 16),
  ];
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (const b of buf) c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Uint8Array {
  const out = new Uint8Array(12 + payload.length);
  const view = new DataView(out.buffer);
  view.setUint32(0, payload.length);
  out.set(Buffer.from(type, "ascii"), 4);
  out.set(payload, 8);
  const crcInput = out.subarray(4, 8 + payload.length);
  view.setUint32(8 + payload.length, crc32(crcInput));
  return out;
}

export function encodePng(raster: Raster): Buffer {
  const { width, height, data } = raster;
  const ihdr = new Uint8Array(13);
  const view = new DataView(ihdr.buffer);
  view.setUint32(0, width);
  view.setUint32(4, height);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  const rawRows = new Uint8Array(height * (1 + width * 4));
  for (let y = 0; y < height; y++) {
    const offset = y * (1 + width * 4);
    rawRows[offset] = 0; // filter: none
    rawRows.set(data.subarray(y * width * 4, (y + 1) * width * 4), offset + 1);
  }
  const idat = deflateSync(rawRows, { level: 9 });
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

const BLACK: [number, number, number] = [34, 34, 34];
const GRID: [number, number, number] = [224, 224, 224];

export function renderPng(model: PlotModel): Buffer {
  const t: Transform = transform(model);
  const raster = new Raster(PANEL.width, PANEL.height);
  const right = t.plotLeft + t.plotWidth;
  const bottom = t.plotTop + t.plotHeight;

  for (const tick of model.x.ticks) {
    if (tick < model.x.min || tick > model.x.max) continue;
    const x = t.toX(tick);
    raster.line(x, t.plotTop, x, bottom, GRID);
    raster.line(x, bottom, x, bottom + PANEL.tickLength, BLACK);
    const label = formatTick(tick, model.x.scale);
    raster.text(x - 3 * label.length, bottom + 10, label, BLACK);
  }
  for (const tick of model.y.ticks) {
    if (tick < model.y.min || tick > model.y.max) continue;
    const y = t.toY(tick);
    raster.line(t.plotLeft, y, right, y, GRID);
    raster.line(t.plotLeft - PANEL.tickLength, y, t.plotLeft, y, BLACK);
    const label = formatTick(tick, model.y.scale);
    raster.text(t.plotLeft - 10 - 6 * label.length, y - 3, label, BLACK);
  }
  // frame
  raster.line(t.plotLeft, t.plotTop, right, t.plotTop, BLACK);
  raster.line(t.plotLeft, bottom, right, bottom, BLACK);
  raster.line(t.plotLeft, t.plotTop, t.plotLeft, bottom, BLACK);
  raster.line(right, t.plotTop, right, bottom, BLACK);

  raster.text(PANEL.width / 2 - 3 * model.title.length, 12, model.title, BLACK);
  raster.text(
    t.plotLeft + t.plotWidth / 2 - 3 * model.x.label.length,
    PANEL.height - 18,
    model.x.label,
    BLACK,
  );

  for (const s of model.series) {
    const rgb = hexToRgb(color(s.colorIndex));
    if (s.kind === "line") {
      for (let i = 1; i < s.x.length; i++) {
        raster.line(t.toX(s.x[i - 1]), t.toY(s.y[i - 1]), t.toX(s.x[i]), t.toY(s.y[i]), rgb);
      }
    } else {
      for (let i = 0; i < s.x.length; i++) {
        const cx = t.toX(s.x[i]);
        const cy = t.toY(s.y[i]);
        const err = s.yerr[i];
        if (err !== null && err > 0) {
          const yLo = t.toY(Math.max(s.y[i] - err, model.y.scale === "log" ? model.y.min : -Infinity));
          const yHi = t.toY(s.y[i] + err);
          raster.line(cx, yLo, cx, yHi, rgb);
          raster.line(cx - 3, yLo, cx + 3, yLo, rgb);
          raster.line(cx - 3, yHi, cx + 3, yHi, rgb);
        }
        raster.disc(Math.round(cx), Math.round(cy), 3, rgb);
      }
    }
  }

  // legend swatches, top-right
  let legendY = t.plotTop + 10;
  for (const s of model.series) {
    const rgb = hexToRgb(color(s.colorIndex));
    if (s.kind === "line") {
      raster.line(right - 150, legendY, right - 126, legendY, rgb);
    } else {
      raster.disc(right - 138, legendY, 3, rgb);
    }
    raster.text(right - 118, legendY - 3, s.label.slice(0, 18), BLACK);
    legendY += 14;
  }

  return encodePng(raster);
}

export { Raster };

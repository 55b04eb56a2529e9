/**
 * Deterministic SVG rendering of a plot model: fixed layout and style, no
 * timestamps or generated ids, so identical models yield identical bytes.
 */

import { PlotModel, Transform, formatTick, transform } from "./plot.js";
import { FONT_FAMILY, PANEL, color, dash, marker } from "./style.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmt(v: number): string {
  return Number(v.toFixed(2)).toString();
}

function markerPath(shape: string, cx: number, cy: number, r: number, fill: string): string {
  switch (shape) {
    case "square":
      return `<rect x="${fmt(cx - r)}" y="${fmt(cy - r)}" width="${fmt(2 * r)}" height="${fmt(2 * r)}" fill="${fill}"/>`;
    case "diamond":
      return `<path d="M${fmt(cx)} ${fmt(cy - 1.3 * r)}L${fmt(cx + 1.3 * r)} ${fmt(cy)}L${fmt(cx)} ${fmt(cy + 1.3 * r)}L${fmt(cx - 1.3 * r)} ${fmt(cy)}Z" fill="${fill}"/>`;
    case "triangle":
      return `<path d="M${fmt(cx)} ${fmt(cy - 1.2 * r)}L${fmt(cx + 1.2 * r)} ${fmt(cy + r)}L${fmt(cx - 1.2 * r)} ${fmt(cy + r)}Z" fill="${fill}"/>`;
    default:
      return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"/>`;
  }
}

export function renderSvg(model: PlotModel): string {
  const t: Transform = transform(model);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${PANEL.width}" height="${PANEL.height}" viewBox="0 0 ${PANEL.width} ${PANEL.height}">`,
  );
  parts.push(`<rect width="${PANEL.width}" height="${PANEL.height}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${PANEL.width / 2}" y="${PANEL.marginTop - 16}" text-anchor="middle" font-family="${FONT_FAMILY}" font-size="${PANEL.titleSize}" fill="#222222">${esc(model.title)}</text>`,
  );

  // frame and grid
  const right = t.plotLeft + t.plotWidth;
  const bottom = t.plotTop + t.plotHeight;
  for (const tick of model.x.ticks) {
    if (tick < model.x.min || tick > model.x.max) continue;
    const x = t.toX(tick);
    parts.push(
      `<line x1="${fmt(x)}" y1="${fmt(t.plotTop)}" x2="${fmt(x)}" y2="${fmt(bottom)}" stroke="#e0e0e0" stroke-width="1"/>`,
    );
    parts.push(
      `<line x1="${fmt(x)}" y1="${fmt(bottom)}" x2="${fmt(x)}" y2="${fmt(bottom + PANEL.tickLength)}" stroke="#333333" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(x)}" y="${fmt(bottom + 20)}" text-anchor="middle" font-family="${FONT_FAMILY}" font-size="${PANEL.fontSize}" fill="#333333">${esc(formatTick(tick, model.x.scale))}</text>`,
    );
  }
  for (const tick of model.y.ticks) {
    if (tick < model.y.min || tick > model.y.max) continue;
    const y = t.toY(tick);
    parts.push(
      `<line x1="${fmt(t.plotLeft)}" y1="${fmt(y)}" x2="${fmt(right)}" y2="${fmt(y)}" stroke="#e0e0e0" stroke-width="1"/>`,
    );
    parts.push(
      `<line x1="${fmt(t.plotLeft - PANEL.tickLength)}" y1="${fmt(y)}" x2="${fmt(t.plotLeft)}" y2="${fmt(y)}" stroke="#333333" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(t.plotLeft - 8)}" y="${fmt(y + 4)}" text-anchor="end" font-family="${FONT_FAMILY}" font-size="${PANEL.fontSize}" fill="#333333">${esc(formatTick(tick, model.y.scale))}</text>`,
    );
  }
  parts.push(
    `<rect x="${fmt(t.plotLeft)}" y="${fmt(t.plotTop)}" width="${fmt(t.plotWidth)}" height="${fmt(t.plotHeight)}" fill="none" stroke="#333333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${fmt(t.plotLeft + t.plotWidth / 2)}" y="${fmt(PANEL.height - 14)}" text-anchor="middle" font-family="${FONT_FAMILY}" font-size="${PANEL.fontSize}" fill="#222222">${esc(model.x.label)}</text>`,
  );
  parts.push(
    `<text x="18" y="${fmt(t.plotTop + t.plotHeight / 2)}" text-anchor="middle" font-family="${FONT_FAMILY}" font-size="${PANEL.fontSize}" fill="#222222" transform="rotate(-90 18 ${fmt(t.plotTop + t.plotHeight / 2)})">${esc(model.y.label)}</text>`,
  );

  // series
  for (const s of model.series) {
    const stroke = color(s.colorIndex);
    if (s.kind === "line") {
      const pts = s.x.map((x, i) => `${fmt(t.toX(x))},${fmt(t.toY(s.y[i]))}`).join(" ");
      const dashAttr = dash(s.dashIndex) ? ` stroke-dasharray="${dash(s.dashIndex)}"` : "";
      parts.push(
        `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="1.6"${dashAttr}/>`,
      );
    } else {
      const shape = marker(s.colorIndex);
      for (let i = 0; i < s.x.length; i++) {
        const cx = t.toX(s.x[i]);
        const cy = t.toY(s.y[i]);
        const err = s.yerr[i];
        if (err !== null && err > 0) {
          const yLo = t.toY(Math.max(s.y[i] - err, model.y.scale === "log" ? model.y.min : -Infinity));
          const yHi = t.toY(s.y[i] + err);
          parts.push(
            `<line x1="${fmt(cx)}" y1="${fmt(yLo)}" x2="${fmt(cx)}" y2="${fmt(yHi)}" stroke="${stroke}" stroke-width="1"/>`,
          );
          for (const yy of [yLo, yHi]) {
            parts.push(
              `<line x1="${fmt(cx - 3)}" y1="${fmt(yy)}" x2="${fmt(cx + 3)}" y2="${fmt(yy)}" stroke="${stroke}" stroke-width="1"/>`,
            );
          }
        }
        parts.push(markerPath(shape, cx, cy, PANEL.markerSize, stroke));
      }
    }
  }

  // legend, top-right inside the frame
  const legendX = right - 10;
  let legendY = t.plotTop + 16;
  for (const s of model.series) {
    const stroke = color(s.colorIndex);
    if (s.kind === "line") {
      const dashAttr = dash(s.dashIndex) ? ` stroke-dasharray="${dash(s.dashIndex)}"` : "";
      parts.push(
        `<line x1="${fmt(legendX - 150)}" y1="${fmt(legendY - 4)}" x2="${fmt(legendX - 120)}" y2="${fmt(legendY - 4)}" stroke="${stroke}" stroke-width="1.6"${dashAttr}/>`,
      );
    } else {
      parts.push(markerPath(marker(s.colorIndex), legendX - 135, legendY - 4, PANEL.markerSize, stroke));
    }
    parts.push(
      `<text x="${fmt(legendX - 112)}" y="${fmt(legendY)}" font-family="${FONT_FAMILY}" font-size="${PANEL.fontSize - 1}" fill="#222222">${esc(s.label)}</text>`,
    );
    legendY += 16;
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

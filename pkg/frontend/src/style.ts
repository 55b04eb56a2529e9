/**
 * Checked-in plot style so rendered images are diff-stable: fixed palette,
 * dash patterns, and marker shapes; no randomness, no timestamps.
 */

export const COLORS = [
  "#1f5fa8",
  "#c44e52",
  "#2e8b57",
  "#9467bd",
  "#d9820f",
  "#17a2b8",
  "#8c564b",
  "#e377c2",
];

export const DASHES = ["", "6,3", "2,2", "8,3,2,3"];

export type MarkerShape = "circle" | "square" | "diamond" | "triangle";
export const MARKERS: MarkerShape[] = ["circle", "square", "diamond", "triangle"];

export const FONT_FAMILY = "Helvetica, Arial, sans-serif";

export const PANEL = {
  width: 760,
  height: 440,
  marginLeft: 74,
  marginRight: 16,
  marginTop: 40,
  marginBottom: 58,
  fontSize: 13,
  titleSize: 15,
  tickLength: 5,
  markerSize: 3.5,
  padFraction: 0.05,
};

export function color(i: number): string {
  return COLORS[i % COLORS.length];
}

export function dash(i: number): string {
  return DASHES[i % DASHES.length];
}

export function marker(i: number): MarkerShape {
  return MARKERS[i % MARKERS.length];
}

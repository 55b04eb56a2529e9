/**
 * Reader for thzgeo dataset files: a `#` comment block with the resolved
 * configuration, a header row, then numeric rows (empty cells allowed).
 */

export interface Dataset {
  comments: string[];
  columns: string[];
  /** row-major cells; empty CSV cells become null */
  rows: (number | string | null)[][];
}

export class CsvParseError extends Error {}
export class MissingColumnError extends Error {
  constructor(public readonly column: string, file: string) {
    super(`column "${column}" not present in ${file}`);
  }
}

function parseCell(text: string): number | string | null {
  if (text === "") return null;
  const value = Number(text);
  return Number.isFinite(value) ? value : text;
}

export function parseDataset(text: string, name = "<csv>"): Dataset {
  const comments: string[] = [];
  let header: string[] | null = null;
  const rows: (number | string | null)[][] = [];
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i];
    if (line === "" && i === lines.length - 1) continue; // trailing newline
    if (line.startsWith("#")) {
      comments.push(line.slice(1).trim());
      continue;
    }
    if (header === null) {
      header = line.split(",").map((c) => c.trim());
      if (header.length < 2 || header.some((c) => c === "")) {
        throw new CsvParseError(`${name}:${i + 1}: malformed header row ${JSON.stringify(line)}`);
      }
      continue;
    }
    if (line.trim() === "") continue;
    const cells = line.split(",").map((c) => parseCell(c.trim()));
    if (cells.length !== header.length) {
      throw new CsvParseError(
        `${name}:${i + 1}: expected ${header.length} cells, found ${cells.length}`,
      );
    }
    rows.push(cells);
  }
  if (header === null) {
    throw new CsvParseError(`${name}: no header row found`);
  }
  return { comments, columns: header, rows };
}

export function columnIndex(data: Dataset, column: string, file: string): number {
  const index = data.columns.indexOf(column);
  if (index < 0) throw new MissingColumnError(column, file);
  return index;
}

/** Distinct values of a column, in first-appearance order. */
export function distinctValues(data: Dataset, column: string, file: string): (number | string | null)[] {
  const idx = columnIndex(data, column, file);
  const seen: (number | string | null)[] = [];
  for (const row of data.rows) {
    if (!seen.includes(row[idx])) seen.push(row[idx]);
  }
  return seen;
}

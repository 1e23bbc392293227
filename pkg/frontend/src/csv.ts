/** Minimal CSV reader for the diagnostics schema: one header row, numeric cells. */

export interface CsvTable {
  /** column names from the header row, in file order */
  columns: string[];
  /** data rows; "nan" cells become NaN */
  rows: number[][];
  /** label used in error messages (usually the file path) */
  source: string;
}

export function parseCsv(text: string, source: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new Error(`${source} is empty`);
  }
  const header = lines[0]!;
  const columns = header.split(",").map((c) => c.trim());
  if (lines.length === 1) {
    throw new Error(`${source} has a header but no data rows`);
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i]!.split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `${source} row ${i} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    rows.push(cells.map((c) => Number(c)));
  }
  return { columns, rows, source };
}

/** Extract one column by name; the error names the missing column. */
export function column(table: CsvTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`${table.source} is missing required column "${name}"`);
  }
  return table.rows.map((r) => r[idx]!);
}

export function requireColumns(table: CsvTable, names: string[]): void {
  for (const name of names) {
    column(table, name);
  }
}

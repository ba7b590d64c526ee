/** Raised when an input CSV does not match the expected table schema. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** One parsed result table: '# '-prefixed JSON metadata, header row, data rows. */
export interface ResultTable {
  metadata: Record<string, unknown>;
  columns: string[];
  rows: string[][];
}

function splitCsvLine(line: string): string[] {
  const fields: string[] = [];
  let current = "";
  let quoted = false;
  let i = 0;
  while (i < line.length) {
    const ch = line[i]!;
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          current += '"';
          i += 2;
          continue;
        }
        quoted = false;
        i += 1;
        continue;
      }
      current += ch;
      i += 1;
      continue;
    }
    if (ch === '"') {
      quoted = true;
      i += 1;
      continue;
    }
    if (ch === ",") {
      fields.push(current);
      current = "";
      i += 1;
      continue;
    }
    current += ch;
    i += 1;
  }
  fields.push(current);
  return fields;
}

/** Parse the simulator's CSV output format into a table. */
export function parseResultCsv(text: string): ResultTable {
  const lines = text.split(/\r?\n/);
  const metaLines: string[] = [];
  let k = 0;
  while (k < lines.length && lines[k]!.startsWith("#")) {
    metaLines.push(lines[k]!.replace(/^# ?/, ""));
    k += 1;
  }

  let metadata: Record<string, unknown> = {};
  if (metaLines.length > 0) {
    let parsed: unknown;
    try {
      parsed = JSON.parse(metaLines.join("\n"));
    } catch {
      throw new SchemaError("metadata header is not valid JSON");
    }
    if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
      throw new SchemaError("metadata header must be a JSON object");
    }
    metadata = parsed as Record<string, unknown>;
  }

  if (k >= lines.length || lines[k]!.trim() === "") {
    throw new SchemaError("no header row after the metadata block");
  }
  const columns = splitCsvLine(lines[k]!);
  k += 1;

  const rows: string[][] = [];
  for (; k < lines.length; k++) {
    const line = lines[k]!;
    if (line === "") continue;
    const row = splitCsvLine(line);
    if (row.length !== columns.length) {
      throw new SchemaError(
        `row ${rows.length + 1} has ${row.length} fields, expected ${columns.length}`
      );
    }
    rows.push(row);
  }
  return { metadata, columns, rows };
}

/**
 * Indices of the named columns, in order.  Missing columns raise a
 * SchemaError naming the first absent one.
 */
export function requireColumns(table: ResultTable, names: string[]): number[] {
  const indices: number[] = [];
  for (const name of names) {
    const idx = table.columns.indexOf(name);
    if (idx < 0) {
      throw new SchemaError(
        `missing column '${name}' (file has: ${table.columns.join(", ")})`
      );
    }
    indices.push(idx);
  }
  return indices;
}

/** Numeric view of one field; the writer encodes non-finite values as "null". */
export function toNumber(field: string): number {
  if (field === "null" || field === "") return NaN;
  return Number(field);
}

/** One named column as numbers (non-finite entries preserved as NaN). */
export function numericColumn(table: ResultTable, name: string): number[] {
  const [idx] = requireColumns(table, [name]);
  return table.rows.map((row) => toNumber(row[idx!]!));
}

/** Drop pairs whose y is not finite, keeping x/y aligned. */
export function cleanSeries(xs: number[], ys: number[]) {
  const outX: number[] = [];
  const outY: number[] = [];
  for (let i = 0; i < ys.length; i++) {
    if (Number.isFinite(xs[i]) && Number.isFinite(ys[i])) {
      outX.push(xs[i]!);
      outY.push(ys[i]!);
    }
  }
  return { x: outX, y: outY };
}

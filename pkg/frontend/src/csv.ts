import { readFileSync } from 'fs';
import Papa from 'papaparse';

/** Column order produced by the simulator CLI's trajectory export. */
export const REQUIRED_COLUMNS = [
  't', 'x', 'y',
  'r11', 'r12', 'r13', 'r21', 'r22', 'r23', 'r31', 'r32', 'r33',
  'wx', 'wy', 'wz', 'tau_x', 'tau_y', 'tau_z',
  'V', 'Vdot', 'e_w_norm',
] as const;

export type ColumnName = (typeof REQUIRED_COLUMNS)[number];

export type TrajectoryTable = Record<ColumnName, number[]> & { rows: number };

export class SchemaError extends Error {}

/**
 * Load a trajectory CSV and validate it against the simulator's schema.
 * Rejects files with missing columns (listing them) or without data rows.
 */
export function loadTrajectoryCsv(path: string): TrajectoryTable {
  const text = readFileSync(path, 'utf8');
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`${path}: CSV parse error: ${first.message} (row ${first.row})`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = REQUIRED_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`${path}: missing required columns: ${missing.join(', ')}`);
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`${path}: no data rows (header only)`);
  }
  const table = { rows: parsed.data.length } as TrajectoryTable;
  for (const col of REQUIRED_COLUMNS) {
    table[col] = parsed.data.map((row, i) => {
      const v = Number(row[col]);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${path}: non-numeric value in column ${col}, data row ${i + 1}`);
      }
      return v;
    });
  }
  return table;
}

/** Pair two columns into echarts-style [x, y] tuples. */
export function zip(xs: number[], ys: number[]): [number, number][] {
  return xs.map((x, i) => [x, ys[i]]);
}

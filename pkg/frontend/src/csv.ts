/**
 * CSV parsing for the simulator's two output schemas.
 *
 * BER rows:        selector,M,N,N_R,N_S,snr_db,frames,bit_errors,ber,seed,wall_time_s
 * Complexity rows: case,L,layer_sizes,N,N_R,N_S,coas_rms,dnn_rms
 */

export class SchemaError extends Error {}
export class NoDataError extends Error {}

export interface BerRow {
  selector: string;
  M: number;
  N: number;
  N_R: number;
  N_S: number;
  snr_db: number;
  frames: number;
  bit_errors: number;
  ber: number;
  seed: number;
  wall_time_s: number;
}

export interface ComplexityRow {
  case: string;
  L: number;
  layer_sizes: string;
  N: number;
  N_R: number;
  N_S: number;
  coas_rms: number;
  dnn_rms: number;
}

export const BER_COLUMNS = [
  "selector", "M", "N", "N_R", "N_S", "snr_db",
  "frames", "bit_errors", "ber", "seed", "wall_time_s",
] as const;

export const COMPLEXITY_COLUMNS = [
  "case", "L", "layer_sizes", "N", "N_R", "N_S", "coas_rms", "dnn_rms",
] as const;

export function parseCsv(text: string): { header: string[]; rows: string[][] } {
  const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
  if (lines.length === 0) {
    throw new NoDataError("CSV file is empty");
  }
  const header = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line) => line.split(",").map((c) => c.trim()));
  return { header, rows };
}

function requireColumns(header: string[], wanted: readonly string[]): void {
  for (const column of wanted) {
    if (!header.includes(column)) {
      throw new SchemaError(`missing column '${column}' in CSV header [${header.join(", ")}]`);
    }
  }
}

function toRecord(header: string[], row: string[]): Record<string, string> {
  const record: Record<string, string> = {};
  header.forEach((name, i) => {
    record[name] = row[i] ?? "";
  });
  return record;
}

export function parseBerCsv(text: string): BerRow[] {
  const { header, rows } = parseCsv(text);
  requireColumns(header, BER_COLUMNS);
  if (rows.length === 0) {
    throw new NoDataError("no data rows in BER CSV");
  }
  return rows.map((row) => {
    const r = toRecord(header, row);
    return {
      selector: r.selector,
      M: Number(r.M),
      N: Number(r.N),
      N_R: Number(r.N_R),
      N_S: Number(r.N_S),
      snr_db: Number(r.snr_db),
      frames: Number(r.frames),
      bit_errors: Number(r.bit_errors),
      ber: Number(r.ber),
      seed: Number(r.seed),
      wall_time_s: Number(r.wall_time_s),
    };
  });
}

export function parseComplexityCsv(text: string): ComplexityRow[] {
  const { header, rows } = parseCsv(text);
  requireColumns(header, COMPLEXITY_COLUMNS);
  if (rows.length === 0) {
    throw new NoDataError("no data rows in complexity CSV");
  }
  return rows.map((row) => {
    const r = toRecord(header, row);
    return {
      case: r.case,
      L: Number(r.L),
      layer_sizes: r.layer_sizes,
      N: Number(r.N),
      N_R: Number(r.N_R),
      N_S: Number(r.N_S),
      coas_rms: Number(r.coas_rms),
      dnn_rms: Number(r.dnn_rms),
    };
  });
}

import { describe, expect, it } from "vitest";
import { renderBerSvg } from "../src/berPlot.js";
import { BerRow, NoDataError, SchemaError, parseBerCsv } from "../src/csv.js";

const HEADER =
  "selector,M,N,N_R,N_S,snr_db,frames,bit_errors,ber,seed,wall_time_s";

function syntheticCsv(): string {
  const lines = [HEADER];
  for (const selector of ["coas", "dnn"]) {
    for (const m of [4, 8, 16]) {
      for (const snr of [0, 5, 10]) {
        const ber = 10 ** (-(1 + snr / 5) - m / 32);
        lines.push(
          `${selector},${m},16,4,2,${snr},100000,${Math.round(
            ber * 100000 * 5,
          )},${ber},7,0.1`,
        );
      }
    }
  }
  return lines.join("\n") + "\n";
}

describe("renderBerSvg", () => {
  it("renders six labeled series for two selectors times three orders", () => {
    const rows = parseBerCsv(syntheticCsv());
    const result = renderBerSvg(rows, { groupBy: ["selector", "M"] });
    expect(result.seriesCount).toBe(6);
    const polylines = result.svg.match(/<polyline /g) ?? [];
    expect(polylines.length).toBe(6);
    for (const label of [
      "selector=coas M=4", "selector=coas M=8", "selector=coas M=16",
      "selector=dnn M=4", "selector=dnn M=8", "selector=dnn M=16",
    ]) {
      expect(result.svg).toContain(label);
    }
  });

  it("uses a logarithmic BER axis by default", () => {
    const rows = parseBerCsv(syntheticCsv());
    const result = renderBerSvg(rows, { groupBy: ["selector"] });
    expect(result.svg).toContain("axis-log-y");
    expect(result.svg).toMatch(/1e-\d/);
  });

  it("handles a single-row file without crashing", () => {
    const rows = parseBerCsv(
      `${HEADER}\ncoas,4,8,4,2,5,1000,10,0.0025,3,0.1\n`,
    );
    const result = renderBerSvg(rows, { groupBy: ["selector"] });
    expect(result.seriesCount).toBe(1);
    expect(result.svg).toContain("<circle");
  });

  it("skips zero-BER points with a warning", () => {
    const rows = parseBerCsv(
      [
        HEADER,
        "coas,4,8,4,2,0,1000,10,0.0025,3,0.1",
        "coas,4,8,4,2,5,1000,0,0,3,0.1",
      ].join("\n"),
    );
    const result = renderBerSvg(rows, { groupBy: ["selector"] });
    expect(result.warnings).toHaveLength(1);
    expect(result.warnings[0]).toMatch(/zero-BER/);
  });

  it("rejects unknown grouping columns by name", () => {
    const rows = parseBerCsv(syntheticCsv());
    expect(() => renderBerSvg(rows, { groupBy: ["bandwidth"] })).toThrowError(
      SchemaError,
    );
  });

  it("raises a no-data error when everything filters out", () => {
    const rows = parseBerCsv(
      `${HEADER}\ncoas,4,8,4,2,5,1000,0,0,3,0.1\n`,
    );
    expect(() => renderBerSvg(rows, { groupBy: ["selector"] })).toThrowError(
      NoDataError,
    );
  });

  it("does not mutate its input and renders deterministically", () => {
    const rows = parseBerCsv(syntheticCsv());
    const snapshot: BerRow[] = JSON.parse(JSON.stringify(rows));
    const first = renderBerSvg(rows, { groupBy: ["selector", "M"] });
    const second = renderBerSvg(rows, { groupBy: ["selector", "M"] });
    expect(rows).toEqual(snapshot);
    expect(first.svg).toBe(second.svg);
  });
});

#!/usr/bin/env node
/**
 * plot-complexity <csv> [-o out.svg]
 *
 * Renders the per-case operation-count comparison as paired log-scale bars.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseComplexityCsv, NoDataError, SchemaError } from "./csv.js";
import { renderComplexitySvg } from "./complexityPlot.js";

export function main(argv: string[]): number {
  let input: string | undefined;
  let output = "complexity.svg";
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-o" || arg === "--output") {
      output = argv[++i] ?? output;
    } else if (!arg.startsWith("-") && input === undefined) {
      input = arg;
    } else {
      console.error(`unknown argument: ${arg}`);
      return 2;
    }
  }
  if (input === undefined) {
    console.error("usage: plot-complexity <csv> [-o out.svg]");
    return 2;
  }
  try {
    const rows = parseComplexityCsv(readFileSync(input, "utf-8"));
    writeFileSync(output, renderComplexitySvg(rows));
    console.log(`wrote ${output} (${rows.length} cases)`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof NoDataError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}

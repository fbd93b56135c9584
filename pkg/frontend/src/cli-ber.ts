#!/usr/bin/env node
/**
 * plot-ber <csv> [--group-by selector,M] [-o out.svg] [--linear-y]
 *
 * Renders one waterfall curve per group from a simulator BER CSV.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseBerCsv, NoDataError, SchemaError } from "./csv.js";
import { renderBerSvg } from "./berPlot.js";

export function main(argv: string[]): number {
  let input: string | undefined;
  let output = "ber.svg";
  let groupBy = ["selector"];
  let logY = true;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--group-by") {
      groupBy = (argv[++i] ?? "").split(",").filter((k) => k !== "");
    } else if (arg === "-o" || arg === "--output") {
      output = argv[++i] ?? output;
    } else if (arg === "--linear-y") {
      logY = false;
    } else if (!arg.startsWith("-") && input === undefined) {
      input = arg;
    } else {
      console.error(`unknown argument: ${arg}`);
      return 2;
    }
  }
  if (input === undefined) {
    console.error("usage: plot-ber <csv> [--group-by key,key] [-o out.svg] [--linear-y]");
    return 2;
  }
  try {
    const rows = parseBerCsv(readFileSync(input, "utf-8"));
    const result = renderBerSvg(rows, { groupBy, logY });
    for (const warning of result.warnings) {
      console.warn(`warning: ${warning}`);
    }
    writeFileSync(output, result.svg);
    console.log(`wrote ${output} (${result.seriesCount} series)`);
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

export {
  parseBerCsv,
  parseComplexityCsv,
  parseCsv,
  SchemaError,
  NoDataError,
  BER_COLUMNS,
  COMPLEXITY_COLUMNS,
} from "./csv.js";
export type { BerRow, ComplexityRow } from "./csv.js";
export { renderBerSvg, groupRows } from "./berPlot.js";
export type { BerPlotOptions, RenderResult } from "./berPlot.js";
export { renderComplexitySvg } from "./complexityPlot.js";
export { linearScale, log10Scale, niceTicks } from "./scale.js";

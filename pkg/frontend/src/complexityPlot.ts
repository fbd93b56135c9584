/**
 * Operation-count comparison chart: paired bars per case on a log scale,
 * with the exact counts printed above each bar.
 */

import { ComplexityRow, NoDataError } from "./csv.js";
import { log10Scale } from "./scale.js";
import { svgDocument, tag, text } from "./svg.js";

export interface ComplexityPlotOptions {
  width?: number;
  height?: number;
  title?: string;
}

const MARGIN = { left: 80, right: 30, top: 50, bottom: 60 };
const COAS_COLOR = "#1f77b4";
const DNN_COLOR = "#d62728";

export function renderComplexitySvg(
  rows: ComplexityRow[],
  options: ComplexityPlotOptions = {},
): string {
  if (rows.length === 0) {
    throw new NoDataError("no complexity rows to plot");
  }
  const width = options.width ?? 640;
  const height = options.height ?? 440;
  const plotRight = width - MARGIN.right;
  const plotBottom = height - MARGIN.bottom;

  const values = rows.flatMap((r) => [r.coas_rms, r.dnn_rms]);
  const yScale = log10Scale(
    [Math.min(...values) / 2, Math.max(...values) * 2],
    [plotBottom, MARGIN.top],
  );

  const children: string[] = [];
  for (const tick of yScale.ticks) {
    const y = yScale(tick);
    children.push(
      tag("line", {
        x1: MARGIN.left, y1: y, x2: plotRight, y2: y,
        stroke: "#dddddd", "stroke-dasharray": "3,3",
      }),
      text(yScale.format(tick), {
        x: MARGIN.left - 8, y: y + 3, "font-size": 10, "text-anchor": "end",
      }),
    );
  }

  const slot = (plotRight - MARGIN.left) / rows.length;
  const barWidth = Math.min(slot * 0.28, 60);
  rows.forEach((row, i) => {
    const center = MARGIN.left + slot * (i + 0.5);
    const pairs: Array<[number, string, number]> = [
      [row.coas_rms, COAS_COLOR, center - barWidth - 4],
      [row.dnn_rms, DNN_COLOR, center + 4],
    ];
    for (const [value, color, x] of pairs) {
      const top = yScale(value);
      children.push(
        tag("rect", {
          x, y: top, width: barWidth, height: plotBottom - top,
          fill: color, class: "bar",
        }),
        text(String(value), {
          x: x + barWidth / 2, y: top - 6,
          "font-size": 11, "text-anchor": "middle", class: "bar-value",
        }),
      );
    }
    children.push(
      text(row.case, {
        x: center, y: plotBottom + 18, "font-size": 11, "text-anchor": "middle",
      }),
      text(`N=${row.N} N_R=${row.N_R} N_S=${row.N_S}`, {
        x: center, y: plotBottom + 34, "font-size": 9, "text-anchor": "middle",
      }),
    );
  });

  children.push(
    tag("line", {
      x1: MARGIN.left, y1: plotBottom, x2: plotRight, y2: plotBottom, stroke: "black",
    }),
    tag("line", {
      x1: MARGIN.left, y1: MARGIN.top, x2: MARGIN.left, y2: plotBottom, stroke: "black",
    }),
    tag("rect", { x: MARGIN.left + 10, y: MARGIN.top - 28, width: 12, height: 12, fill: COAS_COLOR }),
    text("norm-based selection", { x: MARGIN.left + 27, y: MARGIN.top - 18, "font-size": 11 }),
    tag("rect", { x: MARGIN.left + 190, y: MARGIN.top - 28, width: 12, height: 12, fill: DNN_COLOR }),
    text("network inference", { x: MARGIN.left + 207, y: MARGIN.top - 18, "font-size": 11 }),
    text("real multiplications (log scale)", {
      x: 18, y: (MARGIN.top + plotBottom) / 2,
      "font-size": 12, "text-anchor": "middle",
      transform: `rotate(-90 18 ${(MARGIN.top + plotBottom) / 2})`,
    }),
  );
  if (options.title) {
    children.push(
      text(options.title, {
        x: width / 2, y: 20, "font-size": 14, "text-anchor": "middle",
      }),
    );
  }
  return svgDocument(width, height, children);
}

/**
 * BER-versus-SNR waterfall rendering.
 *
 * One polyline per group (grouping keys are CSV columns, e.g. selector and
 * M), log-scaled BER axis, markers plus a legend.  Zero-BER points cannot
 * appear on a log axis; they are skipped and reported as warnings.
 */

import { BerRow, BER_COLUMNS, NoDataError, SchemaError } from "./csv.js";
import { linearScale, log10Scale, Scale, trimNumber } from "./scale.js";
import { MARKERS, SERIES_COLORS, marker, svgDocument, tag, text } from "./svg.js";

export interface BerPlotOptions {
  groupBy: string[];
  logY?: boolean;
  width?: number;
  height?: number;
  title?: string;
  xRange?: [number, number];
  yRange?: [number, number];
}

export interface RenderResult {
  svg: string;
  warnings: string[];
  seriesCount: number;
}

interface Series {
  label: string;
  points: { x: number; y: number }[];
}

const MARGIN = { left: 70, right: 30, top: 40, bottom: 50 };

export function groupRows(rows: BerRow[], keys: string[]): Map<string, BerRow[]> {
  for (const key of keys) {
    if (!(BER_COLUMNS as readonly string[]).includes(key)) {
      throw new SchemaError(`unknown grouping column '${key}'`);
    }
  }
  const groups = new Map<string, BerRow[]>();
  for (const row of rows) {
    const label = keys
      .map((key) => `${key}=${String(row[key as keyof BerRow])}`)
      .join(" ");
    const bucket = groups.get(label);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(label, [row]);
    }
  }
  return groups;
}

export function renderBerSvg(rows: BerRow[], options: BerPlotOptions): RenderResult {
  if (rows.length === 0) {
    throw new NoDataError("no rows to plot");
  }
  const logY = options.logY ?? true;
  const width = options.width ?? 640;
  const height = options.height ?? 480;
  const warnings: string[] = [];

  const groups = groupRows(rows, options.groupBy);
  const series: Series[] = [];
  for (const [label, groupRowsList] of groups) {
    const points: Series["points"] = [];
    const sorted = [...groupRowsList].sort((a, b) => a.snr_db - b.snr_db);
    for (const row of sorted) {
      if (logY && row.ber <= 0) {
        warnings.push(
          `skipping zero-BER point (${label}, snr_db=${row.snr_db}): not representable on a log axis`,
        );
        continue;
      }
      points.push({ x: row.snr_db, y: row.ber });
    }
    series.push({ label, points });
  }
  if (series.every((s) => s.points.length === 0)) {
    throw new NoDataError("every point was filtered out; nothing to plot");
  }

  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => s.points.map((p) => p.y));
  const xDomain = options.xRange ?? [Math.min(...xs), Math.max(...xs)];
  const yDomain = options.yRange ?? [Math.min(...ys), Math.max(...ys)];

  const plotRight = width - MARGIN.right;
  const plotBottom = height - MARGIN.bottom;
  const xScale = linearScale(xDomain, [MARGIN.left, plotRight]);
  const yScale: Scale = logY
    ? log10Scale(yDomain, [plotBottom, MARGIN.top])
    : linearScale(yDomain, [plotBottom, MARGIN.top]);

  const children: string[] = [];
  children.push(...axes(xScale, yScale, width, height, logY));

  series.forEach((s, index) => {
    const color = SERIES_COLORS[index % SERIES_COLORS.length];
    const shape = MARKERS[index % MARKERS.length];
    if (s.points.length > 1) {
      const path = s.points
        .map((p) => `${xScale(p.x).toFixed(2)},${yScale(p.y).toFixed(2)}`)
        .join(" ");
      children.push(
        tag("polyline", {
          points: path,
          fill: "none",
          stroke: color,
          "stroke-width": 1.5,
          class: "series",
        }),
      );
    } else {
      // Degenerate single-point series still gets a marker and legend entry.
      children.push(tag("g", { class: "series" }, []));
    }
    for (const p of s.points) {
      children.push(marker(shape, xScale(p.x), yScale(p.y), 3.5, color));
    }
    const legendY = MARGIN.top + 16 * index;
    children.push(
      marker(shape, plotRight - 150, legendY, 3.5, color),
      text(s.label, { x: plotRight - 140, y: legendY + 4, "font-size": 11 }),
    );
  });

  if (options.title) {
    children.push(
      text(options.title, {
        x: width / 2,
        y: 20,
        "font-size": 14,
        "text-anchor": "middle",
      }),
    );
  }

  return { svg: svgDocument(width, height, children), warnings, seriesCount: series.length };
}

function axes(
  xScale: Scale,
  yScale: Scale,
  width: number,
  height: number,
  logY: boolean,
): string[] {
  const plotRight = width - MARGIN.right;
  const plotBottom = height - MARGIN.bottom;
  const parts: string[] = [];
  parts.push(
    tag("line", {
      x1: MARGIN.left, y1: plotBottom, x2: plotRight, y2: plotBottom,
      stroke: "black",
    }),
    tag("line", {
      x1: MARGIN.left, y1: MARGIN.top, x2: MARGIN.left, y2: plotBottom,
      stroke: "black",
    }),
  );
  for (const tick of xScale.ticks) {
    const x = xScale(tick);
    parts.push(
      tag("line", { x1: x, y1: plotBottom, x2: x, y2: plotBottom + 5, stroke: "black" }),
      text(xScale.format(tick), {
        x, y: plotBottom + 18, "font-size": 10, "text-anchor": "middle",
      }),
    );
  }
  for (const tick of yScale.ticks) {
    const y = yScale(tick);
    parts.push(
      tag("line", { x1: MARGIN.left - 5, y1: y, x2: MARGIN.left, y2: y, stroke: "black" }),
      tag("line", {
        x1: MARGIN.left, y1: y, x2: plotRight, y2: y,
        stroke: "#dddddd", "stroke-dasharray": "3,3",
      }),
      text(yScale.format(tick), {
        x: MARGIN.left - 8, y: y + 3, "font-size": 10, "text-anchor": "end",
      }),
    );
  }
  parts.push(
    text("SNR (dB)", {
      x: (MARGIN.left + plotRight) / 2, y: height - 12,
      "font-size": 12, "text-anchor": "middle",
    }),
    text(logY ? "BER (log scale)" : "BER", {
      x: 16, y: (MARGIN.top + plotBottom) / 2,
      "font-size": 12, "text-anchor": "middle",
      transform: `rotate(-90 16 ${(MARGIN.top + plotBottom) / 2})`,
      class: logY ? "axis-log-y" : "axis-linear-y",
    }),
  );
  return parts;
}

export function formatWarning(value: number): string {
  return trimNumber(value);
}

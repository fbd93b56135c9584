/** Minimal SVG document builder; no drawing dependencies. */

export interface Attributes {
  [name: string]: string | number;
}

export function tag(name: string, attrs: Attributes, children: string[] = []): string {
  const parts = Object.entries(attrs)
    .map(([key, value]) => `${key}="${String(value)}"`)
    .join(" ");
  if (children.length === 0) {
    return `<${name} ${parts}/>`;
  }
  return `<${name} ${parts}>${children.join("")}</${name}>`;
}

export function text(content: string, attrs: Attributes): string {
  return tag("text", { "font-family": "sans-serif", ...attrs }, [escapeXml(content)]);
}

export function escapeXml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    tag("rect", { x: 0, y: 0, width, height, fill: "white" }),
    ...children,
    "</svg>",
  ].join("\n");
}

export const SERIES_COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#e377c2", "#7f7f7f", "#bcbd22",
];

export const MARKERS = ["circle", "square", "diamond", "triangle", "cross"] as const;
export type Marker = (typeof MARKERS)[number];

export function marker(shape: Marker, x: number, y: number, size: number, color: string): string {
  const s = size;
  switch (shape) {
    case "circle":
      return tag("circle", { cx: x, cy: y, r: s, fill: color });
    case "square":
      return tag("rect", { x: x - s, y: y - s, width: 2 * s, height: 2 * s, fill: color });
    case "diamond":
      return tag("polygon", {
        points: `${x},${y - s} ${x + s},${y} ${x},${y + s} ${x - s},${y}`,
        fill: color,
      });
    case "triangle":
      return tag("polygon", {
        points: `${x},${y - s} ${x + s},${y + s} ${x - s},${y + s}`,
        fill: color,
      });
    case "cross":
      return tag("path", {
        d: `M${x - s},${y - s}L${x + s},${y + s}M${x - s},${y + s}L${x + s},${y - s}`,
        stroke: color,
        "stroke-width": 1.5,
        fill: "none",
      });
  }
}

/** Axis scales and tick generation for the SVG plots. */

export interface Scale {
  (value: number): number;
  ticks: number[];
  format(value: number): string;
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
  tickCount = 6,
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.ticks = niceTicks(d0, d1, tickCount);
  scale.format = (v) => trimNumber(v);
  return scale;
}

/** Log10 scale for BER axes: domain in linear units, ticks at powers of ten. */
export function log10Scale(domain: [number, number], range: [number, number]): Scale {
  const lo = Math.log10(domain[0]);
  const hi = Math.log10(domain[1]);
  const [r0, r1] = range;
  const span = hi - lo || 1;
  const scale = ((value: number) =>
    r0 + ((Math.log10(value) - lo) / span) * (r1 - r0)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(lo); e <= Math.floor(hi); e++) {
    ticks.push(10 ** e);
  }
  if (ticks.length === 0) {
    ticks.push(domain[0], domain[1]);
  }
  scale.ticks = ticks;
  scale.format = (v) => {
    const e = Math.round(Math.log10(v));
    return `1e${e}`;
  };
  return scale;
}

export function niceTicks(lo: number, hi: number, count: number): number[] {
  if (lo === hi) {
    return [lo];
  }
  const rawStep = (hi - lo) / Math.max(count - 1, 1);
  const magnitude = 10 ** Math.floor(Math.log10(rawStep));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * magnitude);
  const step = candidates.find((c) => c >= rawStep) ?? candidates[candidates.length - 1];
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    ticks.push(Number(v.toFixed(12)));
  }
  return ticks;
}

export function trimNumber(v: number): string {
  const fixed = v.toFixed(6);
  return fixed.replace(/\.?0+$/, "") || "0";
}

/** Tiny SVG scene builder: enough axes, lines, and labels for the figures. */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 34, right: 20, bottom: 46, left: 64 };

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export const PALETTE = ["#1f6fb2", "#c44e52", "#2a8f5c", "#8172b2", "#937860"];

function span(values: number[]): [number, number] {
  const finite = values.filter(Number.isFinite);
  if (finite.length === 0) {
    throw new Error("cannot build a scale from no finite values");
  }
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

export function linearScale(values: number[], range: [number, number]): Scale {
  const [lo, hi] = span(values);
  const f = (v: number) => range[0] + ((v - lo) / (hi - lo)) * (range[1] - range[0]);
  return Object.assign(f, { domain: [lo, hi] as [number, number] });
}

export function logScale(values: number[], range: [number, number]): Scale {
  const positive = values.filter((v) => Number.isFinite(v) && v > 0);
  if (positive.length === 0) {
    throw new Error("log scale needs at least one positive value");
  }
  const inner = linearScale(positive.map(Math.log10), range);
  const f = (v: number) => inner(Math.log10(v));
  const dom = inner.domain;
  return Object.assign(f, {
    domain: [10 ** dom[0], 10 ** dom[1]] as [number, number],
  });
}

export function xRange(): [number, number] {
  return [MARGIN.left, WIDTH - MARGIN.right];
}

export function yRange(): [number, number] {
  return [HEIGHT - MARGIN.bottom, MARGIN.top];
}

const fmt = (v: number): string => {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(1);
  return String(Number(v.toPrecision(3)));
};

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function polyline(
  xs: number[],
  ys: number[],
  sx: Scale,
  sy: Scale,
  stroke: string,
  dash = "",
): string {
  const pts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    const x = xs[i]!;
    const y = ys[i]!;
    if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
    pts.push(`${sx(x).toFixed(2)},${sy(y).toFixed(2)}`);
  }
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline fill="none" stroke="${stroke}" stroke-width="1.6"${dashAttr} points="${pts.join(" ")}"/>`;
}

export function dot(x: number, y: number, sx: Scale, sy: Scale, fill: string): string {
  return `<circle cx="${sx(x).toFixed(2)}" cy="${sy(y).toFixed(2)}" r="3.5" fill="${fill}"/>`;
}

export function text(
  x: number,
  y: number,
  s: string,
  opts: { size?: number; anchor?: string; fill?: string } = {},
): string {
  const { size = 12, anchor = "start", fill = "#222" } = opts;
  return (
    `<text x="${x.toFixed(1)}" y="${y.toFixed(1)}" font-family="sans-serif" ` +
    `font-size="${size}" text-anchor="${anchor}" fill="${fill}">${esc(s)}</text>`
  );
}

function ticks(domain: [number, number], n: number): number[] {
  const [lo, hi] = domain;
  const out: number[] = [];
  for (let i = 0; i <= n; i++) out.push(lo + ((hi - lo) * i) / n);
  return out;
}

/** Axis lines, ticks, tick labels, and axis titles. log10 axes label 10^k. */
export function axes(
  sx: Scale,
  sy: Scale,
  xLabel: string,
  yLabel: string,
  logX = false,
  logY = false,
): string {
  const [x0, x1] = xRange();
  const [y0, y1] = yRange();
  const parts: string[] = [
    `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#444"/>`,
    `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#444"/>`,
  ];
  const xd = logX ? [Math.log10(sx.domain[0]), Math.log10(sx.domain[1])] : sx.domain;
  for (const t of ticks(xd as [number, number], 4)) {
    const v = logX ? 10 ** t : t;
    const px = sx(v);
    parts.push(`<line x1="${px.toFixed(1)}" y1="${y0}" x2="${px.toFixed(1)}" y2="${y0 + 5}" stroke="#444"/>`);
    parts.push(text(px, y0 + 18, fmt(v), { anchor: "middle", size: 11 }));
  }
  const yd = logY ? [Math.log10(sy.domain[0]), Math.log10(sy.domain[1])] : sy.domain;
  for (const t of ticks(yd as [number, number], 4)) {
    const v = logY ? 10 ** t : t;
    const py = sy(v);
    parts.push(`<line x1="${x0 - 5}" y1="${py.toFixed(1)}" x2="${x0}" y2="${py.toFixed(1)}" stroke="#444"/>`);
    parts.push(text(x0 - 8, py + 4, fmt(v), { anchor: "end", size: 11 }));
  }
  parts.push(text((x0 + x1) / 2, HEIGHT - 10, xLabel, { anchor: "middle" }));
  parts.push(
    `<text x="16" y="${(y0 + y1) / 2}" font-family="sans-serif" font-size="12" ` +
      `fill="#222" text-anchor="middle" transform="rotate(-90 16 ${(y0 + y1) / 2})">${esc(yLabel)}</text>`,
  );
  return parts.join("\n");
}

export function document(title: string, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" width="${WIDTH}" height="${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
    text(MARGIN.left, 20, title, { size: 14 }),
    ...body,
    "</svg>",
    "",
  ].join("\n");
}

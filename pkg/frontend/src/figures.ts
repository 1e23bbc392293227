/** The four standard figures, each a pure function of artifact content. */

import { RunData, SweepData, findCheck } from "./artifacts.js";
import { column, requireColumns } from "./csv.js";
import {
  PALETTE,
  Scale,
  axes,
  document,
  dot,
  linearScale,
  logScale,
  polyline,
  text,
  xRange,
  yRange,
} from "./svg.js";

function color(i: number): string {
  return PALETTE[i % PALETTE.length]!;
}

function legend(labels: string[], extra = ""): string[] {
  const [, x1] = xRange();
  const parts: string[] = [];
  labels.forEach((label, i) => {
    const y = 40 + 16 * i;
    parts.push(
      `<line x1="${x1 - 150}" y1="${y - 4}" x2="${x1 - 128}" y2="${y - 4}" ` +
        `stroke="${color(i)}" stroke-width="2"/>`,
    );
    parts.push(text(x1 - 122, y, label, { size: 11 }));
  });
  if (extra) {
    parts.push(text(x1 - 150, 40 + 16 * labels.length + 4, extra, { size: 11 }));
  }
  return parts;
}

/**
 * Log-log defect decay: windowed positive-part sup per sweep member.
 *
 * The annotated number is the verdict's measured value, not a refit; when
 * the harness reports the sweep at the discretization floor the annotation
 * says so instead of claiming an exponent.
 */
export function renderDecayFigure(sweep: SweepData): string {
  const points = sweep.meta.decay_points;
  if (!Array.isArray(points) || points.length === 0) {
    throw new Error(`sweep_meta.json in ${sweep.dir} has no decay_points`);
  }
  const check = findCheck(sweep.verdicts, "discrepancy_decay");
  const positive = points.filter(([, sup]) => sup > 0);
  const floorCase = check.note.includes("floor");
  const label = floorCase
    ? `at measurement floor; ratio ${check.measured.toFixed(3)}`
    : `fitted exponent ${check.measured.toFixed(3)}`;

  const body: string[] = [];
  if (positive.length > 0) {
    const sx = logScale(points.map((p) => p[0]), xRange());
    const sy = logScale(positive.map((p) => p[1]), yRange());
    body.push(axes(sx, sy, "epsilon", "windowed positive defect sup", true, true));
    body.push(
      polyline(positive.map((p) => p[0]), positive.map((p) => p[1]), sx, sy, color(0)),
    );
    for (const [eps, sup] of positive) body.push(dot(eps, sup, sx, sy, color(0)));
    const zeros = points.length - positive.length;
    if (zeros > 0) {
      body.push(
        text(xRange()[0] + 6, yRange()[0] - 8,
          `${zeros} member(s) at exactly zero omitted from the log axis`,
          { size: 11, fill: "#666" }),
      );
    }
  } else {
    body.push(
      text(xRange()[0], 200, "all members at zero positive defect", { size: 13 }),
    );
  }
  body.push(text(xRange()[0] + 6, 40, label, { size: 13, fill: "#9a3412" }));
  return document("defect decay across the epsilon sweep", body);
}

/** One weighted-energy trace per member with its fitted envelope overlay. */
export function renderEnvelopeFigure(sweep: SweepData): string {
  const series = sweep.runs.map((run) => {
    requireColumns(run.table, ["time", "G_value"]);
    return {
      run,
      t: column(run.table, "time"),
      g: column(run.table, "G_value"),
    };
  });
  const allT = series.flatMap((s) => s.t);
  const allG = series.flatMap((s) => s.g);
  const sx = linearScale(allT, xRange());
  const sy = linearScale(allG, yRange());
  const body: string[] = [axes(sx, sy, "time", "weighted energy")];

  series.forEach((s, i) => {
    body.push(polyline(s.t, s.g, sx, sy, color(i)));
    const fit = s.run.summary.monotonicity;
    if (!fit) return;
    // envelope of the fitted bound: G(t0) + c5 (sqrt(s-t0) - sqrt(s-t))
    const [w0, w1] = fit.window;
    const inWin = s.t
      .map((t, k) => [t, s.g[k]!] as const)
      .filter(([t]) => t >= w0 && t <= w1);
    if (inWin.length === 0) return;
    const [t0, g0] = inWin[0]!;
    const et: number[] = [];
    const ev: number[] = [];
    for (const [t] of inWin) {
      et.push(t);
      ev.push(g0 + fit.c5 * (Math.sqrt(fit.s - t0) - Math.sqrt(fit.s - t)));
    }
    body.push(polyline(et, ev, sx, sy, color(i), "5 3"));
  });
  body.push(
    ...legend(
      series.map((s) => `eps = ${s.run.epsilon}`),
      "dashed: fitted envelope",
    ),
  );
  return document("weighted energy and fitted envelope", body);
}

/** Measured interface radius against the shrinking-circle oracle column. */
export function renderRadiusFigure(sweep: SweepData): string {
  const series = sweep.runs.map((run) => {
    requireColumns(run.table, ["time", "interface_radius", "oracle_radius"]);
    return {
      run,
      t: column(run.table, "time"),
      r: column(run.table, "interface_radius"),
      o: column(run.table, "oracle_radius"),
    };
  });
  const allT = series.flatMap((s) => s.t);
  const allR = series.flatMap((s) => [...s.r, ...s.o]);
  const sx = linearScale(allT, xRange());
  const sy = linearScale(allR, yRange());
  const body: string[] = [axes(sx, sy, "time", "interface radius")];
  series.forEach((s, i) => {
    body.push(polyline(s.t, s.r, sx, sy, color(i)));
    body.push(polyline(s.t, s.o, sx, sy, color(i), "5 3"));
  });
  body.push(
    ...legend(series.map((s) => `eps = ${s.run.epsilon}`), "dashed: oracle"),
  );
  return document("interface radius against the circle-flow oracle", body);
}

/** Histogram of per-sample dyadic density ratios, one per member. */
export function renderDensityFigure(sweep: SweepData): string {
  const series = sweep.runs.map((run) => {
    requireColumns(run.table, ["density_ratio_max"]);
    return {
      run,
      values: column(run.table, "density_ratio_max").filter(Number.isFinite),
    };
  });
  const all = series.flatMap((s) => s.values);
  if (all.length === 0) {
    throw new Error("density_ratio_max has no finite values to bin");
  }
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const nBins = 12;
  const width = (hi - lo) / nBins || 1;
  const counts = series.map((s) => {
    const c = new Array<number>(nBins).fill(0);
    for (const v of s.values) {
      const b = Math.min(nBins - 1, Math.floor((v - lo) / width));
      c[b]! += 1;
    }
    return c;
  });
  const maxCount = Math.max(...counts.flat());
  const sx = linearScale([lo, hi], xRange());
  const sy = linearScale([0, maxCount], yRange());
  const body: string[] = [axes(sx, sy, "density ratio", "samples")];
  const groups = series.length;
  counts.forEach((c, i) => {
    for (let b = 0; b < nBins; b++) {
      if (c[b] === 0) continue;
      const e0 = lo + b * width;
      const slot = (sx(e0 + width) - sx(e0)) / groups;
      const x = sx(e0) + i * slot;
      const y = sy(c[b]!);
      const h = sy(0) - y;
      body.push(
        `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${(slot * 0.92).toFixed(2)}" ` +
          `height="${h.toFixed(2)}" fill="${color(i)}" fill-opacity="0.75"/>`,
      );
    }
  });
  body.push(...legend(series.map((s) => `eps = ${s.run.epsilon}`)));
  return document("dyadic density ratios over the run", body);
}

export type { RunData, SweepData, Scale };

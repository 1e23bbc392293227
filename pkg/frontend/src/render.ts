/** Job plumbing: read a sweep directory, render one figure, write one file. */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { SweepData, readSweep } from "./artifacts.js";
import {
  renderDecayFigure,
  renderDensityFigure,
  renderEnvelopeFigure,
  renderRadiusFigure,
} from "./figures.js";

export const FIGURE_KINDS = ["decay", "envelope", "radius", "density"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface PlotJob {
  kind: FigureKind;
  sweepDir: string;
  outPath: string;
}

const RENDERERS: Record<FigureKind, (sweep: SweepData) => string> = {
  decay: renderDecayFigure,
  envelope: renderEnvelopeFigure,
  radius: renderRadiusFigure,
  density: renderDensityFigure,
};

/** Render a figure from sweep content; nothing reaches disk on failure. */
export function renderToString(kind: FigureKind, sweep: SweepData): string {
  const renderer = RENDERERS[kind];
  if (!renderer) {
    throw new Error(`unknown figure kind "${kind}"`);
  }
  return renderer(sweep);
}

export function render(job: PlotJob): string {
  const sweep = readSweep(job.sweepDir);
  const svg = renderToString(job.kind, sweep);
  mkdirSync(dirname(job.outPath), { recursive: true });
  writeFileSync(job.outPath, svg, "utf8");
  return job.outPath;
}

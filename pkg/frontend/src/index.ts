export { parseCsv, column, requireColumns } from "./csv.js";
export type { CsvTable } from "./csv.js";
export { readRun, readSweep, findCheck } from "./artifacts.js";
export type {
  MonotonicityFit,
  RunData,
  RunSummary,
  SweepData,
  SweepMeta,
  VerdictCheck,
  Verdicts,
} from "./artifacts.js";
export {
  renderDecayFigure,
  renderDensityFigure,
  renderEnvelopeFigure,
  renderRadiusFigure,
} from "./figures.js";
export { FIGURE_KINDS, render, renderToString } from "./render.js";
export type { FigureKind, PlotJob } from "./render.js";

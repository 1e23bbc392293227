/** Readers for the sweep artifacts: run directories, summaries, verdicts. */

import { readFileSync, readdirSync, statSync } from "node:fs";
import { join } from "node:path";

import { CsvTable, parseCsv } from "./csv.js";

export interface MonotonicityFit {
  c3: number;
  c4: number;
  c5: number;
  feasible: boolean;
  s: number;
  window: [number, number];
}

export interface RunSummary {
  epsilon: number;
  monotonicity: MonotonicityFit | null;
  [key: string]: unknown;
}

export interface RunData {
  dir: string;
  epsilon: number;
  table: CsvTable;
  summary: RunSummary;
}

export interface VerdictCheck {
  check: string;
  passed: boolean;
  measured: number;
  threshold: number;
  note: string;
}

export interface Verdicts {
  checks: VerdictCheck[];
}

export interface SweepMeta {
  sigma0: number;
  decay_points: [number, number][];
  [key: string]: unknown;
}

export interface SweepData {
  dir: string;
  runs: RunData[];
  meta: SweepMeta;
  verdicts: Verdicts;
}

function readJson(path: string): unknown {
  return JSON.parse(readFileSync(path, "utf8"));
}

export function readRun(dir: string): RunData {
  const csvPath = join(dir, "diagnostics.csv");
  const table = parseCsv(readFileSync(csvPath, "utf8"), csvPath);
  const summary = readJson(join(dir, "summary.json")) as RunSummary;
  return { dir, epsilon: summary.epsilon, table, summary };
}

/** Load a sweep directory: every eps_* member plus the sweep-level files. */
export function readSweep(dir: string): SweepData {
  const members = readdirSync(dir)
    .filter((name) => name.startsWith("eps_"))
    .sort()
    .map((name) => join(dir, name))
    .filter((p) => statSync(p).isDirectory());
  if (members.length === 0) {
    throw new Error(`${dir} contains no eps_* run directories`);
  }
  const runs = members.map(readRun);
  runs.sort((a, b) => b.epsilon - a.epsilon);
  const meta = readJson(join(dir, "sweep_meta.json")) as SweepMeta;
  const verdicts = readJson(join(dir, "verdicts.json")) as Verdicts;
  return { dir, runs, meta, verdicts };
}

/** The named check from the verdicts file; the error names the check. */
export function findCheck(verdicts: Verdicts, name: string): VerdictCheck {
  const check = verdicts.checks.find((c) => c.check === name);
  if (!check) {
    throw new Error(`verdicts file is missing check "${name}"`);
  }
  return check;
}

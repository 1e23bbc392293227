#!/usr/bin/env node
/**
 * Render sweep figures from the command line.
 *
 *   acflow-plots <decay|envelope|radius|density> --sweep DIR --out FILE.svg
 *   acflow-plots all --sweep DIR --out DIR
 */

import { join } from "node:path";

import { FIGURE_KINDS, FigureKind, render } from "./render.js";

function parseArgs(argv: string[]): { kind: string; sweep: string; out: string } {
  const [kind, ...rest] = argv;
  if (!kind) {
    throw new Error(
      `usage: acflow-plots <${FIGURE_KINDS.join("|")}|all> --sweep DIR --out PATH`,
    );
  }
  let sweep = "";
  let out = "";
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`flag ${flag} needs a value`);
    if (flag === "--sweep") sweep = value;
    else if (flag === "--out") out = value;
    else throw new Error(`unknown flag ${flag}`);
  }
  if (!sweep || !out) throw new Error("both --sweep and --out are required");
  return { kind, sweep, out };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  const jobs: { kind: FigureKind; outPath: string }[] = [];
  if (args.kind === "all") {
    for (const kind of FIGURE_KINDS) {
      jobs.push({ kind, outPath: join(args.out, `${kind}.svg`) });
    }
  } else if ((FIGURE_KINDS as readonly string[]).includes(args.kind)) {
    jobs.push({ kind: args.kind as FigureKind, outPath: args.out });
  } else {
    console.error(`unknown figure kind "${args.kind}"`);
    return 2;
  }
  try {
    for (const job of jobs) {
      const written = render({ ...job, sweepDir: args.sweep });
      console.log(written);
    }
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  return 0;
}

const isDirectRun =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}

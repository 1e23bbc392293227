import { mkdtempSync, readFileSync, cpSync, writeFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { beforeAll, describe, expect, it } from "vitest";

import { SweepData, findCheck, readSweep } from "../src/artifacts.js";
import {
  renderDecayFigure,
  renderDensityFigure,
  renderEnvelopeFigure,
  renderRadiusFigure,
} from "../src/figures.js";
import { render } from "../src/render.js";

const FIXTURE = join(__dirname, "fixtures", "smoke");

let sweep: SweepData;
beforeAll(() => {
  sweep = readSweep(FIXTURE);
});

const count = (svg: string, re: RegExp) => (svg.match(re) ?? []).length;

describe("sweep reading", () => {
  it("loads members sorted by descending epsilon", () => {
    expect(sweep.runs.map((r) => r.epsilon)).toEqual([0.08, 0.04]);
    expect(sweep.meta.sigma0).toBeCloseTo(4 / 3, 10);
  });

  it("names a missing verdict check", () => {
    expect(() => findCheck(sweep.verdicts, "no_such_check")).toThrow(
      /missing check "no_such_check"/,
    );
  });
});

describe("figure kinds", () => {
  it("renders the decay figure with the verdict annotation", () => {
    const svg = renderDecayFigure(sweep);
    const check = findCheck(sweep.verdicts, "discrepancy_decay");
    expect(svg.startsWith("<svg")).toBe(true);
    // annotated number equals the verdicts file to 3 decimals
    expect(svg).toContain(check.measured.toFixed(3));
    // smoke sweep sits at the measurement floor: no exponent is claimed
    expect(svg).toContain("at measurement floor");
    expect(svg).toContain("exactly zero");
  });

  it("annotates a fitted exponent when the verdict carries one", () => {
    const fitted: SweepData = {
      ...sweep,
      meta: { ...sweep.meta, decay_points: [[0.08, 5e-2], [0.04, 2e-3], [0.02, 9e-4]] },
      verdicts: {
        checks: [
          {
            check: "discrepancy_decay",
            passed: true,
            measured: 2.9069,
            threshold: 0.8,
            note: "log-log fit over 3 resolved members",
          },
        ],
      },
    };
    const svg = renderDecayFigure(fitted);
    expect(svg).toContain("fitted exponent 2.907");
    expect(count(svg, /<circle/g)).toBe(3);
  });

  it("renders one trace and one envelope per member", () => {
    const svg = renderEnvelopeFigure(sweep);
    expect(count(svg, /<polyline/g)).toBe(2 * sweep.runs.length);
    expect(count(svg, /stroke-dasharray/g)).toBe(sweep.runs.length);
    expect(svg).toContain("weighted energy");
    expect(svg).toContain("eps = 0.08");
  });

  it("overlays the oracle on the radius figure", () => {
    const svg = renderRadiusFigure(sweep);
    expect(count(svg, /<polyline/g)).toBe(2 * sweep.runs.length);
    expect(svg).toContain("dashed: oracle");
    expect(svg).toContain("interface radius");
  });

  it("bins density ratios into bars", () => {
    const svg = renderDensityFigure(sweep);
    expect(count(svg, /<rect /g)).toBeGreaterThan(sweep.runs.length);
    expect(svg).toContain("density ratio");
  });

  it("is a pure function of the artifact content", () => {
    expect(renderRadiusFigure(sweep)).toBe(renderRadiusFigure(sweep));
    expect(renderDecayFigure(sweep)).toBe(renderDecayFigure(sweep));
  });
});

describe("error contract", () => {
  function corruptedCopy(mutate: (dir: string) => void): string {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    cpSync(FIXTURE, dir, { recursive: true });
    mutate(dir);
    return dir;
  }

  it("names the missing column through the render path", () => {
    const dir = corruptedCopy((d) => {
      const csv = join(d, "eps_0.0400", "diagnostics.csv");
      const lines = readFileSync(csv, "utf8").split("\n");
      const cols = lines[0]!.split(",");
      const drop = cols.indexOf("G_value");
      const out = lines
        .filter((l) => l.trim().length > 0)
        .map((l) => l.split(",").filter((_, i) => i !== drop).join(","));
      writeFileSync(csv, out.join("\n") + "\n");
    });
    const out = join(dir, "fig.svg");
    expect(() => render({ kind: "envelope", sweepDir: dir, outPath: out }))
      .toThrow(/missing required column "G_value"/);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects an empty CSV and writes nothing", () => {
    const dir = corruptedCopy((d) => {
      writeFileSync(join(d, "eps_0.0800", "diagnostics.csv"), "");
    });
    const out = join(dir, "fig.svg");
    expect(() => render({ kind: "radius", sweepDir: dir, outPath: out }))
      .toThrow(/is empty/);
    expect(existsSync(out)).toBe(false);
  });

  it("writes the file on success", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-out-"));
    const out = join(dir, "nested", "decay.svg");
    expect(render({ kind: "decay", sweepDir: FIXTURE, outPath: out })).toBe(out);
    expect(readFileSync(out, "utf8")).toContain("</svg>");
  });
});

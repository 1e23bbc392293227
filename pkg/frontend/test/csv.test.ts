import { describe, expect, it } from "vitest";

import { column, parseCsv } from "../src/csv.js";

describe("parseCsv", () => {
  it("reads numeric cells and turns nan into NaN", () => {
    const t = parseCsv("a,b\n1,2\n3,nan\n", "t.csv");
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.rows[0]).toEqual([1, 2]);
    expect(t.rows[1]![0]).toBe(3);
    expect(Number.isNaN(t.rows[1]![1])).toBe(true);
  });

  it("rejects an empty file", () => {
    expect(() => parseCsv("", "empty.csv")).toThrow(/empty\.csv is empty/);
  });

  it("rejects a header-only file", () => {
    expect(() => parseCsv("a,b\n", "h.csv")).toThrow(/no data rows/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1\n", "r.csv")).toThrow(/row 1 has 1 cells/);
  });

  it("names the missing column", () => {
    const t = parseCsv("a,b\n1,2\n", "d.csv");
    expect(() => column(t, "G_value")).toThrow(
      /d\.csv is missing required column "G_value"/,
    );
  });
});

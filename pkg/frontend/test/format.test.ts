import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { sig6 } from "../src/format.js";

const cases: Record<string, string> = JSON.parse(
  readFileSync(new URL("./fixtures/format_cases.json", import.meta.url), "utf8"),
);

describe("sig6", () => {
  it("matches the CLI formatter on every fixture value", () => {
    for (const [raw, expected] of Object.entries(cases)) {
      expect(sig6(Number(raw)), `input ${raw}`).toBe(expected);
    }
  });

  it("handles non-finite values like the CLI", () => {
    expect(sig6(Number.NaN)).toBe("nan");
    expect(sig6(Infinity)).toBe("inf");
    expect(sig6(-Infinity)).toBe("-inf");
  });
});

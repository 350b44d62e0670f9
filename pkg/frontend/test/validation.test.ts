import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { validateRequest } from "../src/validation.js";

interface Case {
  body: { context?: object; profile?: object; weights?: object };
  status: number;
}

const cases: Case[] = JSON.parse(
  readFileSync(new URL("./fixtures/validation_cases.json", import.meta.url), "utf8"),
);

describe("validation mirror", () => {
  it("accepts exactly the bodies the service accepted", () => {
    for (const { body, status } of cases) {
      const problems = validateRequest(body);
      const ok = problems.size === 0;
      expect(ok, `${JSON.stringify(body)} -> ${[...problems.keys()]}`).toBe(
        status === 200,
      );
    }
  });

  it("names the offending field", () => {
    const problems = validateRequest({ context: { cap: { duty_cycle: 1.5 } } });
    expect(problems.has("cap.duty_cycle")).toBe(true);
    expect(validateRequest({ context: { made_up: 1 } }).has("made_up")).toBe(true);
  });
});

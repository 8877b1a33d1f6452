import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  computeTotals,
  finalScore,
  LogIntegrityError,
  parseSessionLog,
  serializeSessionLog,
} from "../src/log.js";

const FIXTURES = join(__dirname, "..", "fixtures");
const goldenText = readFileSync(join(FIXTURES, "golden_catch_log.jsonl"), "utf-8");

describe("parseSessionLog", () => {
  it("parses the golden log and exposes its totals", () => {
    const log = parseSessionLog(goldenText);
    expect(log.header.session_id).toBe("golden-catch");
    expect(log.header.version).toBe(1);
    expect(log.footer.frames).toBeGreaterThan(0);
    expect(finalScore(log)).toBe(log.footer.score);
  });

  it("round-trips through serialize", () => {
    const log = parseSessionLog(goldenText);
    const again = parseSessionLog(serializeSessionLog(log));
    expect(again).toEqual(log);
  });

  it("rejects a tampered footer", () => {
    const lines = goldenText.trim().split("\n");
    const footer = JSON.parse(lines[lines.length - 1]);
    footer.score += 1;
    lines[lines.length - 1] = JSON.stringify(footer);
    expect(() => parseSessionLog(lines.join("\n"))).toThrow(LogIntegrityError);
  });

  it("rejects a truncated log", () => {
    const lines = goldenText.trim().split("\n");
    expect(() => parseSessionLog(lines.slice(0, -1).join("\n"))).toThrow(LogIntegrityError);
  });

  it("rejects an unknown version", () => {
    const lines = goldenText.trim().split("\n");
    const header = JSON.parse(lines[0]);
    header.version = 99;
    lines[0] = JSON.stringify(header);
    expect(() => parseSessionLog(lines.join("\n"))).toThrow(LogIntegrityError);
  });

  it("rejects out-of-order timestamps", () => {
    const log = parseSessionLog(goldenText);
    const records = [...log.records];
    [records[0], records[1]] = [records[1], records[0]];
    const swapped = serializeSessionLog({ ...log, records });
    if (records[0].t === records[1].t) return; // nothing to detect
    expect(() => parseSessionLog(swapped)).toThrow(LogIntegrityError);
  });
});

describe("computeTotals", () => {
  it("agrees with the golden footer", () => {
    const log = parseSessionLog(goldenText);
    expect(computeTotals(log.records)).toEqual({
      frames: log.footer.frames,
      gestures: log.footer.gestures,
      game_events: log.footer.game_events,
      ratings: log.footer.ratings,
      score: log.footer.score,
      correct: log.footer.correct,
      answered: log.footer.answered,
    });
  });
});

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { parseSessionLog } from "../src/log.js";
import {
  CHARACTER_BASE_Y,
  CHARACTER_SUMMIT_Y,
  characterY,
  effectFor,
  mirrorX,
} from "../src/renderer.js";
import { CUE_TONES, cueOf } from "../src/audio.js";

const goldenText = readFileSync(
  join(__dirname, "..", "fixtures", "golden_catch_log.jsonl"),
  "utf-8",
);

describe("characterY", () => {
  it("is affine from base to summit over mastery 0..100", () => {
    expect(characterY(0)).toBeCloseTo(CHARACTER_BASE_Y, 12);
    expect(characterY(100)).toBeCloseTo(CHARACTER_SUMMIT_Y, 12);
    expect(characterY(50)).toBeCloseTo((CHARACTER_BASE_Y + CHARACTER_SUMMIT_Y) / 2, 12);
    // affine: equal mastery steps give equal height steps
    const step = characterY(20) - characterY(10);
    expect(characterY(80) - characterY(70)).toBeCloseTo(step, 12);
  });

  it("clamps out-of-range mastery", () => {
    expect(characterY(-10)).toBeCloseTo(CHARACTER_BASE_Y, 12);
    expect(characterY(140)).toBeCloseTo(CHARACTER_SUMMIT_Y, 12);
  });
});

describe("mirrorX", () => {
  it("reflects around the vertical midline only when mirroring", () => {
    expect(mirrorX(0.2, true)).toBeCloseTo(0.8);
    expect(mirrorX(0.2, false)).toBe(0.2);
    expect(mirrorX(mirrorX(0.37, true), true)).toBeCloseTo(0.37);
  });
});

describe("effectFor", () => {
  it("yields at most one visual effect per record", () => {
    const log = parseSessionLog(goldenText);
    for (const rec of log.records) {
      const effect = effectFor(rec, 0);
      expect(effect === null || typeof effect.kind === "string").toBe(true);
    }
  });

  it("maps pops and misses to distinct effects", () => {
    const log = parseSessionLog(goldenText);
    const popped = log.records.find((r) => r.rec === "game" && r.ev === "target_popped");
    expect(popped).toBeDefined();
    expect(effectFor(popped!, 5)).toMatchObject({ kind: "pop", bornMs: 5 });
    expect(effectFor({ rec: "frame", t: 0, p: 0 }, 0)).toBeNull();
  });
});

describe("audio cues", () => {
  it("has a tone for every cue in the golden log", () => {
    const log = parseSessionLog(goldenText);
    for (const rec of log.records) {
      const cue = cueOf(rec);
      if (cue !== null) {
        expect(CUE_TONES[cue], `missing tone for cue "${cue}"`).toBeDefined();
      }
    }
  });

  it("non-game records carry no cue", () => {
    expect(cueOf({ rec: "frame", t: 0, p: 0 })).toBeNull();
  });
});

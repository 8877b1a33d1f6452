import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterEach, describe, expect, it, vi } from "vitest";

import { parseSessionLog } from "../src/log.js";
import {
  parseTrace,
  ReplayPoseProvider,
  SessionLogPlayer,
  TraceParseError,
} from "../src/replay.js";
import type { LandmarkFrame } from "../src/types.js";

const FIXTURES = join(__dirname, "..", "fixtures");
const traceText = readFileSync(join(FIXTURES, "golden_catch_trace.jsonl"), "utf-8");
const logText = readFileSync(join(FIXTURES, "golden_catch_log.jsonl"), "utf-8");

class FakeClock {
  t = 0;
  now(): number {
    return this.t;
  }
}

describe("parseTrace", () => {
  it("parses the golden trace in order", () => {
    const frames = parseTrace(traceText);
    expect(frames.length).toBeGreaterThan(0);
    for (let i = 1; i < frames.length; i++) {
      expect(frames[i].t).toBeGreaterThanOrEqual(frames[i - 1].t);
    }
    expect(Object.keys(frames[0].lm)).toHaveLength(13);
  });

  it("rejects malformed lines with a line number", () => {
    expect(() => parseTrace('{"t": 0\n')).toThrow(TraceParseError);
    expect(() => parseTrace("# ok\nnot json")).toThrow(/line 2/);
  });

  it("rejects missing landmarks and bad slots", () => {
    expect(() => parseTrace('{"t":0,"p":0,"lm":{}}')).toThrow(/missing landmark/);
    const frames = parseTrace(traceText);
    const bad = JSON.stringify({ ...frames[0], p: 5 });
    expect(() => parseTrace(bad)).toThrow(/player slot/);
  });
});

describe("ReplayPoseProvider", () => {
  it("delivers frames in timestamp order as the clock advances", () => {
    const frames = parseTrace(traceText);
    const clock = new FakeClock();
    const provider = new ReplayPoseProvider(frames, clock);
    const seen: LandmarkFrame[] = [];
    provider.start((f) => seen.push(f));
    // 30 FPS pump
    while (!provider.done) {
      clock.t += 1000 / 30;
      provider.pump();
    }
    expect(seen).toEqual(frames);
  });

  it("delivers nothing after stop", () => {
    const frames = parseTrace(traceText);
    const clock = new FakeClock();
    const provider = new ReplayPoseProvider(frames, clock);
    let count = 0;
    provider.start(() => count++);
    provider.stop();
    clock.t = 1e9;
    provider.pump();
    expect(count).toBe(0);
  });
});

describe("SessionLogPlayer", () => {
  it("reaches the golden final score when streamed at 30 FPS", () => {
    // Mock landmark provider + log player stepped together at 30 FPS:
    // the on-screen score at the end must equal the golden log's score.
    const log = parseSessionLog(logText);
    const provider = new ReplayPoseProvider(parseTrace(traceText), new FakeClock());
    const player = new SessionLogPlayer(log);
    let t = 0;
    while (!player.done) {
      t += 1000 / 30;
      player.advanceTo(t);
    }
    expect(player.state.score).toBe(log.footer.score);
    expect(player.state.correct).toBe(log.footer.correct);
    expect(player.state.answered).toBe(log.footer.answered);
    expect(player.state.ended).toBe(true);
    expect(provider.done).toBe(false); // provider untouched: no coupling
  });

  it("applies events at most once and in order", () => {
    const log = parseSessionLog(logText);
    const player = new SessionLogPlayer(log);
    const first = player.advanceTo(1000);
    const again = player.advanceTo(1000);
    expect(again).toHaveLength(0);
    const rest = player.advanceTo(Number.MAX_SAFE_INTEGER);
    expect(first.length + rest.length).toBe(log.records.length);
  });

  it("mastery is monotone during playback", () => {
    const log = parseSessionLog(logText);
    const player = new SessionLogPlayer(log);
    let t = 0;
    let last = 0;
    while (!player.done) {
      t += 100;
      player.advanceTo(t);
      expect(player.state.mastery).toBeGreaterThanOrEqual(last);
      last = player.state.mastery;
    }
  });
});

describe("privacy", () => {
  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it("performs zero network transmissions while replaying a session", () => {
    const guard = vi.fn(() => {
      throw new Error("network use during session");
    });
    vi.stubGlobal("fetch", guard);
    vi.stubGlobal("XMLHttpRequest", guard);
    vi.stubGlobal("WebSocket", guard);

    const frames = parseTrace(traceText);
    const log = parseSessionLog(logText);
    const clock = new FakeClock();
    const provider = new ReplayPoseProvider(frames, clock);
    const player = new SessionLogPlayer(log);
    provider.start(() => undefined);
    while (!provider.done || !player.done) {
      clock.t += 1000 / 30;
      provider.pump();
      player.advanceTo(clock.t);
    }
    expect(guard).not.toHaveBeenCalled();
  });
});

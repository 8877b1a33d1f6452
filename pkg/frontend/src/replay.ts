/**
 * Replay sources: a pose provider that streams a recorded landmark trace
 * and a session player that re-emits a session log's events on a clock.
 * Both run entirely in-page from local data; nothing is transmitted.
 */

import type { LogRecord, SessionLog } from "./log.js";
import { LANDMARK_NAMES } from "./types.js";
import type { Landmark, LandmarkFrame, LandmarkName, PoseProviderAdapter } from "./types.js";

export class TraceParseError extends Error {}

/** Parse a landmark trace (JSON Lines; '#' comments allowed). */
export function parseTrace(text: string): LandmarkFrame[] {
  const frames: LandmarkFrame[] = [];
  let lastT = -Infinity;
  const rawLines = text.split("\n");
  for (let i = 0; i < rawLines.length; i++) {
    const line = rawLines[i].trim();
    if (line.length === 0 || line.startsWith("#")) continue;
    let obj: { t?: unknown; p?: unknown; lm?: Record<string, unknown> };
    try {
      obj = JSON.parse(line);
    } catch {
      throw new TraceParseError(`line ${i + 1}: not valid JSON`);
    }
    if (typeof obj.t !== "number" || obj.t < 0 || obj.t < lastT) {
      throw new TraceParseError(`line ${i + 1}: bad or out-of-order timestamp`);
    }
    if (obj.p !== 0 && obj.p !== 1) {
      throw new TraceParseError(`line ${i + 1}: bad player slot`);
    }
    const lm = {} as Record<LandmarkName, Landmark>;
    for (const name of LANDMARK_NAMES) {
      const point = obj.lm?.[name];
      if (!Array.isArray(point) || point.length !== 3) {
        throw new TraceParseError(`line ${i + 1}: missing landmark ${name}`);
      }
      lm[name] = [point[0], point[1], point[2]];
    }
    lastT = obj.t;
    frames.push({ t: obj.t, p: obj.p, lm });
  }
  return frames;
}

export interface Clock {
  /** Milliseconds since an arbitrary epoch. */
  now(): number;
}

/**
 * Pose provider that replays a recorded trace in real time (scaled by
 * `rate`). Used as the guided fallback when the camera is denied and as
 * the mock provider in tests. Frames are emitted in order; frames whose
 * time has already passed are delivered on the next tick, never reordered.
 */
export class ReplayPoseProvider implements PoseProviderAdapter {
  private frames: LandmarkFrame[];
  private cursor = 0;
  private startedAt: number | null = null;
  private sink: ((frame: LandmarkFrame) => void) | null = null;

  constructor(
    frames: LandmarkFrame[],
    private clock: Clock = { now: () => performance.now() },
    private rate = 1.0,
  ) {
    this.frames = frames;
  }

  get done(): boolean {
    return this.cursor >= this.frames.length;
  }

  start(sink: (frame: LandmarkFrame) => void): void {
    this.sink = sink;
    this.startedAt = this.clock.now();
    this.cursor = 0;
  }

  stop(): void {
    this.sink = null;
    this.startedAt = null;
  }

  /** Deliver every frame whose timestamp has elapsed. Call once per tick. */
  pump(): number {
    if (this.sink === null || this.startedAt === null) return 0;
    const elapsed = (this.clock.now() - this.startedAt) * this.rate;
    let delivered = 0;
    while (this.cursor < this.frames.length && this.frames[this.cursor].t <= elapsed) {
      this.sink(this.frames[this.cursor]);
      this.cursor += 1;
      delivered += 1;
    }
    return delivered;
  }
}

export interface PlayerState {
  score: number;
  streak: number;
  mastery: number;
  answered: number;
  correct: number;
  questionPrompt: string;
  questionIndex: number;
  ended: boolean;
}

/**
 * Replays a completed session log against a clock, exposing the engine's
 * state as of the current playback time. All scoring comes from the log —
 * the UI itself contains no grading logic.
 */
export class SessionLogPlayer {
  private cursor = 0;
  readonly state: PlayerState = {
    score: 0,
    streak: 0,
    mastery: 0,
    answered: 0,
    correct: 0,
    questionPrompt: "",
    questionIndex: 0,
    ended: false,
  };

  constructor(private log: SessionLog) {}

  get done(): boolean {
    return this.cursor >= this.log.records.length;
  }

  /** Advance to `timeMs`, returning the records that became due. */
  advanceTo(timeMs: number): LogRecord[] {
    const due: LogRecord[] = [];
    while (this.cursor < this.log.records.length && this.log.records[this.cursor].t <= timeMs) {
      const rec = this.log.records[this.cursor];
      this.cursor += 1;
      this.apply(rec);
      due.push(rec);
    }
    return due;
  }

  private apply(rec: LogRecord): void {
    if (rec.rec !== "game") return;
    switch (rec.ev) {
      case "question_start":
        this.state.questionPrompt = String(rec.prompt ?? "");
        this.state.questionIndex = Number(rec.index ?? 0);
        break;
      case "answer_correct":
      case "answer_incorrect":
        this.state.score = Number(rec.score);
        this.state.streak = Number(rec.streak);
        this.state.mastery = Number(rec.mastery);
        this.state.answered += 1;
        if (rec.ev === "answer_correct") this.state.correct += 1;
        break;
      case "round_end":
        this.state.ended = true;
        break;
    }
  }
}

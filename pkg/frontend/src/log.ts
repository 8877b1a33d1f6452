/**
 * Session-log reader/writer. The format is JSON Lines with an integrity-
 * checked header and footer (docs/formats.md); a log whose footer totals
 * disagree with its body is rejected.
 */

import type { EndCondition, GameMode } from "./types.js";

export const LOG_VERSION = 1;

export interface LogHeader {
  rec: "hdr";
  version: number;
  session_id: string;
  seed: number;
  mode: GameMode;
  end: EndCondition;
  players: number;
  mirror: boolean;
  alpha: number;
  amplitude_scale: number;
}

export interface FrameRecord {
  rec: "frame";
  t: number;
  p: number;
}

export interface GestureRecord {
  rec: "gesture";
  t: number;
  p: number;
  kind: string;
  part: string;
  pos: [number, number];
  count: number;
}

export interface GameRecord {
  rec: "game";
  t: number;
  ev: string;
  [key: string]: unknown;
}

export interface RatingRecord {
  rec: "rating";
  t: number;
  value: number;
  moment: string;
}

export interface LogFooter {
  rec: "ftr";
  frames: number;
  gestures: number;
  game_events: number;
  ratings: number;
  score: number;
  correct: number;
  answered: number;
}

export type LogRecord = FrameRecord | GestureRecord | GameRecord | RatingRecord;

export interface SessionLog {
  header: LogHeader;
  records: LogRecord[];
  footer: LogFooter;
}

export class LogIntegrityError extends Error {}

function fail(message: string): never {
  throw new LogIntegrityError(message);
}

export function computeTotals(records: LogRecord[]): Omit<LogFooter, "rec"> {
  let frames = 0;
  let gestures = 0;
  let gameEvents = 0;
  let ratings = 0;
  let score = 0;
  let correct = 0;
  let answered = 0;
  for (const rec of records) {
    switch (rec.rec) {
      case "frame":
        frames += 1;
        break;
      case "gesture":
        gestures += 1;
        break;
      case "game": {
        gameEvents += 1;
        const ev = rec.ev;
        if (ev === "answer_correct" || ev === "answer_incorrect") {
          answered += 1;
          score = rec.score as number;
          if (ev === "answer_correct") correct += 1;
        }
        break;
      }
      case "rating":
        ratings += 1;
        break;
    }
  }
  return { frames, gestures, game_events: gameEvents, ratings, score, correct, answered };
}

export function parseSessionLog(text: string): SessionLog {
  const lines = text
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0 && !line.startsWith("#"));
  if (lines.length < 2) fail("log must contain a header and a footer");

  const parsed = lines.map((line, i) => {
    try {
      return JSON.parse(line) as { rec?: string };
    } catch {
      fail(`line ${i + 1}: not valid JSON`);
    }
  });

  const header = parsed[0] as LogHeader;
  if (header.rec !== "hdr") fail("first record must be the header");
  if (header.version !== LOG_VERSION) {
    fail(`unsupported log version ${header.version}`);
  }
  const footer = parsed[parsed.length - 1] as LogFooter;
  if (footer.rec !== "ftr") fail("last record must be the footer");

  const records = parsed.slice(1, -1) as LogRecord[];
  let lastT = -Infinity;
  for (const rec of records) {
    if (!["frame", "gesture", "game", "rating"].includes(rec.rec)) {
      fail(`unknown record type ${String(rec.rec)}`);
    }
    if (typeof rec.t !== "number" || rec.t < lastT) {
      fail("timestamps must be non-decreasing");
    }
    lastT = rec.t;
  }

  const totals = computeTotals(records);
  for (const [key, value] of Object.entries(totals)) {
    if ((footer as unknown as Record<string, unknown>)[key] !== value) {
      fail(`footer ${key} disagrees with log body`);
    }
  }
  return { header, records, footer };
}

export function serializeSessionLog(log: SessionLog): string {
  const lines = [JSON.stringify(log.header)];
  for (const rec of log.records) lines.push(JSON.stringify(rec));
  lines.push(JSON.stringify(log.footer));
  return lines.join("\n") + "\n";
}

export function finalScore(log: SessionLog): number {
  return log.footer.score;
}

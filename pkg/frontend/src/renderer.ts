/**
 * Canvas scene renderer. Pure layout math (character height, mirroring,
 * cue→effect mapping) is kept separate from drawing so it can be tested
 * headlessly.
 */

import type { GameRecord, LogRecord } from "./log.js";
import type { Landmark, LandmarkFrame, LandmarkName } from "./types.js";

export const CHARACTER_BASE_Y = 0.92;
export const CHARACTER_SUMMIT_Y = 0.08;

/**
 * Vertical position of the climbing character: an affine function of
 * mastery, from base (mastery 0) to summit (mastery 100).
 */
export function characterY(mastery: number): number {
  const m = Math.min(100, Math.max(0, mastery)) / 100;
  return CHARACTER_BASE_Y + (CHARACTER_SUMMIT_Y - CHARACTER_BASE_Y) * m;
}

export function mirrorX(x: number, mirror: boolean): number {
  return mirror ? 1 - x : x;
}

export interface VisualEffect {
  kind: "pop" | "buzz" | "sparkle" | "tick" | "banner";
  x: number;
  y: number;
  text?: string;
  bornMs: number;
}

const EFFECT_BY_EVENT: Record<string, VisualEffect["kind"] | undefined> = {
  target_popped: "pop",
  target_ditched: "pop",
  hit_incorrect: "buzz",
  answer_correct: "sparkle",
  answer_incorrect: "buzz",
  knee_count: "tick",
  question_start: "banner",
  round_end: "banner",
};

/**
 * Map a log record to at most one visual effect. Events without a visual
 * mapping (frame refs, grabs, spawns...) return null.
 */
export function effectFor(rec: LogRecord, nowMs: number): VisualEffect | null {
  if (rec.rec !== "game") return null;
  const game = rec as GameRecord;
  const kind = EFFECT_BY_EVENT[game.ev];
  if (kind === undefined) return null;
  const x = typeof game.x === "number" ? game.x : 0.5;
  const y = typeof game.y === "number" ? game.y : 0.4;
  let text: string | undefined;
  if (game.ev === "question_start") text = String(game.prompt ?? "");
  if (game.ev === "round_end") text = `Round over — score ${String(game.score)}`;
  if (game.ev === "knee_count") text = String(game.count);
  return { kind, x, y, text, bornMs: nowMs };
}

export const EFFECT_TTL_MS = 700;

export const SKELETON_EDGES: [LandmarkName, LandmarkName][] = [
  ["head", "left_shoulder"],
  ["head", "right_shoulder"],
  ["left_shoulder", "right_shoulder"],
  ["left_shoulder", "left_elbow"],
  ["left_elbow", "left_wrist"],
  ["right_shoulder", "right_elbow"],
  ["right_elbow", "right_wrist"],
  ["left_shoulder", "left_hip"],
  ["right_shoulder", "right_hip"],
  ["left_hip", "right_hip"],
  ["left_hip", "left_knee"],
  ["left_knee", "left_ankle"],
  ["right_hip", "right_knee"],
  ["right_knee", "right_ankle"],
];

export const PLAYER_COLORS = ["#4fc3f7", "#ffb74d"];

export interface SceneTarget {
  id: number;
  label: string;
  x: number;
  y: number;
}

export class Renderer {
  private effects: VisualEffect[] = [];
  targets = new Map<number, SceneTarget>();

  constructor(
    private ctx: CanvasRenderingContext2D,
    private width: number,
    private height: number,
  ) {}

  /** Track target lifecycle and enqueue effects for a batch of records. */
  ingest(records: LogRecord[], nowMs: number): void {
    for (const rec of records) {
      if (rec.rec === "game") {
        if (rec.ev === "target_spawn") {
          this.targets.set(Number(rec.target), {
            id: Number(rec.target),
            label: String(rec.label ?? ""),
            x: Number(rec.x ?? 0.5),
            y: Number(rec.y ?? 0.5),
          });
        } else if (
          rec.ev === "target_popped" ||
          rec.ev === "target_ditched" ||
          rec.ev === "target_expired" ||
          rec.ev === "question_end"
        ) {
          if (rec.ev === "question_end") this.targets.clear();
          else this.targets.delete(Number(rec.target));
        }
      }
      const effect = effectFor(rec, nowMs);
      if (effect !== null) this.effects.push(effect);
    }
  }

  draw(
    nowMs: number,
    mastery: number,
    mirror: boolean,
    poses: Map<number, LandmarkFrame>,
    showSelf: boolean,
  ): void {
    const { ctx, width: w, height: h } = this;
    ctx.fillStyle = "#10141c";
    ctx.fillRect(0, 0, w, h);

    if (showSelf) {
      for (const [slot, frame] of poses) {
        this.drawSkeleton(frame, PLAYER_COLORS[slot % PLAYER_COLORS.length], mirror);
      }
    }

    ctx.font = `${Math.round(h * 0.035)}px sans-serif`;
    ctx.textAlign = "center";
    for (const target of this.targets.values()) {
      const x = mirrorX(target.x, false) * w;
      const y = target.y * h;
      ctx.beginPath();
      ctx.arc(x, y, h * 0.05, 0, Math.PI * 2);
      ctx.fillStyle = "#2e7d32";
      ctx.fill();
      ctx.fillStyle = "#ffffff";
      ctx.fillText(target.label, x, y + h * 0.012);
    }

    this.drawCharacter(mastery);
    this.drawEffects(nowMs);
  }

  private drawSkeleton(frame: LandmarkFrame, color: string, mirror: boolean): void {
    const { ctx, width: w, height: h } = this;
    ctx.strokeStyle = color;
    ctx.lineWidth = 3;
    const point = (lm: Landmark): [number, number] => [mirrorX(lm[0], mirror) * w, lm[1] * h];
    for (const [a, b] of SKELETON_EDGES) {
      const la = frame.lm[a];
      const lb = frame.lm[b];
      if (la[2] < 0.5 || lb[2] < 0.5) continue;
      const [ax, ay] = point(la);
      const [bx, by] = point(lb);
      ctx.beginPath();
      ctx.moveTo(ax, ay);
      ctx.lineTo(bx, by);
      ctx.stroke();
    }
  }

  private drawCharacter(mastery: number): void {
    const { ctx, width: w, height: h } = this;
    const x = w * 0.96;
    ctx.strokeStyle = "#616161";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(x, CHARACTER_SUMMIT_Y * h);
    ctx.lineTo(x, CHARACTER_BASE_Y * h);
    ctx.stroke();
    ctx.fillStyle = "#ef5350";
    ctx.beginPath();
    ctx.arc(x, characterY(mastery) * h, 8, 0, Math.PI * 2);
    ctx.fill();
  }

  private drawEffects(nowMs: number): void {
    const { ctx, width: w, height: h } = this;
    this.effects = this.effects.filter((e) => nowMs - e.bornMs < EFFECT_TTL_MS);
    for (const effect of this.effects) {
      const age = (nowMs - effect.bornMs) / EFFECT_TTL_MS;
      ctx.globalAlpha = 1 - age;
      const x = effect.x * w;
      const y = effect.y * h;
      switch (effect.kind) {
        case "pop":
        case "sparkle":
          ctx.strokeStyle = effect.kind === "pop" ? "#aed581" : "#fff176";
          ctx.lineWidth = 2;
          ctx.beginPath();
          ctx.arc(x, y, h * (0.04 + 0.08 * age), 0, Math.PI * 2);
          ctx.stroke();
          break;
        case "buzz":
          ctx.strokeStyle = "#e57373";
          ctx.lineWidth = 4;
          ctx.strokeRect(4, 4, w - 8, h - 8);
          break;
        case "tick":
        case "banner":
          ctx.fillStyle = "#ffffff";
          ctx.font = `${Math.round(h * (effect.kind === "tick" ? 0.1 : 0.05))}px sans-serif`;
          ctx.textAlign = "center";
          ctx.fillText(effect.text ?? "", w / 2, effect.kind === "tick" ? h * 0.25 : h * 0.12);
          break;
      }
      ctx.globalAlpha = 1;
    }
  }
}

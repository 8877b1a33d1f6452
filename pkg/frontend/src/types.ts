/** Shared domain types. Mirrors the engine's trace/log schemas (docs/formats.md). */

export const LANDMARK_NAMES = [
  "head",
  "left_shoulder", "right_shoulder",
  "left_elbow", "right_elbow",
  "left_wrist", "right_wrist",
  "left_hip", "right_hip",
  "left_knee", "right_knee",
  "left_ankle", "right_ankle",
] as const;

export type LandmarkName = (typeof LANDMARK_NAMES)[number];

/** [x, y, confidence] with x, y normalized to the camera frame. */
export type Landmark = [number, number, number];

export interface LandmarkFrame {
  /** Capture timestamp in ms from session start; non-decreasing. */
  t: number;
  /** Player slot (0 or 1). */
  p: number;
  lm: Record<LandmarkName, Landmark>;
}

/**
 * Adapter contract for any on-device pose source (camera model, replay,
 * mock). Implementations map provider keypoints onto the 13 engine
 * landmark names, supply timestamps, and report per-point confidence.
 * Frames must be delivered in timestamp order; the adapter never sends
 * frame data over the network.
 */
export interface PoseProviderAdapter {
  /** Begin delivering frames to the sink, in timestamp order. */
  start(sink: (frame: LandmarkFrame) => void): void;
  stop(): void;
  /** True once the source is exhausted (always false for live capture). */
  readonly done: boolean;
}

export type EndCondition =
  | { kind: "mastery"; n: number }
  | { kind: "time"; seconds: number };

export const GAME_MODES = [
  "central_tendency_catch",
  "elbow_skew",
  "knee_count",
  "outlier_ditch",
  "coordinate_quest",
  "collaborative_mixed",
] as const;

export type GameMode = (typeof GAME_MODES)[number];

/** UI settings and their mapping onto engine configuration. */

import type { EndCondition, GameMode } from "./types.js";

export interface UiSettings {
  mode: GameMode;
  end: EndCondition;
  /** Seated / low-amplitude play: shrinks gesture thresholds. */
  seated: boolean;
  /** Mirror the video and landmarks so the scene behaves like a mirror. */
  mirror: boolean;
  /** Draw the self-view video/skeleton behind the scene. */
  showSelf: boolean;
  audio: boolean;
}

export const DEFAULT_SETTINGS: UiSettings = {
  mode: "central_tendency_catch",
  end: { kind: "mastery", n: 5 },
  seated: false,
  mirror: true,
  showSelf: true,
  audio: true,
};

export const SEATED_AMPLITUDE_SCALE = 0.6;

/** The gesture threshold scale the engine receives; always in (0, 1]. */
export function amplitudeScale(settings: UiSettings): number {
  return settings.seated ? SEATED_AMPLITUDE_SCALE : 1.0;
}

const STORAGE_KEY = "movelit.settings";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

/** Settings persist locally only; nothing is sent anywhere. */
export function loadSettings(store: KeyValueStore): UiSettings {
  const raw = store.getItem(STORAGE_KEY);
  if (raw === null) return { ...DEFAULT_SETTINGS };
  try {
    return { ...DEFAULT_SETTINGS, ...(JSON.parse(raw) as Partial<UiSettings>) };
  } catch {
    return { ...DEFAULT_SETTINGS };
  }
}

export function saveSettings(store: KeyValueStore, settings: UiSettings): void {
  store.setItem(STORAGE_KEY, JSON.stringify(settings));
}

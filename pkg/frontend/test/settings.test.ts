import { describe, expect, it } from "vitest";

import {
  amplitudeScale,
  DEFAULT_SETTINGS,
  loadSettings,
  saveSettings,
  SEATED_AMPLITUDE_SCALE,
} from "../src/settings.js";
import type { KeyValueStore } from "../src/settings.js";

class MemoryStore implements KeyValueStore {
  private data = new Map<string, string>();
  getItem(key: string): string | null {
    return this.data.get(key) ?? null;
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}

describe("amplitudeScale", () => {
  it("is 1.0 for standing play", () => {
    expect(amplitudeScale({ ...DEFAULT_SETTINGS, seated: false })).toBe(1.0);
  });

  it("drops to 0.6 when the seated toggle is on", () => {
    expect(amplitudeScale({ ...DEFAULT_SETTINGS, seated: true })).toBe(0.6);
    expect(SEATED_AMPLITUDE_SCALE).toBeGreaterThan(0);
    expect(SEATED_AMPLITUDE_SCALE).toBeLessThanOrEqual(1);
  });
});

describe("defaults", () => {
  it("mirror and show-self default to on", () => {
    expect(DEFAULT_SETTINGS.mirror).toBe(true);
    expect(DEFAULT_SETTINGS.showSelf).toBe(true);
  });
});

describe("persistence", () => {
  it("round-trips through a local store", () => {
    const store = new MemoryStore();
    const settings = { ...DEFAULT_SETTINGS, seated: true, audio: false };
    saveSettings(store, settings);
    expect(loadSettings(store)).toEqual(settings);
  });

  it("falls back to defaults on empty or corrupt data", () => {
    const store = new MemoryStore();
    expect(loadSettings(store)).toEqual(DEFAULT_SETTINGS);
    store.setItem("movelit.settings", "{nope");
    expect(loadSettings(store)).toEqual(DEFAULT_SETTINGS);
  });
});

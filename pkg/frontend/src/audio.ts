/**
 * Audio cues: short synthesized tones keyed by the `cue` field of game
 * records. At most one tone plays per event; silent when disabled or when
 * WebAudio is unavailable.
 */

import type { LogRecord } from "./log.js";

interface Tone {
  freq: number;
  durationMs: number;
  type: OscillatorType;
}

export const CUE_TONES: Record<string, Tone> = {
  question: { freq: 523, durationMs: 180, type: "sine" },
  pop: { freq: 880, durationMs: 90, type: "triangle" },
  grab: { freq: 660, durationMs: 70, type: "sine" },
  whoosh: { freq: 330, durationMs: 150, type: "sawtooth" },
  buzz: { freq: 165, durationMs: 220, type: "square" },
  tick: { freq: 988, durationMs: 60, type: "sine" },
  success: { freq: 1047, durationMs: 250, type: "sine" },
  finale: { freq: 784, durationMs: 600, type: "sine" },
};

export function cueOf(rec: LogRecord): string | null {
  if (rec.rec !== "game") return null;
  const cue = (rec as { cue?: unknown }).cue;
  return typeof cue === "string" ? cue : null;
}

export class AudioCues {
  private ctx: AudioContext | null = null;
  enabled = true;

  private ensureContext(): AudioContext | null {
    if (this.ctx === null && typeof AudioContext !== "undefined") {
      this.ctx = new AudioContext();
    }
    return this.ctx;
  }

  /** Play the tone for each record that carries a cue; one tone per event. */
  play(records: LogRecord[]): void {
    if (!this.enabled) return;
    const ctx = this.ensureContext();
    if (ctx === null) return;
    for (const rec of records) {
      const cue = cueOf(rec);
      if (cue === null) continue;
      const tone = CUE_TONES[cue];
      if (tone === undefined) continue;
      const osc = ctx.createOscillator();
      const gain = ctx.createGain();
      osc.type = tone.type;
      osc.frequency.value = tone.freq;
      gain.gain.setValueAtTime(0.12, ctx.currentTime);
      gain.gain.exponentialRampToValueAtTime(0.001, ctx.currentTime + tone.durationMs / 1000);
      osc.connect(gain).connect(ctx.destination);
      osc.start();
      osc.stop(ctx.currentTime + tone.durationMs / 1000);
    }
  }
}

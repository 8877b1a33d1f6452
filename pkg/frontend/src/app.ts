/**
 * App entry point. Wires settings, the pose provider, the session-log
 * player, the canvas renderer, and audio cues into a requestAnimationFrame
 * loop. Runs as a static page; the only resources loaded are local fixture
 * files, and no frame or image data ever leaves the page.
 *
 * Live camera capture plugs in behind PoseProviderAdapter; when a camera is
 * unavailable (or permission is denied) the app falls back to replay/demo
 * mode driven by a recorded session, which is also what automated checks use.
 */

import { AudioCues } from "./audio.js";
import { parseSessionLog, serializeSessionLog } from "./log.js";
import type { SessionLog } from "./log.js";
import { Renderer } from "./renderer.js";
import { parseTrace, ReplayPoseProvider, SessionLogPlayer } from "./replay.js";
import { amplitudeScale, loadSettings, saveSettings } from "./settings.js";
import type { UiSettings } from "./settings.js";
import type { LandmarkFrame } from "./types.js";

const TRACE_URL = "./fixtures/golden_catch_trace.jsonl";
const LOG_URL = "./fixtures/golden_catch_log.jsonl";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

class App {
  private renderer: Renderer;
  private audio = new AudioCues();
  private settings: UiSettings;
  private provider: ReplayPoseProvider | null = null;
  private player: SessionLogPlayer | null = null;
  private log: SessionLog | null = null;
  private poses = new Map<number, LandmarkFrame>();
  private sessionStart = 0;
  private frameCount = 0;
  private fpsWindowStart = 0;
  private running = false;

  constructor() {
    const canvas = el<HTMLCanvasElement>("scene");
    const ctx = canvas.getContext("2d");
    if (ctx === null) throw new Error("2d canvas unsupported");
    this.renderer = new Renderer(ctx, canvas.width, canvas.height);
    this.settings = loadSettings(localStorage);
    this.bindControls();
    this.showSettings();
  }

  private bindControls(): void {
    el<HTMLButtonElement>("start").addEventListener("click", () => void this.start());
    el<HTMLButtonElement>("download").addEventListener("click", () => this.download());
    for (const key of ["seated", "mirror", "showSelf", "audio"] as const) {
      el<HTMLInputElement>(key).addEventListener("change", (evt) => {
        this.settings = { ...this.settings, [key]: (evt.target as HTMLInputElement).checked };
        saveSettings(localStorage, this.settings);
        this.showSettings();
      });
    }
  }

  private showSettings(): void {
    for (const key of ["seated", "mirror", "showSelf", "audio"] as const) {
      el<HTMLInputElement>(key).checked = this.settings[key];
    }
    el<HTMLSpanElement>("amplitude").textContent = amplitudeScale(this.settings).toFixed(1);
    this.audio.enabled = this.settings.audio;
  }

  private async start(): Promise<void> {
    const [traceText, logText] = await Promise.all([
      fetch(TRACE_URL).then((r) => r.text()),
      fetch(LOG_URL).then((r) => r.text()),
    ]);
    this.log = parseSessionLog(logText);
    this.player = new SessionLogPlayer(this.log);
    this.provider = new ReplayPoseProvider(parseTrace(traceText));
    this.provider.start((frame) => this.poses.set(frame.p, frame));
    this.sessionStart = performance.now();
    this.fpsWindowStart = this.sessionStart;
    this.frameCount = 0;
    if (!this.running) {
      this.running = true;
      requestAnimationFrame((t) => this.tick(t));
    }
  }

  private tick(nowMs: number): void {
    if (this.provider !== null && this.player !== null) {
      this.provider.pump();
      const elapsed = nowMs - this.sessionStart;
      const due = this.player.advanceTo(elapsed);
      this.renderer.ingest(due, nowMs);
      this.audio.play(due);
      this.renderer.draw(
        nowMs,
        this.player.state.mastery,
        this.settings.mirror,
        this.poses,
        this.settings.showSelf,
      );
      this.updateHud(nowMs);
    }
    requestAnimationFrame((t) => this.tick(t));
  }

  private updateHud(nowMs: number): void {
    const state = this.player!.state;
    el<HTMLSpanElement>("score").textContent = String(state.score);
    el<HTMLSpanElement>("mastery").textContent = String(state.mastery);
    el<HTMLSpanElement>("prompt").textContent = state.ended
      ? "Session complete"
      : state.questionPrompt;
    this.frameCount += 1;
    const windowMs = nowMs - this.fpsWindowStart;
    if (windowMs >= 1000) {
      el<HTMLSpanElement>("fps").textContent = ((this.frameCount * 1000) / windowMs).toFixed(0);
      this.frameCount = 0;
      this.fpsWindowStart = nowMs;
    }
    el<HTMLButtonElement>("download").disabled = !state.ended;
  }

  /** Offer the completed session log as a local file download. */
  private download(): void {
    if (this.log === null) return;
    const blob = new Blob([serializeSessionLog(this.log)], { type: "application/json" });
    const url = URL.createObjectURL(blob);
    const a = document.createElement("a");
    a.href = url;
    a.download = `${this.log.header.session_id}.jsonl`;
    a.click();
    URL.revokeObjectURL(url);
  }
}

new App();

"""Session logging, deterministic replay, and engagement summaries.

A SessionLog is line-delimited JSON: a tagged header line, timestamp-ordered
records (frame refs, gesture events, game events, feeling-scale ratings),
and a footer whose totals are recomputable from the records. Replaying the
same trace with the same config yields a byte-identical log.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Union

from . import traces
from .errors import LogIntegrityError, ScaleUnavailableError
from .game import (GameConfig, GameMode, GameState, MasteryCount, Phase,
                   TimeLimit, new_round, start, step)
from .gesture import GestureConfig, GestureState, detect
from .landmarks import (BodyScale, CleanFrame, IngestConfig, LandmarkFrame,
                        SmoothConfig, SmoothState, body_scale, ingest, mirror,
                        smooth)

LOG_VERSION = 1

RATING_PHASES = ("pre", "mid", "post")


@dataclass(frozen=True)
class FeelingScaleRating:
    """11-point affective valence rating, -5..+5."""

    value: int
    phase: str
    timestamp_ms: int

    def __post_init__(self):
        if not -5 <= self.value <= 5:
            raise ValueError("feeling scale value outside [-5, 5]")
        if self.phase not in RATING_PHASES:
            raise ValueError(f"unknown rating phase {self.phase!r}")


@dataclass(frozen=True)
class EngineConfig:
    """Everything needed to replay a trace deterministically."""

    mode: GameMode = GameMode.CENTRAL_TENDENCY_CATCH
    seed: int = 0
    game: GameConfig = field(default_factory=GameConfig)
    ingest: IngestConfig = field(default_factory=IngestConfig)
    smoothing: SmoothConfig = field(default_factory=SmoothConfig)
    gesture: GestureConfig = field(default_factory=GestureConfig)
    mirror_input: bool = False
    session_id: str = "session"

    def header(self) -> dict:
        end = self.game.end
        if isinstance(end, MasteryCount):
            end_rec = {"kind": "mastery", "n": end.n}
        else:
            end_rec = {"kind": "time", "seconds": end.seconds}
        return {
            "session_id": self.session_id,
            "seed": self.seed,
            "mode": self.mode.value,
            "end": end_rec,
            "players": self.game.players,
            "mirror": self.mirror_input,
            "alpha": self.smoothing.alpha,
            "amplitude_scale": self.gesture.amplitude_scale,
        }


class SessionLog:
    """Append-only, timestamp-ordered session record."""

    def __init__(self, header: dict):
        self.header = dict(header)
        self.records: List[dict] = []
        self.footer: Optional[dict] = None
        self._last_t = -1

    def _append(self, record: dict) -> None:
        t = record["t"]
        if t < self._last_t:
            raise LogIntegrityError(
                f"record at t={t} after record at t={self._last_t}")
        self._last_t = t
        self.records.append(record)

    def add_frame_ref(self, timestamp_ms: int, player_slot: int) -> None:
        self._append({"rec": "frame", "t": timestamp_ms, "p": player_slot})

    def add_gesture(self, event) -> None:
        self._append({"rec": "gesture", **event.to_record()})

    def add_game_event(self, event) -> None:
        self._append({"rec": "game", **event.to_record()})

    def add_rating(self, rating: FeelingScaleRating) -> None:
        self._append({"rec": "rating", "t": rating.timestamp_ms,
                      "phase": rating.phase, "value": rating.value})

    def compute_totals(self) -> dict:
        totals = {"frames": 0, "gestures": 0, "game_events": 0, "ratings": 0,
                  "score": 0, "correct": 0, "answered": 0}
        for rec in self.records:
            kind = rec["rec"]
            if kind == "frame":
                totals["frames"] += 1
            elif kind == "gesture":
                totals["gestures"] += 1
            elif kind == "rating":
                totals["ratings"] += 1
            elif kind == "game":
                totals["game_events"] += 1
                if rec["ev"] in ("answer_correct", "answer_incorrect"):
                    totals["answered"] += 1
                    if rec["ev"] == "answer_correct":
                        totals["correct"] += 1
                    totals["score"] = rec["score"]
        return totals

    def finalize(self) -> None:
        self.footer = self.compute_totals()

    def to_lines(self) -> List[str]:
        dump = lambda obj: json.dumps(obj, separators=(",", ":"))
        lines = [dump({"rec": "hdr", "version": LOG_VERSION, **self.header})]
        lines.extend(dump(rec) for rec in self.records)
        if self.footer is None:
            self.finalize()
        lines.append(dump({"rec": "ftr", **self.footer}))
        return lines

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.to_lines():
                fh.write(line)
                fh.write("\n")

    @classmethod
    def parse(cls, lines: Iterable[str]) -> "SessionLog":
        header = None
        footer = None
        log = None
        for line in lines:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            kind = rec.pop("rec", None)
            if kind == "hdr":
                if header is not None:
                    raise LogIntegrityError("duplicate header")
                if rec.pop("version", None) != LOG_VERSION:
                    raise LogIntegrityError("unsupported log version")
                header = rec
                log = cls(header)
            elif kind == "ftr":
                if log is None:
                    raise LogIntegrityError("footer before header")
                footer = rec
            else:
                if log is None:
                    raise LogIntegrityError("record before header")
                if footer is not None:
                    raise LogIntegrityError("record after footer")
                rec["rec"] = kind
                log._append(rec)
        if log is None or footer is None:
            raise LogIntegrityError("missing header or footer")
        if footer != log.compute_totals():
            raise LogIntegrityError("footer totals do not match records")
        log.footer = footer
        return log

    @classmethod
    def read(cls, path) -> "SessionLog":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.parse(fh)


@dataclass(frozen=True)
class StatsSummary:
    n: int
    mean: Optional[float]
    sd: Optional[float]
    accuracy: Optional[float]
    mean_response_latency_ms: Optional[float]


def summarize(log: SessionLog) -> StatsSummary:
    """Ratings mean/sd plus answer accuracy and response latency."""
    ratings = [rec["value"] for rec in log.records if rec["rec"] == "rating"]
    n = len(ratings)
    mean = sum(ratings) / n if n else None
    sd = None
    if n >= 2:
        sd = (sum((v - mean) ** 2 for v in ratings) / (n - 1)) ** 0.5
    question_start: Dict[str, int] = {}
    latencies: List[int] = []
    correct = 0
    answered = 0
    for rec in log.records:
        if rec["rec"] != "game":
            continue
        if rec["ev"] == "question_start":
            question_start[rec["qid"]] = rec["t"]
        elif rec["ev"] in ("answer_correct", "answer_incorrect"):
            answered += 1
            if rec["ev"] == "answer_correct":
                correct += 1
            started = question_start.get(rec["qid"])
            if started is not None:
                latencies.append(rec["t"] - started)
    accuracy = correct / answered if answered else None
    latency = sum(latencies) / len(latencies) if latencies else None
    return StatsSummary(n, mean, sd, accuracy, latency)


class _PlayerPipeline:
    """Per-player ingest -> smooth -> gesture chain with last-known scale."""

    def __init__(self, slot: int, config: EngineConfig):
        self.config = config
        self.prev: Optional[CleanFrame] = None
        self.smooth_state = SmoothState()
        self.gesture_state = GestureState(player_slot=slot)
        self.scale: Optional[BodyScale] = None

    def feed(self, raw: LandmarkFrame):
        cfg = self.config
        clean = ingest(self.prev, raw, cfg.ingest)
        self.prev = clean
        if cfg.mirror_input:
            clean = mirror(clean)
        self.smooth_state, frame = smooth(self.smooth_state, clean,
                                          cfg.smoothing)
        try:
            self.scale = body_scale(frame)
        except ScaleUnavailableError:
            pass  # reuse last known scale
        if self.scale is None:
            return frame, []
        events = detect(self.gesture_state, frame, self.scale, cfg.gesture)
        return frame, events


class EngineSession:
    """Feeds landmark frames through the full pipeline and one game round.

    Frames may interleave across players; all frames sharing a timestamp
    form one game step.
    """

    def __init__(self, config: EngineConfig):
        self.config = config
        self.log = SessionLog(config.header())
        self.pipelines: Dict[int, _PlayerPipeline] = {}
        self.latest_frames: Dict[int, CleanFrame] = {}
        self.game: GameState = new_round(config.mode, config.seed, config.game)
        self._started = False
        self._group_t: Optional[int] = None
        self._group_events = []
        self._last_step_t: Optional[int] = None

    @property
    def ended(self) -> bool:
        return self.game.phase is Phase.ENDED

    def _flush_group(self) -> None:
        if self._group_t is None:
            return
        t = self._group_t
        if not self._started:
            self.game.clock_ms = t
            self._started = True
            for ev in start(self.game):
                self.log.add_game_event(ev)
            self._last_step_t = t
        else:
            dt = t - self._last_step_t
            self._last_step_t = t
            if not self.ended and dt > 0:
                for ev in step(self.game, dt, self._group_events,
                               self.latest_frames):
                    self.log.add_game_event(ev)
        self._group_t = None
        self._group_events = []

    def feed(self, raw: LandmarkFrame) -> None:
        if self._group_t is not None and raw.timestamp_ms != self._group_t:
            self._flush_group()
        pipeline = self.pipelines.get(raw.player_slot)
        if pipeline is None:
            pipeline = _PlayerPipeline(raw.player_slot, self.config)
            self.pipelines[raw.player_slot] = pipeline
        frame, events = pipeline.feed(raw)
        self.latest_frames[raw.player_slot] = frame
        self.log.add_frame_ref(raw.timestamp_ms, raw.player_slot)
        for ev in events:
            self.log.add_gesture(ev)
        self._group_t = raw.timestamp_ms
        self._group_events.extend(events)

    def finish(self) -> SessionLog:
        self._flush_group()
        self.log.finalize()
        return self.log


def replay(trace: Union[str, Iterable[LandmarkFrame]],
           config: EngineConfig) -> SessionLog:
    """Replay a landmark trace file (or frame iterable) into a SessionLog."""
    if isinstance(trace, str):
        frames = traces.read_trace(trace)
    else:
        frames = trace
    session = EngineSession(config)
    for frame in frames:
        if session.ended:
            break
        session.feed(frame)
    return session.finish()

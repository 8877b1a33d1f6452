"""Mini-game round state machines.

A round is a deterministic state machine advanced by `step` with elapsed
time, recognized gesture events, and the latest clean frame per player.
Every state change emits a GameEvent record; the full event log is the
round's observable behavior and is byte-stable given (seed, config, trace).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Set, Tuple

from . import content
from .content import Question, QuestionKind
from .errors import ConfigurationError, PhaseError
from .gesture import GestureEvent, GestureKind, hit_test, knee_count_window
from .landmarks import CleanFrame


class GameMode(Enum):
    CENTRAL_TENDENCY_CATCH = "central_tendency_catch"
    ELBOW_SKEW = "elbow_skew"
    KNEE_COUNT = "knee_count"
    OUTLIER_DITCH = "outlier_ditch"
    COORDINATE_QUEST = "coordinate_quest"
    COLLABORATIVE_MIXED = "collaborative_mixed"


class Phase(Enum):
    READY = "ready"
    PLAYING = "playing"
    BETWEEN_QUESTIONS = "between_questions"
    ENDED = "ended"


class TargetState(Enum):
    ACTIVE = "active"
    POPPED = "popped"
    DITCHED = "ditched"
    EXPIRED = "expired"


@dataclass(frozen=True)
class MasteryCount:
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ConfigurationError("MasteryCount requires a positive count")


@dataclass(frozen=True)
class TimeLimit:
    seconds: float

    def __post_init__(self):
        if self.seconds <= 0:
            raise ConfigurationError("TimeLimit requires positive seconds")


@dataclass
class Target:
    id: int
    x: float
    y: float
    vx: float
    vy: float
    radius: float
    label: str
    is_correct: bool
    state: TargetState = TargetState.ACTIVE
    option_index: int = 0
    zone: str = ""                      # elbow-skew routing: left/center/right
    grabbed_by: Optional[Tuple[int, str]] = None
    anchor: Optional[Tuple[float, float]] = None
    anchor_ms: int = 0
    contact_key: Optional[Tuple[int, str]] = None
    contact_since_ms: int = 0
    contact_anchor: Optional[Tuple[float, float]] = None
    release_block_until_ms: int = -1


@dataclass(frozen=True)
class GameConfig:
    end: object = field(default_factory=lambda: TimeLimit(60.0))
    target_speed: float = 0.08           # play-area units per second
    target_radius: float = 0.06
    question_difficulty: int = 1
    players: int = 1
    between_ms: int = 1000
    knee_window_ms: int = 8000
    knee_early_close_ms: int = 1500
    outlier_window_ms: int = 15000
    outlier_close_after_ms: int = 2000
    dwell_ms: int = 800
    effector_radius: float = 0.04
    grab_dwell_ms: int = 150
    grab_move_eps: float = 0.03
    release_dwell_ms: int = 300
    release_move_eps: float = 0.01
    regrab_cooldown_ms: int = 500
    box: Tuple[float, float, float, float] = (0.2, 0.2, 0.8, 0.8)
    spawn_region: Tuple[float, float, float, float] = (0.12, 0.12, 0.88, 0.55)
    stale_limit_ms: int = 500
    dominant_wrist: str = "right_wrist"


@dataclass(frozen=True)
class GameEvent:
    t: int
    ev: str
    data: dict

    def to_record(self) -> dict:
        rec = {"t": self.t, "ev": self.ev}
        rec.update(self.data)
        return rec


_CATCH_KINDS = (QuestionKind.MEAN, QuestionKind.MEDIAN, QuestionKind.MODE)
_MIXED_KINDS = _CATCH_KINDS + (QuestionKind.SKEW_CLASS, QuestionKind.NUMERIC_COUNT)

_MECHANIC_BY_KIND = {
    QuestionKind.MEAN: "catch",
    QuestionKind.MEDIAN: "catch",
    QuestionKind.MODE: "catch",
    QuestionKind.SKEW_CLASS: "elbow",
    QuestionKind.NUMERIC_COUNT: "knee",
    QuestionKind.OUTLIER_PICK: "outlier",
    QuestionKind.COORDINATE_POINT: "coord",
}


@dataclass
class GameState:
    mode: GameMode
    config: GameConfig
    rng: random.Random
    phase: Phase = Phase.READY
    clock_ms: int = 0
    score: int = 0
    streak: int = 0
    mastery: int = 0
    players: int = 1
    question: Optional[Question] = None
    question_index: int = 0
    mechanic: str = ""
    targets: List[Target] = field(default_factory=list)
    retired_targets: List[Target] = field(default_factory=list)
    correct_answers: int = 0
    answered: int = 0
    question_start_ms: int = 0
    between_until_ms: int = 0
    knee_events: List[GestureEvent] = field(default_factory=list)
    knee_last_raise_ms: Optional[int] = None
    last_release_ms: Optional[int] = None
    ditched: Set[int] = field(default_factory=set)
    cursor_cell: Optional[Tuple[int, int]] = None
    cursor_since_ms: int = 0
    _next_target_id: int = 0
    _next_question_seed: int = 0


def _question_kind_for(mode: GameMode, rng: random.Random) -> QuestionKind:
    if mode is GameMode.CENTRAL_TENDENCY_CATCH:
        return rng.choice(_CATCH_KINDS)
    if mode is GameMode.ELBOW_SKEW:
        return QuestionKind.SKEW_CLASS
    if mode is GameMode.KNEE_COUNT:
        return QuestionKind.NUMERIC_COUNT
    if mode is GameMode.OUTLIER_DITCH:
        return QuestionKind.OUTLIER_PICK
    if mode is GameMode.COORDINATE_QUEST:
        return QuestionKind.COORDINATE_POINT
    return rng.choice(_MIXED_KINDS)


def new_round(mode: GameMode, seed: int, config: GameConfig) -> GameState:
    """Build a Ready round with its first question and targets spawned."""
    if config.players not in (1, 2):
        raise ConfigurationError("players must be 1 or 2")
    if mode is GameMode.COLLABORATIVE_MIXED and config.players != 2:
        raise ConfigurationError("collaborative mode requires players=2")
    if config.target_speed < 0 or config.target_radius <= 0:
        raise ConfigurationError("target kinematics must be positive")
    if not isinstance(config.end, (MasteryCount, TimeLimit)):
        raise ConfigurationError("end condition must be MasteryCount or TimeLimit")
    state = GameState(mode=mode, config=config, rng=random.Random(seed),
                      players=config.players)
    _prepare_question(state)
    return state


def _prepare_question(state: GameState) -> None:
    q_seed = state.rng.randrange(2 ** 31)
    kind = _question_kind_for(state.mode, state.rng)
    state.question = content.gen_question(q_seed, kind,
                                          state.config.question_difficulty)
    state.mechanic = _MECHANIC_BY_KIND[kind]
    state.question_index += 1
    state.knee_events = []
    state.knee_last_raise_ms = None
    state.last_release_ms = None
    state.ditched = set()
    state.cursor_cell = None
    state.targets = _spawn_targets(state)


def _new_target(state: GameState, **kwargs) -> Target:
    t = Target(id=state._next_target_id, **kwargs)
    state._next_target_id += 1
    return t


def _spawn_targets(state: GameState) -> List[Target]:
    q = state.question
    cfg = state.config
    rng = state.rng
    mech = state.mechanic
    targets: List[Target] = []
    if mech == "catch":
        x0, y0, x1, y1 = cfg.spawn_region
        for idx, label in enumerate(q.options):
            angle = rng.uniform(0.0, 2.0 * math.pi)
            targets.append(_new_target(
                state,
                x=rng.uniform(x0, x1), y=rng.uniform(y0, y1),
                vx=cfg.target_speed * math.cos(angle),
                vy=cfg.target_speed * math.sin(angle),
                radius=cfg.target_radius, label=label,
                is_correct=idx in q.correct, option_index=idx))
    elif mech == "elbow":
        # Semantic congruence: the right-skewed option always sits right of
        # the midline and the left-skewed option left of it.
        zone_x = {"left": rng.uniform(0.12, 0.25),
                  "center": rng.uniform(0.45, 0.55),
                  "right": rng.uniform(0.75, 0.88)}
        zone_by_label = {
            content.SKEW_LABELS[content.SkewClass.LEFT_SKEWED]: "left",
            content.SKEW_LABELS[content.SkewClass.SYMMETRIC]: "center",
            content.SKEW_LABELS[content.SkewClass.RIGHT_SKEWED]: "right",
        }
        for idx, label in enumerate(q.options):
            zone = zone_by_label[label]
            targets.append(_new_target(
                state,
                x=zone_x[zone], y=rng.uniform(0.2, 0.4), vx=0.0, vy=0.0,
                radius=cfg.target_radius, label=label,
                is_correct=idx in q.correct, option_index=idx, zone=zone))
    elif mech == "outlier":
        bx0, by0, bx1, by1 = cfg.box
        pad = cfg.target_radius * 1.2
        for idx, label in enumerate(q.options):
            targets.append(_new_target(
                state,
                x=rng.uniform(bx0 + pad, bx1 - pad),
                y=rng.uniform(by0 + pad, by1 - pad),
                vx=0.0, vy=0.0, radius=cfg.target_radius, label=label,
                is_correct=idx in q.correct, option_index=idx))
    # knee and coord questions are answered by counting / dwelling; no targets.
    return targets


def start(state: GameState) -> List[GameEvent]:
    """Ready -> Playing; emits round/question start events."""
    if state.phase is not Phase.READY:
        raise PhaseError(f"cannot start a round in phase {state.phase.value}")
    state.phase = Phase.PLAYING
    state.question_start_ms = state.clock_ms
    events = [GameEvent(state.clock_ms, "round_start",
                        {"mode": state.mode.value, "players": state.players,
                         "end": _end_record(state.config.end)})]
    events.extend(_question_events(state))
    return events


def _end_record(end) -> dict:
    if isinstance(end, MasteryCount):
        return {"kind": "mastery", "n": end.n}
    return {"kind": "time", "seconds": end.seconds}


def _question_events(state: GameState) -> List[GameEvent]:
    q = state.question
    events = [GameEvent(state.clock_ms, "question_start",
                        {"qid": q.id, "kind": q.kind.value, "prompt": q.prompt,
                         "options": q.options, "index": state.question_index,
                         "cue": "question"})]
    for tgt in state.targets:
        events.append(GameEvent(state.clock_ms, "target_spawn",
                                {"target": tgt.id, "x": tgt.x, "y": tgt.y,
                                 "label": tgt.label, "option": tgt.option_index}))
    return events


def mastery_update(state: GameState, correct: bool) -> None:
    """Monotone mastery: a correct answer adds min(10, 5 + streak), capped
    at 100; incorrect answers never subtract."""
    if state.phase is not Phase.PLAYING:
        raise PhaseError("mastery updates only apply while playing")
    if correct:
        gain = min(10, 5 + state.streak)
        state.mastery = min(100, state.mastery + gain)


def step(state: GameState, dt_ms: int, gesture_events: Sequence[GestureEvent],
         frames: Dict[int, CleanFrame]) -> List[GameEvent]:
    """Advance the round by dt_ms. Returns the GameEvents of this step."""
    if state.phase is Phase.ENDED:
        raise PhaseError("cannot step an ended round")
    if state.phase is Phase.READY:
        raise PhaseError("round not started")
    if dt_ms <= 0:
        raise ValueError("dt_ms must be positive")
    events: List[GameEvent] = []
    state.clock_ms += dt_ms
    t = state.clock_ms

    end = state.config.end
    if isinstance(end, TimeLimit) and t >= int(end.seconds * 1000):
        _finish(state, events)
        return events

    if state.phase is Phase.BETWEEN_QUESTIONS:
        if t >= state.between_until_ms:
            _prepare_question(state)
            state.phase = Phase.PLAYING
            state.question_start_ms = t
            events.extend(_question_events(state))
        return events

    _move_targets(state, dt_ms)
    mech = state.mechanic
    if mech == "catch":
        _step_catch(state, gesture_events, events)
    elif mech == "elbow":
        _step_elbow(state, gesture_events, events)
    elif mech == "knee":
        _step_knee(state, gesture_events, events)
    elif mech == "outlier":
        _step_outlier(state, frames, events)
    elif mech == "coord":
        _step_coord(state, frames, events)
    return events


def _move_targets(state: GameState, dt_ms: int) -> None:
    dt = dt_ms / 1000.0
    for tgt in state.targets:
        if tgt.state is not TargetState.ACTIVE or tgt.grabbed_by is not None:
            continue
        if tgt.vx == 0.0 and tgt.vy == 0.0:
            continue
        tgt.x += tgt.vx * dt
        tgt.y += tgt.vy * dt
        lo_x, hi_x = tgt.radius, 1.0 - tgt.radius
        lo_y, hi_y = tgt.radius, 1.0 - tgt.radius
        if tgt.x < lo_x:
            tgt.x = 2 * lo_x - tgt.x
            tgt.vx = -tgt.vx
        elif tgt.x > hi_x:
            tgt.x = 2 * hi_x - tgt.x
            tgt.vx = -tgt.vx
        if tgt.y < lo_y:
            tgt.y = 2 * lo_y - tgt.y
            tgt.vy = -tgt.vy
        elif tgt.y > hi_y:
            tgt.y = 2 * hi_y - tgt.y
            tgt.vy = -tgt.vy


def _active_targets(state: GameState) -> List[Target]:
    return [tgt for tgt in state.targets if tgt.state is TargetState.ACTIVE]


def _pop(state: GameState, tgt: Target, events: List[GameEvent], cue: str) -> None:
    tgt.state = TargetState.POPPED
    events.append(GameEvent(state.clock_ms, "target_popped",
                            {"target": tgt.id, "label": tgt.label,
                             "correct": tgt.is_correct, "cue": cue}))


def _resolve_answer(state: GameState, events: List[GameEvent],
                    response) -> None:
    q = state.question
    result = content.grade(q, response)
    state.answered += 1
    if result.correct:
        mastery_update(state, True)
        state.score += 1
        state.streak += 1
        state.correct_answers += 1
        ev_name, cue = "answer_correct", "success"
    else:
        state.streak = 0
        ev_name, cue = "answer_incorrect", "failure"
    events.append(GameEvent(state.clock_ms, ev_name,
                            {"qid": q.id,
                             "expected": _jsonable(result.expected),
                             "received": _jsonable(result.received),
                             "score": state.score, "streak": state.streak,
                             "mastery": state.mastery, "cue": cue}))
    _expire_active(state, events)
    events.append(GameEvent(state.clock_ms, "question_end", {"qid": q.id}))
    end = state.config.end
    if isinstance(end, MasteryCount) and state.correct_answers >= end.n:
        _finish(state, events)
        return
    state.phase = Phase.BETWEEN_QUESTIONS
    state.between_until_ms = state.clock_ms + state.config.between_ms


def _jsonable(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def _expire_active(state: GameState, events: List[GameEvent]) -> None:
    for tgt in _active_targets(state):
        tgt.state = TargetState.EXPIRED
        events.append(GameEvent(state.clock_ms, "target_expired",
                                {"target": tgt.id}))
    state.retired_targets.extend(state.targets)
    state.targets = []


def _finish(state: GameState, events: List[GameEvent]) -> None:
    _expire_active(state, events)
    state.phase = Phase.ENDED
    events.append(GameEvent(state.clock_ms, "round_end",
                            {"score": state.score, "mastery": state.mastery,
                             "correct": state.correct_answers,
                             "answered": state.answered, "cue": "finale"}))


def _step_catch(state: GameState, gesture_events: Sequence[GestureEvent],
                events: List[GameEvent]) -> None:
    cfg = state.config
    for ev in gesture_events:
        if ev.kind not in (GestureKind.REACH_TOUCH, GestureKind.HEAD_BUMP):
            continue
        hit: Optional[Target] = None
        best = math.inf
        for tgt in _active_targets(state):
            if hit_test(ev.position, cfg.effector_radius, (tgt.x, tgt.y),
                        tgt.radius):
                d = math.hypot(ev.position[0] - tgt.x, ev.position[1] - tgt.y)
                if d < best:
                    best = d
                    hit = tgt
        if hit is None:
            continue
        if hit.is_correct:
            _pop(state, hit, events, "pop")
            _resolve_answer(state, events, {hit.option_index})
            return
        _pop(state, hit, events, "buzz")
        state.streak = 0
        events.append(GameEvent(state.clock_ms, "hit_incorrect",
                                {"target": hit.id, "label": hit.label,
                                 "streak": 0, "cue": "buzz"}))


_ELBOW_ZONE_BY_KIND = {
    GestureKind.ELBOW_EXTEND_LEFT: "left",
    GestureKind.ELBOW_EXTEND_RIGHT: "right",
    GestureKind.REACH_TOUCH: "center",
    GestureKind.HEAD_BUMP: "center",
}


def _step_elbow(state: GameState, gesture_events: Sequence[GestureEvent],
                events: List[GameEvent]) -> None:
    for ev in gesture_events:
        zone = _ELBOW_ZONE_BY_KIND.get(ev.kind)
        if zone is None:
            continue
        tgt = next((x for x in _active_targets(state) if x.zone == zone), None)
        if tgt is None:
            continue
        if tgt.is_correct:
            _pop(state, tgt, events, "pop")
            _resolve_answer(state, events, {tgt.option_index})
            return
        _pop(state, tgt, events, "buzz")
        state.streak = 0
        events.append(GameEvent(state.clock_ms, "hit_incorrect",
                                {"target": tgt.id, "label": tgt.label,
                                 "streak": 0, "cue": "buzz"}))


def _step_knee(state: GameState, gesture_events: Sequence[GestureEvent],
               events: List[GameEvent]) -> None:
    cfg = state.config
    t = state.clock_ms
    for ev in gesture_events:
        if ev.kind is GestureKind.KNEE_RAISE:
            state.knee_events.append(ev)
            state.knee_last_raise_ms = t
            events.append(GameEvent(t, "knee_count",
                                    {"count": knee_count_window(
                                        state.knee_events,
                                        state.question_start_ms, t + 1),
                                     "cue": "tick"}))
    window_closed = t >= state.question_start_ms + cfg.knee_window_ms
    early = (state.knee_last_raise_ms is not None
             and t - state.knee_last_raise_ms >= cfg.knee_early_close_ms)
    if window_closed or early:
        response = knee_count_window(state.knee_events,
                                     state.question_start_ms, t + 1)
        _resolve_answer(state, events, response)


def _wrist_positions(state: GameState,
                     frames: Dict[int, CleanFrame]) -> List[Tuple[Tuple[int, str],
                                                                  Tuple[float, float]]]:
    cfg = state.config
    out = []
    for slot in sorted(frames):
        frame = frames[slot]
        for wrist in ("left_wrist", "right_wrist"):
            lm = frame.landmarks[wrist]
            if lm.position is not None and lm.stale_ms <= cfg.stale_limit_ms:
                out.append(((slot, wrist), lm.position))
    return out


def _inside_box(cfg: GameConfig, x: float, y: float) -> bool:
    bx0, by0, bx1, by1 = cfg.box
    return bx0 <= x <= bx1 and by0 <= y <= by1


def _step_outlier(state: GameState, frames: Dict[int, CleanFrame],
                  events: List[GameEvent]) -> None:
    cfg = state.config
    t = state.clock_ms
    wrists = _wrist_positions(state, frames)
    positions = dict(wrists)
    holding = {tgt.grabbed_by for tgt in state.targets
               if tgt.grabbed_by is not None}

    for tgt in state.targets:
        if tgt.state is not TargetState.ACTIVE:
            continue
        if tgt.grabbed_by is not None:
            pos = positions.get(tgt.grabbed_by)
            if pos is None:
                continue  # wrist lost: target holds in place
            tgt.x, tgt.y = pos
            if (tgt.anchor is None
                    or math.hypot(pos[0] - tgt.anchor[0],
                                  pos[1] - tgt.anchor[1]) > cfg.release_move_eps):
                tgt.anchor = pos
                tgt.anchor_ms = t
            elif t - tgt.anchor_ms >= cfg.release_dwell_ms:
                key = tgt.grabbed_by
                tgt.grabbed_by = None
                tgt.anchor = None
                tgt.release_block_until_ms = t + cfg.regrab_cooldown_ms
                state.last_release_ms = t
                holding.discard(key)
                if not _inside_box(cfg, tgt.x, tgt.y):
                    tgt.state = TargetState.DITCHED
                    state.ditched.add(tgt.option_index)
                    events.append(GameEvent(t, "target_ditched",
                                            {"target": tgt.id,
                                             "label": tgt.label,
                                             "cue": "whoosh"}))
                else:
                    events.append(GameEvent(t, "target_released",
                                            {"target": tgt.id}))
            continue
        # Not grabbed: grab after a short stationary contact dwell so a
        # wrist sweeping through a target does not pick it up.
        grabbed = False
        for key, pos in wrists:
            if key in holding:
                continue
            if not hit_test(pos, cfg.effector_radius, (tgt.x, tgt.y), tgt.radius):
                continue
            if tgt.contact_key != key or tgt.contact_anchor is None:
                tgt.contact_key = key
                tgt.contact_since_ms = t
                tgt.contact_anchor = pos
            elif math.hypot(pos[0] - tgt.contact_anchor[0],
                            pos[1] - tgt.contact_anchor[1]) > cfg.grab_move_eps:
                tgt.contact_since_ms = t
                tgt.contact_anchor = pos
            elif (t - tgt.contact_since_ms >= cfg.grab_dwell_ms
                  and t >= tgt.release_block_until_ms):
                tgt.grabbed_by = key
                tgt.anchor = pos
                tgt.anchor_ms = t
                holding.add(key)
                events.append(GameEvent(t, "target_grabbed",
                                        {"target": tgt.id, "player": key[0],
                                         "wrist": key[1], "cue": "grab"}))
                grabbed = True
            break
        else:
            tgt.contact_key = None
            tgt.contact_anchor = None
        if grabbed:
            continue

    any_grabbed = any(tgt.grabbed_by is not None for tgt in state.targets)
    window_closed = t >= state.question_start_ms + cfg.outlier_window_ms
    settled = (state.last_release_ms is not None and not any_grabbed
               and t - state.last_release_ms >= cfg.outlier_close_after_ms)
    if window_closed or settled:
        _resolve_answer(state, events, set(state.ditched))


def _step_coord(state: GameState, frames: Dict[int, CleanFrame],
                events: List[GameEvent]) -> None:
    cfg = state.config
    t = state.clock_ms
    frame = frames.get(0)
    if frame is None:
        return
    lm = frame.landmarks[cfg.dominant_wrist]
    if lm.position is None or lm.stale_ms > cfg.stale_limit_ms:
        return
    w, h = state.question.payload["grid"]
    x, y = lm.position
    cell = (max(0, min(w - 1, int(x * w))), max(0, min(h - 1, int(y * h))))
    if cell != state.cursor_cell:
        state.cursor_cell = cell
        state.cursor_since_ms = t
        return
    if t - state.cursor_since_ms >= cfg.dwell_ms:
        _resolve_answer(state, events, cell)

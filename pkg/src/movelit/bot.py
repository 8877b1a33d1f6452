"""Closed-loop scripted player for headless rounds.

A RoundDriver animates one skeleton per player slot, feeds the frames
through a full EngineSession, and plans body movements from the live game
state so that every mechanic can be driven to completion without a camera.
Plans are deterministic: the same (config, answer plan) always produces the
same frames, and therefore a byte-identical session log.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Callable, Deque, Dict, List, Optional, Tuple

from .game import GameMode, GameState, Phase, Target, TargetState
from .landmarks import LANDMARK_IDS, LandmarkFrame, RawLandmark
from .session import EngineConfig, EngineSession, SessionLog
from .synth import ARM_SEGMENT, KNEE_LIFT, NEUTRAL_POSE, REACH_RAISE, \
    SHOULDER_WIDTH, arm_pose

Point = Tuple[float, float]
Pose = Dict[str, Point]

# Body-relative reference points of the neutral skeleton.
_NEUTRAL_SHOULDER = NEUTRAL_POSE["right_shoulder"]
_NEUTRAL_WRIST = NEUTRAL_POSE["right_wrist"]

# Parking spot for outlier rounds: body low enough that both wrists sit
# below the play box and cannot brush a remaining target while we wait for
# the round to settle.
_PARK_SHIFT = (0.0, 0.42)


def _lerp(a: Point, b: Point, u: float) -> Point:
    return (a[0] + (b[0] - a[0]) * u, a[1] + (b[1] - a[1]) * u)


def shifted_pose(dx: float, dy: float) -> Pose:
    return {name: (x + dx, y + dy) for name, (x, y) in NEUTRAL_POSE.items()}


def wrist_at_pose(point: Point) -> Pose:
    """Whole-body translation that puts the right wrist at `point`."""
    return shifted_pose(point[0] - _NEUTRAL_WRIST[0],
                        point[1] - _NEUTRAL_WRIST[1])


def reach_pose(dx: float, dy: float, downward: bool) -> Pose:
    pose = shifted_pose(dx, dy)
    sx, sy = pose["right_shoulder"]
    direction = 1.0 if downward else -1.0
    pose["right_wrist"] = (sx, sy + direction * REACH_RAISE)
    pose["right_elbow"] = (sx, sy + direction * REACH_RAISE / 2.0)
    return pose


def extend_pose(side: str) -> Pose:
    pose = dict(NEUTRAL_POSE)
    pose.update(arm_pose(side, 1.0))
    return pose


def knee_up_pose() -> Pose:
    pose = dict(NEUTRAL_POSE)
    x, y = pose["right_knee"]
    pose["right_knee"] = (x, y - KNEE_LIFT)
    return pose


class PoseAnimator:
    """Linear pose interpolator over a queue of timed segments."""

    def __init__(self, pose: Optional[Pose] = None,
                 transform: Optional[Callable[[Pose], Pose]] = None):
        self._transform = transform
        pose = dict(pose if pose is not None else NEUTRAL_POSE)
        if transform is not None:
            pose = transform(pose)
        self.pose: Pose = pose
        self._segments: Deque[Tuple[int, Pose]] = deque()
        self._active: Optional[Tuple[int, Pose]] = None
        self._from: Pose = {}
        self._elapsed = 0

    @property
    def idle(self) -> bool:
        return self._active is None and not self._segments

    def push(self, duration_ms: int, target: Pose) -> None:
        target = dict(target)
        if self._transform is not None:
            target = self._transform(target)
        self._segments.append((max(1, int(duration_ms)), target))

    def hold(self, duration_ms: int) -> None:
        """Keep the final queued pose (or the current one) in place."""
        if self._segments:
            target = self._segments[-1][1]
        elif self._active is not None:
            target = self._active[1]
        else:
            target = self.pose
        self.push(duration_ms, target)

    def tick(self, dt_ms: int) -> Pose:
        remaining = dt_ms
        while remaining > 0:
            if self._active is None:
                if not self._segments:
                    break
                self._active = self._segments.popleft()
                self._from = dict(self.pose)
                self._elapsed = 0
            duration, target = self._active
            chunk = min(remaining, duration - self._elapsed)
            self._elapsed += chunk
            remaining -= chunk
            u = self._elapsed / duration
            self.pose = {name: _lerp(self._from[name], target[name], u)
                         for name in self._from}
            if self._elapsed >= duration:
                self.pose = dict(target)
                self._active = None
        return self.pose


def _hide_left_wrist(pose: Pose) -> Pose:
    pose = dict(pose)
    pose["left_wrist"] = (-0.30, 0.60)   # outside the frame margin
    return pose


def _predict_target(tgt: Target, lead_ms: int, fps: int) -> Point:
    """Replicate target motion (wall reflection included) lead_ms ahead."""
    x, y, vx, vy = tgt.x, tgt.y, tgt.vx, tgt.vy
    lo, hi = tgt.radius, 1.0 - tgt.radius
    step = 1000 // fps
    t = 0
    while t < lead_ms:
        dt = min(step, lead_ms - t) / 1000.0
        x += vx * dt
        y += vy * dt
        if x < lo:
            x, vx = 2 * lo - x, -vx
        elif x > hi:
            x, vx = 2 * hi - x, -vx
        if y < lo:
            y, vy = 2 * lo - y, -vy
        elif y > hi:
            y, vy = 2 * hi - y, -vy
        t += step
    return x, y


class RoundDriver:
    """Plays one round end to end by animating skeletons.

    answer_plan(question_index) -> bool decides whether each question should
    be answered correctly; None means always correct. Wrong answers are
    realized per mechanic (an off-count, a wrong zone, a wrong cell, ...).
    """

    def __init__(self, config: EngineConfig,
                 answer_plan: Optional[Callable[[int], bool]] = None,
                 fps: int = 30, max_ms: int = 300_000,
                 confidence: float = 0.95,
                 frame_sink: Optional[List[LandmarkFrame]] = None):
        self.config = config
        self.answer_plan = answer_plan
        self.fps = fps
        self.max_ms = max_ms
        self.confidence = confidence
        self.frame_sink = frame_sink
        self._intent: Dict[str, bool] = {}
        self._fumbled: Dict[str, bool] = {}
        # Outlier rounds rest at the park pose so neither wrist loiters
        # inside the box and picks up freshly spawned targets.
        if config.mode is GameMode.OUTLIER_DITCH:
            self._rest_pose = shifted_pose(*_PARK_SHIFT)
        else:
            self._rest_pose = dict(NEUTRAL_POSE)

    # -- intent ----------------------------------------------------------

    def _intend_correct(self, state: GameState) -> bool:
        qid = state.question.id
        if qid not in self._intent:
            if self.answer_plan is None:
                self._intent[qid] = True
            else:
                self._intent[qid] = bool(self.answer_plan(state.question_index))
        return self._intent[qid]

    def _pick_choice_target(self, state: GameState) -> Optional[Target]:
        """Correct target, or (once per question) a wrong one to fumble."""
        active = [t for t in state.targets if t.state is TargetState.ACTIVE]
        if not active:
            return None
        qid = state.question.id
        if not self._intend_correct(state) and not self._fumbled.get(qid):
            wrong = [t for t in active if not t.is_correct]
            if wrong:
                self._fumbled[qid] = True
                return wrong[0]
        return next((t for t in active if t.is_correct), active[0])

    # -- per-mechanic plans ---------------------------------------------

    def _reach_trigger_dist(self) -> float:
        g = self.config.gesture
        factor = g.reach_rest_factor + (
            g.reach_touch_factor - g.reach_rest_factor) * g.amplitude_scale
        return factor * SHOULDER_WIDTH

    def _queue_reach(self, anim: PoseAnimator, aim: Point) -> None:
        px, py = aim
        trig = self._reach_trigger_dist()
        downward = py > 0.75
        if downward:
            dy = py - _NEUTRAL_SHOULDER[1] - trig
        else:
            dy = max(0.0, py - _NEUTRAL_SHOULDER[1] + trig)
        dx = px - _NEUTRAL_SHOULDER[0]
        base = shifted_pose(dx, dy)
        anim.push(400, base)
        anim.push(300, reach_pose(dx, dy, downward))
        anim.hold(120)
        anim.push(300, base)
        anim.push(250, NEUTRAL_POSE)

    def _plan_catch(self, state: GameState, anim: PoseAnimator) -> None:
        tgt = self._pick_choice_target(state)
        if tgt is None:
            anim.hold(150)
            return
        # Aim where the target will be when the reach actually triggers:
        # ~400 ms of repositioning plus most of the raise.
        aim = _predict_target(tgt, 650, self.fps)
        self._queue_reach(anim, aim)

    def _plan_elbow(self, state: GameState, anim: PoseAnimator) -> None:
        tgt = self._pick_choice_target(state)
        if tgt is None:
            anim.hold(150)
            return
        if tgt.zone == "center":
            self._queue_reach(anim, (tgt.x, tgt.y))
            return
        anim.push(400, extend_pose(tgt.zone))
        anim.hold(150)
        anim.push(400, NEUTRAL_POSE)

    def _plan_knee(self, state: GameState, anim: PoseAnimator) -> None:
        count = state.question.correct
        if not self._intend_correct(state):
            count += 1
        done = sum(ev.count for ev in state.knee_events)
        for _ in range(max(0, count - done)):
            anim.push(200, knee_up_pose())
            anim.push(200, NEUTRAL_POSE)
            anim.hold(100)
        # Idle past the early-close delay so the count commits.
        anim.hold(1700)

    def _plan_outlier(self, state: GameState, anim: PoseAnimator) -> None:
        q = state.question
        cfg = state.config
        bx0, by0, bx1, by1 = cfg.box
        if self._intend_correct(state):
            desired = set(q.correct)
        else:
            non_outliers = sorted(set(range(len(q.options))) - set(q.correct))
            desired = {non_outliers[0]} if non_outliers else set(q.correct)
        active = [t for t in state.targets if t.state is TargetState.ACTIVE]
        grabbed = [t for t in active if t.grabbed_by is not None]
        if grabbed:
            tgt = grabbed[0]
            if tgt.option_index in desired:
                # Drag out the right side, hold still until it releases
                # outside the box, then retreat below the box.
                out = (bx1 + 0.12, max(by0 + 0.05, min(by1 - 0.05, tgt.y)))
                anim.push(400, wrist_at_pose(out))
                anim.hold(500)
                anim.push(350, shifted_pose(*_PARK_SHIFT))
            else:
                # An overlapping neighbor won the grab: set it down at the
                # clearest spot inside the box and try again.
                others = [t for t in active if t.id != tgt.id]
                spots = [(x, y) for x in (0.3, 0.5, 0.7) for y in (0.3, 0.5, 0.7)]
                spot = max(spots, key=lambda s: min(
                    (math.hypot(s[0] - o.x, s[1] - o.y) for o in others),
                    default=1.0))
                anim.push(400, wrist_at_pose(spot))
                anim.hold(450)
                anim.push(350, shifted_pose(*_PARK_SHIFT))
            return
        remaining = [t for t in active if t.option_index in desired]
        if remaining:
            tgt = remaining[0]
            anim.push(500, wrist_at_pose((tgt.x, tgt.y)))
            anim.hold(350)                       # stationary contact -> grab
        else:
            anim.push(350, shifted_pose(*_PARK_SHIFT))
            anim.hold(400)                       # wait out the settle delay

    def _plan_coord(self, state: GameState, anim: PoseAnimator) -> None:
        q = state.question
        w, h = q.payload["grid"]
        gx, gy = q.correct
        if not self._intend_correct(state):
            gx = (gx + 1) % w
        aim = ((gx + 0.5) / w, (gy + 0.5) / h)
        # The approach must clear the starting cell before the dwell timer
        # fires, so keep it quick relative to the dwell.
        anim.push(400, wrist_at_pose(aim))
        anim.hold(1300)                          # cursor dwell -> submit
        anim.push(400, NEUTRAL_POSE)

    _PLANS = {"catch": _plan_catch, "elbow": _plan_elbow, "knee": _plan_knee,
              "outlier": _plan_outlier, "coord": _plan_coord}

    # -- driver loop -----------------------------------------------------

    def _plan(self, state: GameState,
              animators: Dict[int, PoseAnimator]) -> None:
        if state.phase is Phase.BETWEEN_QUESTIONS:
            for anim in animators.values():
                anim.push(200, self._rest_pose)
            return
        if state.phase is not Phase.PLAYING:
            return
        acting = (state.question_index - 1) % len(animators)
        self._PLANS[state.mechanic](self, state, animators[acting])

    def _make_frame(self, t: int, slot: int, pose: Pose) -> LandmarkFrame:
        return LandmarkFrame(t, slot, {
            name: RawLandmark(pose[name][0], pose[name][1], self.confidence)
            for name in LANDMARK_IDS})

    def run(self) -> SessionLog:
        session = EngineSession(self.config)
        players = self.config.game.players
        # In outlier rounds only the right wrist may manipulate targets;
        # the left wrist is held off-frame so it never grabs a neighbor
        # and drags it out of the box by accident.
        transform = None
        if self.config.mode is GameMode.OUTLIER_DITCH:
            transform = _hide_left_wrist
        animators = {slot: PoseAnimator(pose=self._rest_pose,
                                        transform=transform)
                     for slot in range(players)}
        # Neutral lead-in covers gesture baseline calibration. Coordinate
        # rounds are cursor-driven and must not park in the starting cell
        # long enough for the dwell timer to submit it.
        lead_ms = 100 if self.config.mode is GameMode.COORDINATE_QUEST else 1400
        for anim in animators.values():
            anim.hold(lead_ms)
        i = 0
        prev_t = 0
        while not session.ended:
            t = i * 1000 // self.fps
            if t > self.max_ms:
                break
            dt = t - prev_t
            prev_t = t
            for slot in range(players):
                pose = animators[slot].tick(dt if i else 0)
                frame = self._make_frame(t, slot, pose)
                if self.frame_sink is not None:
                    self.frame_sink.append(frame)
                session.feed(frame)
            if all(anim.idle for anim in animators.values()):
                self._plan(session.game, animators)
            i += 1
        return session.finish()


def play_round(config: EngineConfig,
               answer_plan: Optional[Callable[[int], bool]] = None,
               fps: int = 30, max_ms: int = 300_000) -> SessionLog:
    """Convenience wrapper: drive one full round and return its log."""
    return RoundDriver(config, answer_plan, fps=fps, max_ms=max_ms).run()

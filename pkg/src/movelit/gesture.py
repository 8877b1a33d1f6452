"""Discrete gesture recognition over clean landmark frames.

Each gesture kind is driven by a hysteresis state machine on a scalar signal
normalized so that 1.0 is the trigger threshold. Thresholds are expressed in
body-scale units (shoulder widths / torso lengths) and shrink uniformly with
amplitude_scale for seated or low-amplitude play. A machine emits exactly one
event per armed->triggered transition and re-arms only after its signal
retreats below the hysteresis band; events of one kind are additionally
debounced per player.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Deque, Dict, List, Optional, Tuple

from .errors import EmptyWindowError
from .landmarks import BodyScale, CleanFrame


class GestureKind(Enum):
    REACH_TOUCH = "reach_touch"
    HEAD_BUMP = "head_bump"
    ELBOW_EXTEND_LEFT = "elbow_extend_left"
    ELBOW_EXTEND_RIGHT = "elbow_extend_right"
    KNEE_RAISE = "knee_raise"
    LEAN_LEFT = "lean_left"
    LEAN_RIGHT = "lean_right"
    DODGE = "dodge"


@dataclass(frozen=True)
class GestureEvent:
    kind: GestureKind
    timestamp_ms: int
    body_part: str
    position: Tuple[float, float]
    count: int
    player_slot: int

    def to_record(self) -> dict:
        return {
            "t": self.timestamp_ms,
            "p": self.player_slot,
            "kind": self.kind.value,
            "part": self.body_part,
            "pos": [self.position[0], self.position[1]],
            "count": self.count,
        }


@dataclass(frozen=True)
class GestureConfig:
    elbow_angle_deg: float = 150.0
    elbow_bend_ref_deg: float = 90.0     # resting bend; extension is measured from here
    extend_reach_factor: float = 1.4     # wrist lateral travel, in shoulder widths
    reach_touch_factor: float = 1.2      # wrist radial travel, in shoulder widths
    reach_rest_factor: float = 0.8       # resting wrist distance, in shoulder widths
    head_bump_factor: float = 0.15       # head lift, in torso lengths
    knee_raise_factor: float = 0.35      # knee lift, in torso lengths
    lean_factor: float = 0.25            # shoulder-over-hip offset, in torso lengths
    dodge_factor: float = 0.25           # torso travel, in shoulder widths
    dodge_window_ms: int = 600
    debounce_ms: int = 250
    rearm_hysteresis: float = 0.3
    amplitude_scale: float = 1.0         # in (0, 1]; shrinks every threshold
    calibration_ms: int = 1000
    stale_limit_ms: int = 500
    effector_radius: float = 0.04

    # ReachTouch rejects near-horizontal arm directions so a lateral elbow
    # extension never doubles as a reach; ~30 degrees from horizontal.
    reach_direction_gate: float = 0.577
    # Required vertical clearance of the wrist path, in shoulder widths.
    reach_clearance_factor: float = 0.3


def hit_test(effector_pos: Tuple[float, float], effector_radius: float,
             target_pos: Tuple[float, float], target_radius: float) -> bool:
    """Inclusive circle-vs-circle test (boundary counts as a hit)."""
    dx = effector_pos[0] - target_pos[0]
    dy = effector_pos[1] - target_pos[1]
    r = effector_radius + target_radius
    return dx * dx + dy * dy <= r * r


def knee_count_window(events: List[GestureEvent], window_start_ms: int,
                      window_end_ms: int) -> int:
    """Sum of knee-raise cycle counts with timestamps in [start, end)."""
    if window_end_ms <= window_start_ms:
        raise EmptyWindowError(
            f"window [{window_start_ms}, {window_end_ms}) is empty")
    total = 0
    for ev in events:
        if (ev.kind is GestureKind.KNEE_RAISE
                and window_start_ms <= ev.timestamp_ms < window_end_ms):
            total += ev.count
    return total


def _angle_deg(a: Tuple[float, float], b: Tuple[float, float],
               c: Tuple[float, float]) -> float:
    """Angle at vertex b of the polyline a-b-c, in degrees."""
    v1 = (a[0] - b[0], a[1] - b[1])
    v2 = (c[0] - b[0], c[1] - b[1])
    n1 = math.hypot(*v1)
    n2 = math.hypot(*v2)
    if n1 == 0.0 or n2 == 0.0:
        return 0.0
    cosang = (v1[0] * v2[0] + v1[1] * v2[1]) / (n1 * n2)
    return math.degrees(math.acos(max(-1.0, min(1.0, cosang))))


@dataclass
class _Machine:
    armed: bool = True


@dataclass
class GestureState:
    """Per-player recognizer state. Feed frames in timestamp order."""

    player_slot: int = 0
    machines: Dict[str, _Machine] = field(default_factory=dict)
    last_emit_ms: Dict[GestureKind, int] = field(default_factory=dict)
    first_t: Optional[int] = None
    baselines: Dict[str, float] = field(default_factory=dict)
    _calib_sums: Dict[str, Tuple[float, int]] = field(default_factory=dict)
    _calib_done: bool = False
    dodge_buffer: Deque[Tuple[int, float, float]] = field(default_factory=deque)


_BASELINE_KEYS = ("head", "left_knee", "right_knee")


def _pos(frame: CleanFrame, name: str) -> Optional[Tuple[float, float]]:
    lm = frame.landmarks[name]
    if lm.occluded or lm.position is None:
        return None
    return lm.position


def _update_calibration(state: GestureState, frame: CleanFrame,
                        config: GestureConfig) -> None:
    t = frame.timestamp_ms
    if state.first_t is None:
        state.first_t = t
    if state._calib_done:
        return
    for name in _BASELINE_KEYS:
        p = _pos(frame, name)
        if p is not None:
            total, n = state._calib_sums.get(name, (0.0, 0))
            state._calib_sums[name] = (total + p[1], n + 1)
    if t - state.first_t >= config.calibration_ms and state._calib_sums:
        for name, (total, n) in state._calib_sums.items():
            state.baselines[name] = total / n
        state._calib_done = True


def _mid_x(*points: Tuple[float, float]) -> float:
    return sum(p[0] for p in points) / len(points)


def detect(state: GestureState, frame: CleanFrame, scale: BodyScale,
           config: GestureConfig = GestureConfig()) -> List[GestureEvent]:
    """Advance every gesture machine one frame; return emitted events.

    Machines whose defining landmarks are occluded hold their state and emit
    nothing. State is mutated in place; events are returned in a fixed
    machine order for determinism.
    """
    _update_calibration(state, frame, config)
    t = frame.timestamp_ms
    amp = config.amplitude_scale
    sw = scale.shoulder_width
    tl = scale.torso_length
    events: List[GestureEvent] = []

    def signal_elbow(side: str) -> Optional[Tuple[float, Tuple[float, float], str]]:
        sh = _pos(frame, f"{side}_shoulder")
        el = _pos(frame, f"{side}_elbow")
        wr = _pos(frame, f"{side}_wrist")
        if sh is None or el is None or wr is None:
            return None
        angle = _angle_deg(sh, el, wr)
        lateral = (wr[0] - sh[0]) if side == "right" else (sh[0] - wr[0])
        disp = lateral / sw
        # Extension is measured from a resting bend so the signal sits near
        # zero in a neutral pose at every amplitude scale.
        bend = config.elbow_bend_ref_deg
        s = min((angle - bend) / ((config.elbow_angle_deg - bend) * amp),
                disp / (config.extend_reach_factor * amp))
        return s, el, f"{side}_elbow"

    def signal_reach(side: str) -> Optional[Tuple[float, Tuple[float, float], str]]:
        sh = _pos(frame, f"{side}_shoulder")
        wr = _pos(frame, f"{side}_wrist")
        if sh is None or wr is None:
            return None
        dx = wr[0] - sh[0]
        dy = wr[1] - sh[1]
        if abs(dy) < config.reach_direction_gate * abs(dx):
            s = 0.0
        else:
            rest = config.reach_rest_factor
            dist = math.hypot(dx, dy) / sw
            s = min((dist - rest) / ((config.reach_touch_factor - rest) * amp),
                    abs(dy) / (sw * config.reach_clearance_factor))
        return s, wr, f"{side}_wrist"

    def signal_head_bump() -> Optional[Tuple[float, Tuple[float, float], str]]:
        base = state.baselines.get("head")
        head = _pos(frame, "head")
        if base is None or head is None:
            return None
        lift = (base - head[1]) / tl
        return lift / (config.head_bump_factor * amp), head, "head"

    def signal_knee(side: str) -> Optional[Tuple[float, Tuple[float, float], str]]:
        base = state.baselines.get(f"{side}_knee")
        knee = _pos(frame, f"{side}_knee")
        if base is None or knee is None:
            return None
        lift = (base - knee[1]) / tl
        return lift / (config.knee_raise_factor * amp), knee, f"{side}_knee"

    def torso_points():
        pts = [_pos(frame, n) for n in
               ("left_shoulder", "right_shoulder", "left_hip", "right_hip")]
        if any(p is None for p in pts):
            return None
        return pts

    def lean_offset_norm() -> Optional[float]:
        pts = torso_points()
        if pts is None:
            return None
        sh_mid = _mid_x(pts[0], pts[1])
        hip_mid = _mid_x(pts[2], pts[3])
        # Positive when shoulders are to the learner's left of the hips.
        return (hip_mid - sh_mid) / tl

    def signal_lean(direction: int) -> Optional[Tuple[float, Tuple[float, float], str]]:
        off = lean_offset_norm()
        if off is None:
            return None
        pts = torso_points()
        sh_pos = ((pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0)
        part = "left_shoulder" if direction > 0 else "right_shoulder"
        return direction * off / (config.lean_factor * amp), sh_pos, part

    def signal_dodge() -> Optional[Tuple[float, Tuple[float, float], str]]:
        pts = torso_points()
        if pts is None:
            return None
        sh_x = _mid_x(pts[0], pts[1])
        hip_x = _mid_x(pts[2], pts[3])
        x = (sh_x + hip_x) / 2.0
        y = sum(p[1] for p in pts) / 4.0
        buf = state.dodge_buffer
        buf.append((t, sh_x, hip_x))
        while buf and buf[0][0] < t - config.dodge_window_ms:
            buf.popleft()
        # A dodge translates the full torso midline: shoulders AND hips must
        # travel, which a lean (shoulders only) never satisfies.
        sh_xs = [p[1] for p in buf]
        hip_xs = [p[2] for p in buf]
        travel = min(max(sh_xs) - min(sh_xs), max(hip_xs) - min(hip_xs)) / sw
        return travel / (config.dodge_factor * amp), (x, y), "head"

    machine_specs = [
        ("reach_left", GestureKind.REACH_TOUCH, lambda: signal_reach("left")),
        ("reach_right", GestureKind.REACH_TOUCH, lambda: signal_reach("right")),
        ("head_bump", GestureKind.HEAD_BUMP, signal_head_bump),
        ("elbow_left", GestureKind.ELBOW_EXTEND_LEFT, lambda: signal_elbow("left")),
        ("elbow_right", GestureKind.ELBOW_EXTEND_RIGHT, lambda: signal_elbow("right")),
        ("knee_left", GestureKind.KNEE_RAISE, lambda: signal_knee("left")),
        ("knee_right", GestureKind.KNEE_RAISE, lambda: signal_knee("right")),
        ("lean_left", GestureKind.LEAN_LEFT, lambda: signal_lean(+1)),
        ("lean_right", GestureKind.LEAN_RIGHT, lambda: signal_lean(-1)),
        ("dodge", GestureKind.DODGE, signal_dodge),
    ]

    rearm_level = 1.0 - config.rearm_hysteresis
    for key, kind, signal_fn in machine_specs:
        result = signal_fn()
        if result is None:
            continue  # defining landmark occluded: hold state
        s, pos, part = result
        machine = state.machines.setdefault(key, _Machine())
        if machine.armed:
            if s >= 1.0:
                last = state.last_emit_ms.get(kind)
                if last is None or t - last >= config.debounce_ms:
                    machine.armed = False
                    state.last_emit_ms[kind] = t
                    events.append(GestureEvent(kind, t, part, pos, 1,
                                               state.player_slot))
        else:
            if s <= rearm_level:
                machine.armed = True
    return events

"""Synthetic landmark trace generation from gesture scripts.

A script is line-oriented: "t_ms kind [magnitude]" with '#' comments; times
are relative to the end of a neutral lead-in that covers baseline
calibration. Generated traces are the independent oracle for the gesture
recognizer: replaying a clean script must reproduce the scripted gesture
sequence exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

from .errors import MovelitError
from .gesture import GestureKind
from .landmarks import LANDMARK_IDS, LandmarkFrame, RawLandmark

Point = Tuple[float, float]

# Learner-frame neutral pose: x grows toward the learner's right.
NEUTRAL_POSE: Dict[str, Point] = {
    "head": (0.50, 0.20),
    "left_shoulder": (0.40, 0.35),
    "right_shoulder": (0.60, 0.35),
    "left_elbow": (0.32, 0.40),
    "right_elbow": (0.68, 0.40),
    "left_wrist": (0.38, 0.47),
    "right_wrist": (0.62, 0.47),
    "left_hip": (0.42, 0.65),
    "right_hip": (0.58, 0.65),
    "left_knee": (0.44, 0.82),
    "right_knee": (0.56, 0.82),
    "left_ankle": (0.44, 0.95),
    "right_ankle": (0.56, 0.95),
}

SHOULDER_WIDTH = 0.20
TORSO_LENGTH = 0.30
ARM_SEGMENT = 0.16

# Full-magnitude excursions, comfortably above the default thresholds.
KNEE_LIFT = 0.18
HEAD_LIFT = 0.09
REACH_RAISE = 0.30
LEAN_SHIFT = 0.105
DODGE_SHIFT = 0.10


class SynthScriptError(MovelitError):
    """A gesture script line is malformed or names an unknown gesture."""


@dataclass(frozen=True)
class ScriptEntry:
    t_ms: int
    kind: GestureKind
    magnitude: float


# rise / hold / fall envelope durations per gesture, ms.
ENVELOPES: Dict[GestureKind, Tuple[int, int, int]] = {
    GestureKind.KNEE_RAISE: (250, 50, 250),
    GestureKind.HEAD_BUMP: (250, 100, 250),
    GestureKind.REACH_TOUCH: (300, 150, 300),
    GestureKind.ELBOW_EXTEND_LEFT: (300, 200, 300),
    GestureKind.ELBOW_EXTEND_RIGHT: (300, 200, 300),
    GestureKind.LEAN_LEFT: (300, 300, 300),
    GestureKind.LEAN_RIGHT: (300, 300, 300),
    # The slow fall keeps the return leg below the dodge re-arm band.
    GestureKind.DODGE: (400, 300, 2400),
}

_KINDS_BY_NAME = {kind.value: kind for kind in ENVELOPES}


def gesture_duration_ms(kind: GestureKind) -> int:
    rise, hold, fall = ENVELOPES[kind]
    return rise + hold + fall


def parse_script(lines: Iterable[str]) -> List[ScriptEntry]:
    entries: List[ScriptEntry] = []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) not in (2, 3):
            raise SynthScriptError(
                f"line {line_no}: expected 't_ms kind [magnitude]'")
        try:
            t_ms = int(parts[0])
        except ValueError:
            raise SynthScriptError(f"line {line_no}: bad time {parts[0]!r}")
        kind = _KINDS_BY_NAME.get(parts[1])
        if kind is None:
            raise SynthScriptError(f"line {line_no}: unknown gesture {parts[1]!r}")
        magnitude = 1.0
        if len(parts) == 3:
            try:
                magnitude = float(parts[2])
            except ValueError:
                raise SynthScriptError(
                    f"line {line_no}: bad magnitude {parts[2]!r}")
            if not 0.0 < magnitude <= 1.0:
                raise SynthScriptError(
                    f"line {line_no}: magnitude must be in (0, 1]")
        entries.append(ScriptEntry(t_ms, kind, magnitude))
    entries.sort(key=lambda e: e.t_ms)
    for prev, cur in zip(entries, entries[1:]):
        if prev.t_ms + gesture_duration_ms(prev.kind) > cur.t_ms:
            raise SynthScriptError(
                f"gestures at {prev.t_ms} and {cur.t_ms} overlap")
    return entries


def script_kinds(entries: List[ScriptEntry]) -> List[GestureKind]:
    """The gesture sequence a clean replay of this script must produce."""
    return [e.kind for e in entries]


def _envelope(kind: GestureKind, offset_ms: int) -> float:
    rise, hold, fall = ENVELOPES[kind]
    if offset_ms <= 0:
        return 0.0
    if offset_ms < rise:
        return offset_ms / rise
    if offset_ms < rise + hold:
        return 1.0
    if offset_ms < rise + hold + fall:
        return 1.0 - (offset_ms - rise - hold) / fall
    return 0.0


def _lerp(a: Point, b: Point, u: float) -> Point:
    return (a[0] + (b[0] - a[0]) * u, a[1] + (b[1] - a[1]) * u)


def arm_pose(side: str, extension: float) -> Dict[str, Point]:
    """Elbow/wrist for a lateral arm at the given extension in [0, 1].

    extension 0 is a right-angle bend, 1 a fully straight lateral arm; the
    elbow angle grows linearly from 90 to 180 degrees.
    """
    sh = NEUTRAL_POSE[f"{side}_shoulder"]
    direction = 1.0 if side == "right" else -1.0
    theta = 90.0 + 90.0 * extension
    phi = math.radians((180.0 - theta) / 2.0)
    elbow = (sh[0] + direction * ARM_SEGMENT * math.cos(phi),
             sh[1] + ARM_SEGMENT * math.sin(phi))
    wrist = (elbow[0] + direction * ARM_SEGMENT * math.cos(phi),
             elbow[1] - ARM_SEGMENT * math.sin(phi))
    return {f"{side}_elbow": elbow, f"{side}_wrist": wrist}


def apply_gesture(pose: Dict[str, Point], kind: GestureKind, envelope: float,
                  magnitude: float) -> None:
    """Overlay one gesture's displacement onto a neutral pose in place."""
    u = envelope * magnitude
    if kind is GestureKind.KNEE_RAISE:
        x, y = pose["right_knee"]
        pose["right_knee"] = (x, y - u * KNEE_LIFT)
    elif kind is GestureKind.HEAD_BUMP:
        x, y = pose["head"]
        pose["head"] = (x, y - u * HEAD_LIFT)
    elif kind is GestureKind.REACH_TOUCH:
        sh = NEUTRAL_POSE["right_shoulder"]
        wrist_full = (sh[0], sh[1] - REACH_RAISE)
        elbow_full = (sh[0], sh[1] - REACH_RAISE / 2.0)
        pose["right_wrist"] = _lerp(NEUTRAL_POSE["right_wrist"], wrist_full, u)
        pose["right_elbow"] = _lerp(NEUTRAL_POSE["right_elbow"], elbow_full, u)
    elif kind in (GestureKind.ELBOW_EXTEND_LEFT, GestureKind.ELBOW_EXTEND_RIGHT):
        side = "left" if kind is GestureKind.ELBOW_EXTEND_LEFT else "right"
        target = arm_pose(side, u)
        blend = min(1.0, envelope * 5.0)
        for name, point in target.items():
            pose[name] = _lerp(NEUTRAL_POSE[name], point, blend)
    elif kind in (GestureKind.LEAN_LEFT, GestureKind.LEAN_RIGHT):
        direction = -1.0 if kind is GestureKind.LEAN_LEFT else 1.0
        shift = direction * u * LEAN_SHIFT
        for name in ("head", "left_shoulder", "right_shoulder",
                     "left_elbow", "right_elbow", "left_wrist", "right_wrist"):
            x, y = pose[name]
            pose[name] = (x + shift, y)
    elif kind is GestureKind.DODGE:
        shift = -u * DODGE_SHIFT
        for name in LANDMARK_IDS:
            x, y = pose[name]
            pose[name] = (x + shift, y)


def pose_at(entries: List[ScriptEntry], t_ms: int, lead_ms: int) -> Dict[str, Point]:
    pose = dict(NEUTRAL_POSE)
    for entry in entries:
        start = entry.t_ms + lead_ms
        offset = t_ms - start
        if 0 < offset < gesture_duration_ms(entry.kind):
            apply_gesture(pose, entry.kind, _envelope(entry.kind, offset),
                          entry.magnitude)
            break
    return pose


def generate_frames(entries: List[ScriptEntry], fps: int = 30,
                    lead_ms: int = 1500, tail_ms: int = 500,
                    jitter_sigma: float = 0.0, seed: int = 0,
                    players: int = 1,
                    confidence: float = 0.9) -> List[LandmarkFrame]:
    """Render a script to landmark frames (interleaved when players=2)."""
    if entries:
        last = max(e.t_ms + gesture_duration_ms(e.kind) for e in entries)
    else:
        last = 0
    total_ms = lead_ms + last + tail_ms
    n_frames = total_ms * fps // 1000 + 1
    rng = random.Random(seed)
    frames: List[LandmarkFrame] = []
    for i in range(n_frames):
        t = i * 1000 // fps
        pose = pose_at(entries, t, lead_ms)
        for slot in range(players):
            landmarks = {}
            for name in LANDMARK_IDS:
                x, y = pose[name]
                if jitter_sigma > 0.0:
                    x += rng.gauss(0.0, jitter_sigma)
                    y += rng.gauss(0.0, jitter_sigma)
                landmarks[name] = RawLandmark(x, y, confidence)
            frames.append(LandmarkFrame(t, slot, landmarks))
    return frames

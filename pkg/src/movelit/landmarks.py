"""Landmark frame ingestion, occlusion masking, smoothing, and body scale.

The engine consumes timestamped frames of 13 named body keypoints from any
pose-estimation provider. This module turns raw frames into clean frames
(occlusion flags + staleness) and jitter-smoothed positions, and derives the
body-relative scale used to normalize every gesture threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .errors import FrameSchemaError, ScaleUnavailableError, StreamOrderError

# Closed set of tracked keypoints. Every frame carries a slot for each.
LANDMARK_IDS: Tuple[str, ...] = (
    "head",
    "left_shoulder", "right_shoulder",
    "left_elbow", "right_elbow",
    "left_wrist", "right_wrist",
    "left_hip", "right_hip",
    "left_knee", "right_knee",
    "left_ankle", "right_ankle",
)
LANDMARK_SET = frozenset(LANDMARK_IDS)

_MIRROR_MAP = {name: name for name in LANDMARK_IDS}
for _name in LANDMARK_IDS:
    if _name.startswith("left_"):
        _MIRROR_MAP[_name] = "right_" + _name[5:]
    elif _name.startswith("right_"):
        _MIRROR_MAP[_name] = "left_" + _name[6:]


@dataclass(frozen=True)
class RawLandmark:
    """Provider-reported point: normalized image coords plus confidence.

    x runs left to right, y top to bottom. Coordinates may fall outside
    [0, 1] when the provider reports off-frame points; confidence is always
    in [0, 1].
    """

    x: float
    y: float
    confidence: float


@dataclass(frozen=True)
class LandmarkFrame:
    timestamp_ms: int
    player_slot: int
    landmarks: Dict[str, RawLandmark]


@dataclass(frozen=True)
class CleanLandmark:
    """One landmark after masking/smoothing.

    position is None until the landmark has been observed non-occluded at
    least once; such landmarks are excluded downstream. stale_ms is the time
    since the last trusted (non-occluded) observation.
    """

    position: Optional[Tuple[float, float]]
    occluded: bool
    stale_ms: int


@dataclass(frozen=True)
class CleanFrame:
    timestamp_ms: int
    player_slot: int
    landmarks: Dict[str, CleanLandmark]


@dataclass(frozen=True)
class BodyScale:
    """Body-relative units: thresholds scale to the learner, not the screen."""

    shoulder_width: float
    torso_length: float


@dataclass(frozen=True)
class IngestConfig:
    confidence_gate: float = 0.5
    frame_margin: float = 0.05


@dataclass(frozen=True)
class SmoothConfig:
    alpha: float = 0.4  # exponential smoothing weight, in (0, 1]


def ingest(prev: Optional[CleanFrame], raw: LandmarkFrame,
           config: IngestConfig = IngestConfig()) -> CleanFrame:
    """Validate a raw frame and set occlusion flags and staleness.

    Positions pass through unchanged; a landmark is occluded iff its
    confidence is below the gate or it sits outside the frame margin.
    Raises StreamOrderError on non-monotonic timestamps and FrameSchemaError
    on missing slots.
    """
    if prev is not None and raw.timestamp_ms <= prev.timestamp_ms:
        raise StreamOrderError(
            f"timestamp {raw.timestamp_ms} not after {prev.timestamp_ms} "
            f"for player {raw.player_slot}")
    missing = LANDMARK_SET - raw.landmarks.keys()
    if missing:
        raise FrameSchemaError(f"missing landmark slots: {sorted(missing)}")

    dt = 0 if prev is None else raw.timestamp_ms - prev.timestamp_ms
    lo = -config.frame_margin
    hi = 1.0 + config.frame_margin
    gate = config.confidence_gate
    out: Dict[str, CleanLandmark] = {}
    for name in LANDMARK_IDS:
        lm = raw.landmarks[name]
        occluded = (lm.confidence < gate
                    or not (lo <= lm.x <= hi)
                    or not (lo <= lm.y <= hi))
        if occluded:
            prev_stale = prev.landmarks[name].stale_ms if prev is not None else 0
            stale = prev_stale + (dt if prev is not None else 0)
            out[name] = CleanLandmark((lm.x, lm.y), True, stale)
        else:
            out[name] = CleanLandmark((lm.x, lm.y), False, 0)
    return CleanFrame(raw.timestamp_ms, raw.player_slot, out)


@dataclass
class SmoothState:
    """Per-landmark exponential filter state. First trusted observation
    initializes the filter to the observed value."""

    positions: Dict[str, Tuple[float, float]] = field(default_factory=dict)


def smooth(state: SmoothState, frame: CleanFrame,
           config: SmoothConfig = SmoothConfig()) -> Tuple[SmoothState, CleanFrame]:
    """Apply per-landmark exponential smoothing to non-occluded landmarks.

    Occluded landmarks hold their last smoothed value (staleness accrues in
    ingest); landmarks never observed non-occluded are reported with
    position None and occluded True.
    """
    a = config.alpha
    held = state.positions
    out: Dict[str, CleanLandmark] = {}
    for name in LANDMARK_IDS:
        lm = frame.landmarks[name]
        if not lm.occluded:
            px, py = lm.position
            prev = held.get(name)
            if prev is None:
                sx, sy = px, py
            else:
                sx = a * px + (1.0 - a) * prev[0]
                sy = a * py + (1.0 - a) * prev[1]
            held[name] = (sx, sy)
            out[name] = CleanLandmark((sx, sy), False, 0)
        else:
            prev = held.get(name)
            if prev is None:
                out[name] = CleanLandmark(None, True, lm.stale_ms)
            else:
                out[name] = CleanLandmark(prev, True, lm.stale_ms)
    return state, CleanFrame(frame.timestamp_ms, frame.player_slot, out)


def _dist(p: Tuple[float, float], q: Tuple[float, float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _midpoint(p: Tuple[float, float], q: Tuple[float, float]) -> Tuple[float, float]:
    return ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)


def body_scale(frame: CleanFrame) -> BodyScale:
    """Shoulder width and torso length from a clean frame.

    Raises ScaleUnavailableError when any of the four defining landmarks is
    occluded; callers reuse the last known scale.
    """
    needed = ("left_shoulder", "right_shoulder", "left_hip", "right_hip")
    pts = {}
    for name in needed:
        lm = frame.landmarks[name]
        if lm.occluded or lm.position is None:
            raise ScaleUnavailableError(f"{name} occluded")
        pts[name] = lm.position
    width = _dist(pts["left_shoulder"], pts["right_shoulder"])
    torso = _dist(_midpoint(pts["left_shoulder"], pts["right_shoulder"]),
                  _midpoint(pts["left_hip"], pts["right_hip"]))
    if width <= 0.0 or torso <= 0.0:
        raise ScaleUnavailableError("degenerate body geometry")
    return BodyScale(width, torso)


def mirror(frame: CleanFrame) -> CleanFrame:
    """Horizontal flip: x -> 1-x with left/right landmark ids swapped.

    An involution; distances (and therefore body scale) are preserved.
    """
    out: Dict[str, CleanLandmark] = {}
    for name in LANDMARK_IDS:
        src = frame.landmarks[_MIRROR_MAP[name]]
        if src.position is None:
            out[name] = src
        else:
            x, y = src.position
            out[name] = CleanLandmark((1.0 - x, y), src.occluded, src.stale_ms)
    return CleanFrame(frame.timestamp_ms, frame.player_slot, out)

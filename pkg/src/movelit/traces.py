"""Landmark trace file I/O.

One JSON object per line: {"t": <int ms>, "p": <int slot>,
"lm": {"head": [x, y, c], ..., "right_ankle": [x, y, c]}}.
Lines beginning with '#' are comments. See docs/formats.md for the schema.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator, List, TextIO, Tuple, Union

from .errors import TraceParseError
from .landmarks import LANDMARK_IDS, LANDMARK_SET, LandmarkFrame, RawLandmark

Pathish = Union[str, "os.PathLike[str]"]


def parse_trace_line(line: str, line_no: int) -> LandmarkFrame:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TraceParseError(line_no, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise TraceParseError(line_no, "record is not an object")
    try:
        t = obj["t"]
        p = obj["p"]
        lm = obj["lm"]
    except KeyError as exc:
        raise TraceParseError(line_no, f"missing field {exc.args[0]!r}") from exc
    if not isinstance(t, int) or t < 0:
        raise TraceParseError(line_no, "'t' must be a non-negative integer")
    if not isinstance(p, int) or p < 0:
        raise TraceParseError(line_no, "'p' must be a non-negative integer")
    if not isinstance(lm, dict) or set(lm.keys()) != LANDMARK_SET:
        raise TraceParseError(line_no, "'lm' must carry exactly the 13 landmark slots")
    landmarks = {}
    for name in LANDMARK_IDS:
        triple = lm[name]
        if (not isinstance(triple, list) or len(triple) != 3
                or not all(isinstance(v, (int, float)) for v in triple)):
            raise TraceParseError(line_no, f"landmark {name!r} must be [x, y, c]")
        x, y, c = (float(v) for v in triple)
        if not 0.0 <= c <= 1.0:
            raise TraceParseError(line_no, f"landmark {name!r} confidence outside [0, 1]")
        landmarks[name] = RawLandmark(x, y, c)
    return LandmarkFrame(t, p, landmarks)


def iter_trace(lines: Iterable[str]) -> Iterator[LandmarkFrame]:
    """Yield frames from trace lines, skipping comments and blank lines."""
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield parse_trace_line(stripped, line_no)


def read_trace(path: Pathish) -> List[LandmarkFrame]:
    with open(path, "r", encoding="utf-8") as fh:
        return list(iter_trace(fh))


def format_frame(frame: LandmarkFrame) -> str:
    lm = {name: [frame.landmarks[name].x, frame.landmarks[name].y,
                 frame.landmarks[name].confidence]
          for name in LANDMARK_IDS}
    return json.dumps({"t": frame.timestamp_ms, "p": frame.player_slot, "lm": lm},
                      separators=(",", ":"))


def write_trace(path: Pathish, frames: Iterable[LandmarkFrame],
                header_comment: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header_comment:
            for part in header_comment.splitlines():
                fh.write(f"# {part}\n")
        for frame in frames:
            fh.write(format_frame(frame))
            fh.write("\n")

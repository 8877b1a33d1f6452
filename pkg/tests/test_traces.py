import pytest

from movelit import traces
from movelit.errors import TraceParseError
from movelit.synth import NEUTRAL_POSE
from movelit.landmarks import LANDMARK_IDS, LandmarkFrame, RawLandmark


def make_frame(t=0, slot=0):
    return LandmarkFrame(t, slot, {
        name: RawLandmark(NEUTRAL_POSE[name][0], NEUTRAL_POSE[name][1], 0.9)
        for name in LANDMARK_IDS})


def test_round_trip(tmp_path):
    frames = [make_frame(t) for t in (0, 33, 66)]
    path = tmp_path / "t.jsonl"
    traces.write_trace(path, frames, header_comment="example\ntrace")
    back = traces.read_trace(path)
    assert back == frames
    text = path.read_text()
    assert text.startswith("# example\n# trace\n")


def test_comments_and_blanks_skipped():
    line = traces.format_frame(make_frame(5))
    frames = list(traces.iter_trace(["# c", "", "   ", line]))
    assert len(frames) == 1 and frames[0].timestamp_ms == 5


def test_error_carries_line_number():
    line = traces.format_frame(make_frame())
    with pytest.raises(TraceParseError) as err:
        list(traces.iter_trace(["# ok", line, "{bad"]))
    assert "line 3" in str(err.value)


@pytest.mark.parametrize("mangle,fragment", [
    (lambda o: o.pop("t"), "missing field 't'"),
    (lambda o: o.__setitem__("t", -1), "'t' must be"),
    (lambda o: o.__setitem__("p", "x"), "'p' must be"),
    (lambda o: o["lm"].pop("head"), "13 landmark slots"),
    (lambda o: o["lm"].__setitem__("head", [0.5, 0.2]), "must be [x, y, c]"),
    (lambda o: o["lm"].__setitem__("head", [0.5, 0.2, 1.5]),
     "confidence outside"),
])
def test_schema_violations(mangle, fragment):
    import json
    obj = json.loads(traces.format_frame(make_frame()))
    mangle(obj)
    with pytest.raises(TraceParseError) as err:
        traces.parse_trace_line(json.dumps(obj), 7)
    assert "line 7" in str(err.value)
    assert fragment in str(err.value)


def test_non_object_line():
    with pytest.raises(TraceParseError):
        traces.parse_trace_line("[1,2]", 1)

"""Shared helpers for the test suite."""

from movelit.gesture import GestureConfig
from movelit.landmarks import LANDMARK_IDS, LandmarkFrame, RawLandmark
from movelit.session import EngineConfig, _PlayerPipeline


def frames_from_poses(timed_poses, slot=0, confidence=0.9):
    """[(t_ms, {landmark: (x, y)})] -> LandmarkFrames."""
    out = []
    for t, pose in timed_poses:
        out.append(LandmarkFrame(t, slot, {
            name: RawLandmark(pose[name][0], pose[name][1], confidence)
            for name in LANDMARK_IDS}))
    return out


def detect_events(frames, gesture=None, mirror=False):
    """Run frames through the full ingest->smooth->detect pipeline."""
    config = EngineConfig(gesture=gesture or GestureConfig(),
                         mirror_input=mirror)
    pipelines = {}
    events = []
    for frame in frames:
        pipe = pipelines.get(frame.player_slot)
        if pipe is None:
            pipe = _PlayerPipeline(frame.player_slot, config)
            pipelines[frame.player_slot] = pipe
        _, evs = pipe.feed(frame)
        events.extend(evs)
    return events

#!/usr/bin/env python3
"""Regenerate the frozen golden fixtures under tests/data/.

Run from the repository root:  python3 tools/gen_fixtures.py

The goldens are byte-exact regression anchors; regenerate them only when a
deliberate engine behavior change makes the old bytes obsolete, and review
the diff of the logs when you do.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from movelit import traces
from movelit.bot import RoundDriver
from movelit.game import GameConfig, GameMode, MasteryCount
from movelit.session import EngineConfig, replay

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "data")

GOLDENS = {
    "golden_catch": EngineConfig(
        mode=GameMode.CENTRAL_TENDENCY_CATCH, seed=11,
        game=GameConfig(end=MasteryCount(5)), session_id="golden-catch"),
    "golden_knee": EngineConfig(
        mode=GameMode.KNEE_COUNT, seed=23,
        game=GameConfig(end=MasteryCount(5)), session_id="golden-knee"),
}


def main() -> None:
    os.makedirs(DATA_DIR, exist_ok=True)
    for name, config in GOLDENS.items():
        frames = []
        driver = RoundDriver(config, frame_sink=frames)
        driver.run()
        trace_path = os.path.join(DATA_DIR, f"{name}_trace.jsonl")
        log_path = os.path.join(DATA_DIR, f"{name}_log.jsonl")
        traces.write_trace(trace_path, frames)
        log = replay(trace_path, config)
        log.write(log_path)
        totals = log.footer
        print(f"{name}: {len(frames)} frames, score {totals['score']}, "
              f"{totals['correct']}/{totals['answered']} correct")


if __name__ == "__main__":
    main()

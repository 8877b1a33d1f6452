"""Benchmark and session reporting: delimited output plus rendered figures.

All figures are rendered headless (Agg). CSV files sit alongside the
figures so results can be inspected without re-running anything.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .landmarks import LandmarkFrame  # noqa: E402
from .session import EngineConfig, EngineSession, SessionLog  # noqa: E402


@dataclass(frozen=True)
class BenchResult:
    frames: int
    latencies_ms: List[float]
    mean_ms: float
    p50_ms: float
    p95_ms: float
    max_ms: float
    throughput_fps: float

    def to_record(self) -> dict:
        return {
            "frames": self.frames,
            "mean_ms": self.mean_ms,
            "p50_ms": self.p50_ms,
            "p95_ms": self.p95_ms,
            "max_ms": self.max_ms,
            "throughput_fps": self.throughput_fps,
        }


def _percentile(ordered: Sequence[float], q: float) -> float:
    """Nearest-rank percentile on a pre-sorted sample."""
    if not ordered:
        raise ValueError("empty sample")
    rank = max(1, min(len(ordered), int(-(-q * len(ordered) // 1))))
    return ordered[rank - 1]


def run_benchmark(frames: Iterable[LandmarkFrame], config: EngineConfig,
                  repetitions: int = 1) -> BenchResult:
    """Time the full per-frame pipeline (ingest through game step).

    Each repetition replays the same frames through a fresh session so the
    numbers include state-machine and game bookkeeping, not just parsing.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    frame_list = list(frames)
    if not frame_list:
        raise ValueError("benchmark needs at least one frame")
    latencies: List[float] = []
    for _ in range(repetitions):
        session = EngineSession(config)
        for frame in frame_list:
            if session.ended:
                break
            t0 = time.perf_counter()
            session.feed(frame)
            latencies.append((time.perf_counter() - t0) * 1000.0)
        session.finish()
    ordered = sorted(latencies)
    total_s = sum(latencies) / 1000.0
    mean = sum(latencies) / len(latencies)
    return BenchResult(
        frames=len(latencies),
        latencies_ms=latencies,
        mean_ms=mean,
        p50_ms=_percentile(ordered, 0.50),
        p95_ms=_percentile(ordered, 0.95),
        max_ms=ordered[-1],
        throughput_fps=len(latencies) / total_s if total_s > 0 else float("inf"),
    )


def write_latency_csv(path: str, result: BenchResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame", "latency_ms"])
        for i, ms in enumerate(result.latencies_ms):
            writer.writerow([i, f"{ms:.6f}"])


def latency_figure(path: str, result: BenchResult,
                   budget_ms: Optional[float] = None) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.hist(result.latencies_ms, bins=60, color="#4878cf", edgecolor="white")
    ax.axvline(result.p95_ms, color="#d65f5f", linestyle="--",
               label=f"p95 = {result.p95_ms:.3f} ms")
    if budget_ms is not None:
        ax.axvline(budget_ms, color="#333333", linestyle=":",
                   label=f"budget = {budget_ms:g} ms")
    ax.set_xlabel("per-frame latency (ms)")
    ax.set_ylabel("frames")
    ax.set_title(f"Pipeline latency over {result.frames} frames "
                 f"({result.throughput_fps:.0f} fps)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _question_rows(log: SessionLog) -> List[dict]:
    rows: List[dict] = []
    started = {}
    for rec in log.records:
        if rec["rec"] != "game":
            continue
        if rec["ev"] == "question_start":
            started[rec["qid"]] = (rec["t"], rec["index"], rec["kind"])
        elif rec["ev"] in ("answer_correct", "answer_incorrect"):
            t0, index, kind = started.get(rec["qid"], (None, None, None))
            rows.append({
                "index": index,
                "qid": rec["qid"],
                "kind": kind,
                "correct": int(rec["ev"] == "answer_correct"),
                "latency_ms": rec["t"] - t0 if t0 is not None else "",
                "score": rec["score"],
                "streak": rec["streak"],
                "mastery": rec["mastery"],
                "t_ms": rec["t"],
            })
    return rows


def write_session_csv(path: str, log: SessionLog) -> None:
    fields = ["index", "qid", "kind", "correct", "latency_ms",
              "score", "streak", "mastery", "t_ms"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in _question_rows(log):
            writer.writerow(row)


def session_figure(path: str, log: SessionLog) -> None:
    """Score and mastery trajectory over the round."""
    rows = _question_rows(log)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
    if rows:
        ts = [r["t_ms"] / 1000.0 for r in rows]
        ax1.step(ts, [r["score"] for r in rows], where="post",
                 color="#4878cf", label="score")
        ax1.scatter([t for t, r in zip(ts, rows) if not r["correct"]],
                    [r["score"] for r in rows if not r["correct"]],
                    color="#d65f5f", zorder=3, label="incorrect answer")
        ax2.step(ts, [r["mastery"] for r in rows], where="post",
                 color="#6acc65", label="mastery")
    ax1.set_ylabel("score")
    ax1.legend(loc="upper left")
    ax2.set_ylabel("mastery (0-100)")
    ax2.set_xlabel("time (s)")
    ax2.set_ylim(0, 105)
    mode = log.header.get("mode", "?")
    ax1.set_title(f"Round progress: {mode}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

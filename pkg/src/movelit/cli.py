"""Command-line interface.

Subcommands:
  synth   render a gesture script into a landmark trace
  replay  replay a landmark trace into a session log
  play    drive a full scripted round headlessly and write its log
  stats   summarize a session log (text/JSON, CSV, figure)
  bench   time the frame pipeline against a latency budget

Exit codes: 0 success, 1 I/O failure, 2 malformed input, 3 budget breach.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import List, Optional

from . import synth, traces
from .bot import play_round
from .errors import ConfigurationError, LogIntegrityError, MovelitError, \
    TraceParseError
from .game import GameConfig, GameMode, MasteryCount, TimeLimit
from .gesture import GestureConfig
from .landmarks import IngestConfig, SmoothConfig
from .session import EngineConfig, SessionLog, replay, summarize
from .synth import SynthScriptError

EXIT_OK = 0
EXIT_IO = 1
EXIT_FORMAT = 2
EXIT_BUDGET = 3


def _parse_end(text: str):
    kind, sep, value = text.partition(":")
    try:
        if kind == "mastery" and sep:
            return MasteryCount(int(value))
        if kind == "time" and sep:
            return TimeLimit(float(value))
    except (ValueError, ConfigurationError) as exc:
        raise ConfigurationError(f"bad end condition {text!r}: {exc}")
    raise ConfigurationError(
        f"end condition must be 'mastery:N' or 'time:SECONDS', got {text!r}")


_CONFIG_SECTIONS = {
    "game": GameConfig,
    "gesture": GestureConfig,
    "ingest": IngestConfig,
    "smoothing": SmoothConfig,
}


def _coerce(current, text: str):
    if isinstance(current, bool):
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {text!r}")
    if isinstance(current, int):
        return int(text)
    if isinstance(current, float):
        return float(text)
    if isinstance(current, str):
        return text
    raise ValueError("field is not overridable from the command line")


def _apply_overrides(overrides: List[str], sections: dict) -> dict:
    """Apply repeated --config section.field=value entries."""
    out = dict(sections)
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--config needs key=value, got {item!r}")
        section, dot, field_name = key.partition(".")
        if not dot or section not in out:
            raise ConfigurationError(
                f"--config key must start with one of "
                f"{sorted(out)} (got {key!r})")
        obj = out[section]
        if not hasattr(obj, field_name):
            raise ConfigurationError(
                f"unknown field {field_name!r} in section {section!r}")
        try:
            coerced = _coerce(getattr(obj, field_name), value)
        except ValueError as exc:
            raise ConfigurationError(f"--config {key}: {exc}")
        out[section] = dataclasses.replace(obj, **{field_name: coerced})
    return out


def _engine_config(args) -> EngineConfig:
    mode = GameMode(args.mode)
    players = 2 if mode is GameMode.COLLABORATIVE_MIXED else args.players
    game = GameConfig(end=_parse_end(args.end), players=players)
    sections = _apply_overrides(args.config or [], {
        "game": game,
        "gesture": GestureConfig(),
        "ingest": IngestConfig(),
        "smoothing": SmoothConfig(),
    })
    return EngineConfig(
        mode=mode, seed=args.seed,
        game=sections["game"], gesture=sections["gesture"],
        ingest=sections["ingest"], smoothing=sections["smoothing"],
        mirror_input=args.mirror, session_id=args.session_id)


def _add_engine_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", default="central_tendency_catch",
                        choices=[m.value for m in GameMode])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--end", default="time:60",
                        help="round end condition: mastery:N or time:SECONDS")
    parser.add_argument("--players", type=int, default=1, choices=(1, 2))
    parser.add_argument("--mirror", action="store_true",
                        help="mirror input frames left-right")
    parser.add_argument("--session-id", default="session")
    parser.add_argument("--config", action="append", metavar="SECTION.FIELD=VALUE",
                        help="override a config field, e.g. "
                             "gesture.amplitude_scale=0.6 (repeatable)")


def _cmd_synth(args) -> int:
    if args.script == "-":
        lines = sys.stdin.readlines()
    else:
        with open(args.script, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    entries = synth.parse_script(lines)
    frames = synth.generate_frames(
        entries, fps=args.fps, jitter_sigma=args.jitter, seed=args.seed,
        players=args.players)
    traces.write_trace(args.out, frames)
    print(f"wrote {len(frames)} frames to {args.out}")
    return EXIT_OK


def _cmd_replay(args) -> int:
    config = _engine_config(args)
    log = replay(args.trace, config)
    log.write(args.out)
    totals = log.footer
    print(f"wrote {args.out}: {totals['frames']} frames, "
          f"{totals['gestures']} gestures, score {totals['score']}")
    return EXIT_OK


def _cmd_play(args) -> int:
    config = _engine_config(args)
    log = play_round(config, fps=args.fps)
    log.write(args.out)
    totals = log.footer
    print(f"wrote {args.out}: {totals['correct']}/{totals['answered']} correct, "
          f"score {totals['score']}")
    return EXIT_OK


def _cmd_stats(args) -> int:
    log = SessionLog.read(args.log)
    summary = summarize(log)
    record = {
        "session_id": log.header.get("session_id"),
        "mode": log.header.get("mode"),
        "ratings_n": summary.n,
        "ratings_mean": summary.mean,
        "ratings_sd": summary.sd,
        "accuracy": summary.accuracy,
        "mean_response_latency_ms": summary.mean_response_latency_ms,
        **{k: v for k, v in (log.footer or {}).items()},
    }
    if args.format == "json":
        print(json.dumps(record, indent=2))
    else:
        for key, value in record.items():
            print(f"{key}: {value}")
    if args.csv or args.figure:
        from . import report
        if args.csv:
            report.write_session_csv(args.csv, log)
            print(f"wrote {args.csv}")
        if args.figure:
            report.session_figure(args.figure, log)
            print(f"wrote {args.figure}")
    return EXIT_OK


_BENCH_SCRIPT = """\
0 elbow_extend_right
1200 knee_raise
2000 reach_touch
3000 head_bump
3800 lean_left
4800 lean_right
5800 dodge
9200 elbow_extend_left
"""


def _cmd_bench(args) -> int:
    from . import report
    config = _engine_config(args)
    if args.trace:
        frames = traces.read_trace(args.trace)
    else:
        entries = synth.parse_script(_BENCH_SCRIPT.splitlines())
        frames = synth.generate_frames(entries, fps=30, jitter_sigma=0.005,
                                       seed=args.seed)
    result = report.run_benchmark(frames, config, repetitions=args.repetitions)
    if args.format == "json":
        print(json.dumps(result.to_record(), indent=2))
    else:
        for key, value in result.to_record().items():
            print(f"{key}: {value:.4f}" if isinstance(value, float)
                  else f"{key}: {value}")
    if args.csv:
        report.write_latency_csv(args.csv, result)
        print(f"wrote {args.csv}")
    if args.figure:
        report.latency_figure(args.figure, result, budget_ms=args.budget_ms)
        print(f"wrote {args.figure}")
    if args.budget_ms is not None and result.p95_ms > args.budget_ms:
        print(f"FAIL: p95 {result.p95_ms:.3f} ms exceeds budget "
              f"{args.budget_ms:g} ms", file=sys.stderr)
        return EXIT_BUDGET
    if args.budget_ms is not None:
        print(f"PASS: p95 {result.p95_ms:.3f} ms within budget "
              f"{args.budget_ms:g} ms")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="movelit",
        description="Deterministic motion-driven data-literacy game engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="render a gesture script into a trace")
    p.add_argument("script", help="gesture script path, or - for stdin")
    p.add_argument("--out", required=True)
    p.add_argument("--fps", type=int, default=30)
    p.add_argument("--jitter", type=float, default=0.0, metavar="SIGMA")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--players", type=int, default=1, choices=(1, 2))
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("replay", help="replay a trace into a session log")
    p.add_argument("trace")
    p.add_argument("--out", required=True)
    _add_engine_args(p)
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("play", help="drive a scripted round headlessly")
    p.add_argument("--out", required=True)
    p.add_argument("--fps", type=int, default=30)
    _add_engine_args(p)
    p.set_defaults(func=_cmd_play)

    p = sub.add_parser("stats", help="summarize a session log")
    p.add_argument("log")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--csv", help="write per-question rows to this CSV")
    p.add_argument("--figure", help="write a score/mastery figure (png)")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("bench", help="time the frame pipeline")
    p.add_argument("--trace", help="trace to replay (default: synthetic)")
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--budget-ms", type=float, default=5.0,
                   help="p95 latency budget; breach exits 3")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--csv", help="write per-frame latencies to this CSV")
    p.add_argument("--figure", help="write a latency histogram (png)")
    _add_engine_args(p)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TraceParseError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (SynthScriptError, LogIntegrityError, ConfigurationError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except MovelitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

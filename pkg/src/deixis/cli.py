"""Operator entry point.

Subcommands run pipeline stages individually or end to end; configuration
precedence is flags > environment > ``deixis.toml`` > defaults. Offline
mode needs no credentials and performs no network traffic.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import fields
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .bundle import write_bundle
from .jsonutil import canonical_dumps
from .logio import parse_meeting_log, serialize_meeting_log
from .matching import build_match_set
from .model import DeixisError, InvalidParams, MeetingLog
from .pipeline import (
    MODE_LLM,
    MODE_OFFLINE,
    PipelineConfig,
    classify_gestures,
    run_pipeline,
)
from .segmentation import assemble_utterances
from .synth import SynthParams, synthesize_log
from .transport import ENV_KEY, ENV_URL

log = logging.getLogger("deixis")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2

CONFIG_FILE = "deixis.toml"


class _JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "level": record.levelname.lower(),
            "logger": record.name,
            "msg": record.getMessage(),
        }
        return json.dumps(payload, sort_keys=True)


def _setup_logging(json_logs: bool, verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        _JsonFormatter() if json_logs else logging.Formatter("%(levelname)s %(name)s: %(message)s")
    )
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


def _load_config_file(cwd: Path) -> dict:
    path = cwd / CONFIG_FILE
    if not path.is_file():
        return {}
    with path.open("rb") as fh:
        doc = tomllib.load(fh)
    return doc.get("deixis", doc) or {}


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """flags > env > deixis.toml > defaults"""
    values: dict = {}
    file_cfg = _load_config_file(Path.cwd())
    for f in fields(PipelineConfig):
        if f.name in file_cfg:
            values[f.name] = file_cfg[f.name]
    if os.environ.get(ENV_URL):
        values["llm_url"] = os.environ[ENV_URL]
    if os.environ.get(ENV_KEY):
        values["llm_key"] = os.environ[ENV_KEY]
    for name in (
        "mode", "llm_url", "llm_key", "llm_model",
        "max_gap_ms", "attach_window_ms", "minutes_window", "concurrency",
    ):
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return PipelineConfig(**values)


def _read_log(path: str) -> MeetingLog:
    return parse_meeting_log(Path(path).read_bytes())


def _print(doc) -> None:
    sys.stdout.write(canonical_dumps(doc))


def _match_set_doc(log_: MeetingLog, config: PipelineConfig) -> dict:
    utterances = assemble_utterances(log_.transcript_words, config.segmentation_rules())
    ms = build_match_set(log_, utterances, config.match_params())
    return {
        "utterances": [
            {"id": u.id, "speaker": u.speaker, "start_ms": u.start_ms, "end_ms": u.end_ms, "text": u.text}
            for u in utterances
        ],
        "transient_matches": [
            {
                "id": m.match_id,
                "gesture": m.segment.parent_gesture,
                "segment_index": m.segment.segment_index,
                "utterance": m.utterance,
                "start_ms": m.segment.start_ms,
                "end_ms": m.segment.end_ms,
            }
            for m in ms.transient_matches
        ],
        "durable_spans": [
            {"gesture": d.gesture, "visible_from_ms": d.visible_from_ms, "visible_until_ms": d.visible_until_ms}
            for d in ms.durable_spans
        ],
        "dropped": [{"gesture": d.gesture, "reason": d.reason.value} for d in ms.dropped],
        "provenance_states": len(ms.provenance_timeline),
    }


def cmd_validate(args: argparse.Namespace) -> int:
    log_ = _read_log(args.log)
    _print(
        {
            "ok": True,
            "meeting_id": log_.meeting_id,
            "participants": len(log_.participants),
            "artboards": len(log_.artboards),
            "words": len(log_.transcript_words),
            "gestures": len(log_.gestures),
            "provenance": len(log_.provenance),
            "focus_events": len(log_.focus_events),
        }
    )
    return EXIT_OK


def cmd_match(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    _print(_match_set_doc(_read_log(args.log), config))
    return EXIT_OK


def cmd_extract(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    bundle = run_pipeline(_read_log(args.log), config)
    _print({"reference_spans": bundle.to_dict()["reference_spans"]})
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    log_ = _read_log(args.log)
    utterances = assemble_utterances(log_.transcript_words, config.segmentation_rules())
    ms = build_match_set(log_, utterances, config.match_params())
    labels = classify_gestures(log_, ms, utterances)
    _print({"taxonomy": [{"gesture": gid, **label} for gid, label in sorted(labels.items())]})
    return EXIT_OK


def cmd_minutes(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    bundle = run_pipeline(_read_log(args.log), config)
    _print({"minutes": bundle.to_dict()["minutes"]})
    return EXIT_OK


def cmd_build(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    log_path = Path(args.log)
    bundle = run_pipeline(_read_log(args.log), config)
    write_bundle(bundle, args.out, asset_root=log_path.parent)
    log.info("bundle written to %s", args.out)
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    weights = tuple(float(w) for w in args.case_weights.split(","))
    if len(weights) != 3:
        raise InvalidParams("--case-weights needs three comma-separated numbers")
    params = SynthParams(
        n_speakers=args.speakers,
        n_utterances=args.utterances,
        n_gestures=args.gestures,
        n_provenance=args.provenance,
        duration_ms=args.duration_ms,
        case_weights=weights,
        p_pencil=args.pencil,
        p_doodle=args.doodles,
        p_gap_gesture=args.gap_gestures,
    )
    data = serialize_meeting_log(synthesize_log(args.seed, params))
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_OK


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=(MODE_OFFLINE, MODE_LLM), default=None)
    p.add_argument("--llm-url", dest="llm_url", default=None)
    p.add_argument("--llm-model", dest="llm_model", default=None)
    p.add_argument("--window", dest="minutes_window", type=int, default=None)
    p.add_argument("--attach-window-ms", dest="attach_window_ms", type=int, default=None)
    p.add_argument("--max-gap-ms", dest="max_gap_ms", type=int, default=None)
    p.add_argument("--concurrency", dest="concurrency", type=int, default=None)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deixis",
        description="Turn recorded data-meeting logs into interactive, gesture-linked notes.",
    )
    parser.add_argument("--log-json", action="store_true", help="structured JSON diagnostics on stderr")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, handler, needs_cfg in (
        ("validate", cmd_validate, False),
        ("match", cmd_match, True),
        ("extract", cmd_extract, True),
        ("classify", cmd_classify, True),
        ("minutes", cmd_minutes, True),
    ):
        p = sub.add_parser(name)
        p.add_argument("log")
        if needs_cfg:
            _add_config_flags(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("build", help="full bundle")
    p.add_argument("log")
    p.add_argument("-o", "--out", required=True)
    _add_config_flags(p)
    p.set_defaults(handler=cmd_build)

    p = sub.add_parser("synth", help="deterministic fixture generator")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--out", default=None)
    p.add_argument("--speakers", type=int, default=2)
    p.add_argument("--utterances", type=int, default=12)
    p.add_argument("--gestures", type=int, default=8)
    p.add_argument("--provenance", type=int, default=0)
    p.add_argument("--duration-ms", dest="duration_ms", type=int, default=120_000)
    p.add_argument("--case-weights", default="0.6,0.25,0.15")
    p.add_argument("--pencil", type=float, default=0.15)
    p.add_argument("--doodles", type=float, default=0.0)
    p.add_argument("--gap-gestures", type=float, default=0.0)
    p.set_defaults(handler=cmd_synth)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    _setup_logging(args.log_json, args.verbose)
    try:
        return args.handler(args)
    except (DeixisError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:  # pragma: no cover - internal bug path
        print(f"internal error: {e.__class__.__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())

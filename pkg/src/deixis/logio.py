"""Reading and writing the meeting-log file format.

One UTF-8 JSON document per meeting. Top-level keys: ``meeting_id,
started_at, participants, artboards, transcript, gestures, provenance,
focus``; gesture points are ``[x, y, t]`` triples. Unknown keys are ignored
for forward compatibility. The same structural rules are published as a JSON
Schema in ``deixis/schemas/meeting_log.schema.json`` (copied to ``docs/``).
"""

from __future__ import annotations

import json
import re
from datetime import datetime
from typing import Any

from .jsonutil import canonical_bytes
from .model import (
    Artboard,
    ArtboardKind,
    FocusEvent,
    GestureEvent,
    IntegrityViolation,
    MalformedJson,
    MeetingLog,
    Participant,
    ProvenanceState,
    SchemaViolation,
    StrokePoint,
    Tool,
    TranscriptWord,
)

_COLOR_RE = re.compile(r"^#[0-9a-fA-F]{6}$")


def _type_name(v: Any) -> str:
    return {type(None): "null", bool: "boolean", int: "integer", float: "number",
            str: "string", list: "array", dict: "object"}.get(type(v), type(v).__name__)


def _get(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise SchemaViolation(f"missing field '{key}' at {path}")
    return obj[key]


def _str(obj: dict, key: str, path: str) -> str:
    v = _get(obj, key, path)
    if not isinstance(v, str):
        raise SchemaViolation(f"field '{key}' at {path}.{key} must be string, got {_type_name(v)}")
    return v


def _int(obj: dict, key: str, path: str, minimum: int | None = None) -> int:
    v = _get(obj, key, path)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaViolation(f"field '{key}' at {path}.{key} must be integer, got {_type_name(v)}")
    if minimum is not None and v < minimum:
        raise SchemaViolation(f"field '{key}' at {path}.{key} must be >= {minimum}, got {v}")
    return v


def _list(obj: dict, key: str, path: str) -> list:
    v = _get(obj, key, path)
    if not isinstance(v, list):
        raise SchemaViolation(f"field '{key}' at {path}.{key} must be array, got {_type_name(v)}")
    return v


def _obj(v: Any, path: str) -> dict:
    if not isinstance(v, dict):
        raise SchemaViolation(f"value at {path} must be object, got {_type_name(v)}")
    return v


def _coord(v: Any, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaViolation(f"coordinate at {path} must be number, got {_type_name(v)}")
    if not 0.0 <= v <= 1.0:
        raise SchemaViolation(f"coordinate at {path} must be in [0, 1], got {v}")
    return float(v)


def _parse_point(v: Any, path: str) -> StrokePoint:
    if not isinstance(v, list) or len(v) != 3:
        raise SchemaViolation(f"point at {path} must be an [x, y, t] triple")
    x = _coord(v[0], f"{path}[0]")
    y = _coord(v[1], f"{path}[1]")
    t = v[2]
    if isinstance(t, bool) or not isinstance(t, int) or t < 0:
        raise SchemaViolation(f"point time at {path}[2] must be integer >= 0")
    return StrokePoint(x, y, t)


def _parse_participant(v: Any, path: str) -> Participant:
    o = _obj(v, path)
    color = _str(o, "color", path)
    if not _COLOR_RE.match(color):
        raise SchemaViolation(f"field 'color' at {path}.color must match #RRGGBB, got {color!r}")
    return Participant(id=_str(o, "id", path), display_name=_str(o, "display_name", path), color=color)


def _parse_artboard(v: Any, path: str) -> Artboard:
    o = _obj(v, path)
    kind = _str(o, "kind", path)
    if kind not in (ArtboardKind.STATIC.value, ArtboardKind.INTERACTIVE.value):
        raise SchemaViolation(f"field 'kind' at {path}.kind must be 'static' or 'interactive', got {kind!r}")
    return Artboard(
        id=_str(o, "id", path),
        kind=ArtboardKind(kind),
        source=_str(o, "source", path),
        width=_int(o, "width", path, minimum=1),
        height=_int(o, "height", path, minimum=1),
    )


def _parse_word(v: Any, path: str) -> TranscriptWord:
    o = _obj(v, path)
    return TranscriptWord(
        text=_str(o, "text", path),
        start_ms=_int(o, "start_ms", path, minimum=0),
        end_ms=_int(o, "end_ms", path, minimum=0),
        speaker=_str(o, "speaker", path),
    )


def _parse_gesture(v: Any, path: str) -> GestureEvent:
    o = _obj(v, path)
    gid = _str(o, "id", path)
    tool = _str(o, "tool", path)
    if tool not in (Tool.LASER.value, Tool.PENCIL.value):
        raise SchemaViolation(f"field 'tool' at {path}.tool must be 'laser' or 'pencil', got {tool!r}")
    raw_points = _list(o, "points", path)
    if not raw_points:
        raise SchemaViolation(f"field 'points' at {path}.points must have >= 1 point")
    points = tuple(_parse_point(p, f"{path}.points[{i}]") for i, p in enumerate(raw_points))
    erased = o.get("erased_at_ms")
    if erased is not None:
        if isinstance(erased, bool) or not isinstance(erased, int) or erased < 0:
            raise SchemaViolation(f"field 'erased_at_ms' at {path}.erased_at_ms must be integer >= 0 or null")
        if tool == Tool.LASER.value:
            raise SchemaViolation(
                f"field 'erased_at_ms' at {path}.erased_at_ms: laser gestures are transient "
                f"and cannot carry erased_at_ms (gesture {gid!r})"
            )
    return GestureEvent(
        id=gid,
        tool=Tool(tool),
        user=_str(o, "user", path),
        artboard=_str(o, "artboard", path),
        points=points,
        erased_at_ms=erased,
    )


def _parse_provenance(v: Any, path: str) -> ProvenanceState:
    o = _obj(v, path)
    state = _get(o, "state", path)
    if not isinstance(state, dict):
        raise SchemaViolation(f"field 'state' at {path}.state must be object, got {_type_name(state)}")
    return ProvenanceState(
        t_ms=_int(o, "t_ms", path, minimum=0),
        user=_str(o, "user", path),
        artboard=_str(o, "artboard", path),
        action=_str(o, "action", path),
        state=state,
    )


def _parse_focus(v: Any, path: str) -> FocusEvent:
    o = _obj(v, path)
    return FocusEvent(t_ms=_int(o, "t_ms", path, minimum=0), artboard=_str(o, "artboard", path))


def parse_meeting_log(data: bytes) -> MeetingLog:
    """Parse and fully validate a meeting-log document.

    Raises MalformedJson, SchemaViolation, or IntegrityViolation.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MalformedJson(f"input is not UTF-8: {e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedJson(f"input is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise SchemaViolation(f"top level must be object, got {_type_name(doc)}")

    meeting_id = _str(doc, "meeting_id", "$")
    started_at = _str(doc, "started_at", "$")
    try:
        datetime.fromisoformat(started_at.replace("Z", "+00:00"))
    except ValueError:
        raise SchemaViolation(f"field 'started_at' at $.started_at is not ISO-8601: {started_at!r}")

    participants = tuple(
        _parse_participant(v, f"$.participants[{i}]") for i, v in enumerate(_list(doc, "participants", "$"))
    )
    artboards = tuple(
        _parse_artboard(v, f"$.artboards[{i}]") for i, v in enumerate(_list(doc, "artboards", "$"))
    )
    transcript = _obj(_get(doc, "transcript", "$"), "$.transcript")
    words = tuple(
        _parse_word(v, f"$.transcript.words[{i}]")
        for i, v in enumerate(_list(transcript, "words", "$.transcript"))
    )
    gestures = tuple(_parse_gesture(v, f"$.gestures[{i}]") for i, v in enumerate(_list(doc, "gestures", "$")))
    provenance = tuple(
        _parse_provenance(v, f"$.provenance[{i}]") for i, v in enumerate(_list(doc, "provenance", "$"))
    )
    focus = tuple(_parse_focus(v, f"$.focus[{i}]") for i, v in enumerate(_list(doc, "focus", "$")))

    log = MeetingLog(
        meeting_id=meeting_id,
        started_at=started_at,
        participants=participants,
        artboards=artboards,
        transcript_words=words,
        gestures=gestures,
        provenance=provenance,
        focus_events=focus,
    )
    check_integrity(log)
    return log


def check_integrity(log: MeetingLog) -> None:
    """Referential and ordering invariants over an in-memory log."""
    pids: set[str] = set()
    for p in log.participants:
        if p.id in pids:
            raise IntegrityViolation(f"duplicate participant id {p.id!r}")
        pids.add(p.id)
    aids: set[str] = set()
    kinds: dict[str, ArtboardKind] = {}
    for a in log.artboards:
        if a.id in aids:
            raise IntegrityViolation(f"duplicate artboard id {a.id!r}")
        aids.add(a.id)
        kinds[a.id] = a.kind

    prev_start = 0
    for i, w in enumerate(log.transcript_words):
        if w.speaker not in pids:
            raise IntegrityViolation(f"word {i} ({w.text!r}) references unknown speaker {w.speaker!r}")
        if w.start_ms > w.end_ms:
            raise IntegrityViolation(f"word {i} ({w.text!r}) has start_ms {w.start_ms} > end_ms {w.end_ms}")
        if w.start_ms < prev_start:
            raise IntegrityViolation(f"word {i} ({w.text!r}) breaks start_ms ordering")
        prev_start = w.start_ms

    gids: set[str] = set()
    for g in log.gestures:
        if g.id in gids:
            raise IntegrityViolation(f"duplicate gesture id {g.id!r}")
        gids.add(g.id)
        if g.user not in pids:
            raise IntegrityViolation(f"gesture {g.id!r} references unknown participant {g.user!r}")
        if g.artboard not in aids:
            raise IntegrityViolation(f"gesture {g.id!r} references unknown artboard {g.artboard!r}")
        for a, b in zip(g.points, g.points[1:]):
            if b.t_ms < a.t_ms:
                raise IntegrityViolation(f"gesture {g.id!r} has non-monotonic point times")
        if g.erased_at_ms is not None and g.erased_at_ms <= g.points[-1].t_ms:
            raise IntegrityViolation(
                f"gesture {g.id!r} erased_at_ms {g.erased_at_ms} not after last point t {g.points[-1].t_ms}"
            )

    prev_t = 0
    for i, s in enumerate(log.provenance):
        if s.user not in pids:
            raise IntegrityViolation(f"provenance state {i} references unknown participant {s.user!r}")
        if s.artboard not in aids:
            raise IntegrityViolation(f"provenance state {i} references unknown artboard {s.artboard!r}")
        if kinds[s.artboard] is not ArtboardKind.INTERACTIVE:
            raise IntegrityViolation(f"provenance state {i} targets non-interactive artboard {s.artboard!r}")
        if s.t_ms < prev_t:
            raise IntegrityViolation(f"provenance state {i} breaks t_ms ordering")
        prev_t = s.t_ms

    prev_t = 0
    for i, f in enumerate(log.focus_events):
        if f.artboard not in aids:
            raise IntegrityViolation(f"focus event {i} references unknown artboard {f.artboard!r}")
        if i == 0 and f.t_ms != 0:
            raise IntegrityViolation(f"first focus event must be at t_ms 0, got {f.t_ms}")
        if f.t_ms < prev_t:
            raise IntegrityViolation(f"focus event {i} breaks t_ms ordering")
        prev_t = f.t_ms


def log_to_dict(log: MeetingLog) -> dict:
    return {
        "meeting_id": log.meeting_id,
        "started_at": log.started_at,
        "participants": [
            {"id": p.id, "display_name": p.display_name, "color": p.color} for p in log.participants
        ],
        "artboards": [
            {"id": a.id, "kind": a.kind.value, "source": a.source, "width": a.width, "height": a.height}
            for a in log.artboards
        ],
        "transcript": {
            "words": [
                {"text": w.text, "start_ms": w.start_ms, "end_ms": w.end_ms, "speaker": w.speaker}
                for w in log.transcript_words
            ]
        },
        "gestures": [
            {
                "id": g.id,
                "tool": g.tool.value,
                "user": g.user,
                "artboard": g.artboard,
                "points": [[p.x, p.y, p.t_ms] for p in g.points],
                "erased_at_ms": g.erased_at_ms,
            }
            for g in log.gestures
        ],
        "provenance": [
            {"t_ms": s.t_ms, "user": s.user, "artboard": s.artboard, "action": s.action, "state": s.state}
            for s in log.provenance
        ],
        "focus": [{"t_ms": f.t_ms, "artboard": f.artboard} for f in log.focus_events],
    }


def serialize_meeting_log(log: MeetingLog) -> bytes:
    """Canonical byte form; parse(serialize(log)) is structurally equal for
    logs whose coordinates carry at most 6 decimals (all emitted logs do)."""
    return canonical_bytes(log_to_dict(log))

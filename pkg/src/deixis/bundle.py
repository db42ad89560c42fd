"""Assembly and serialization of the interactive notes bundle.

The bundle is the machine-readable document the viewer renders: minutes and
transcript with linked reference spans, replayable gesture geometry with
original per-point timestamps, durable-annotation and provenance timelines,
and an artboard manifest with copied assets. Serialization is canonical so
reruns are byte-identical.

Directory layout: ``notes.json``, ``notes.md``, ``assets/``,
``schema/notes.schema.json``.
"""

from __future__ import annotations

import re
import shutil
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

from .extraction import ReferenceSpan
from .jsonutil import canonical_bytes
from .matching import MatchSet
from .minutes import MinutesBlock
from .model import ArtboardKind, DeixisError, MeetingLog, Utterance, fmt_mmss, meeting_end_ms

SCHEMA_VERSION = "1"


class DanglingReference(DeixisError):
    """Bundle inputs disagree; upstream pipeline bug."""


@dataclass(frozen=True)
class NotesBundle:
    data: dict

    @property
    def schema_version(self) -> str:
        return self.data["schema_version"]

    def to_dict(self) -> dict:
        return self.data


def _points(points) -> list[list]:
    return [[p.x, p.y, p.t_ms] for p in points]


def build_bundle(
    log: MeetingLog,
    utterances: list[Utterance],
    match_set: MatchSet,
    spans: list[ReferenceSpan],
    minutes_blocks: list[MinutesBlock],
    taxonomy: dict[str, dict] | None = None,
) -> NotesBundle:
    """Assemble a referentially complete bundle; dropped gestures are
    excluded, every transient match surfaces exactly once as a linked span."""
    colors = {p.id: p.color for p in log.participants}
    names = {p.id: p.display_name for p in log.participants}
    by_gesture = {g.id: g for g in log.gestures}
    utterance_ids = {u.id for u in utterances}

    spans_by_match = {s.match_id: s for s in spans}
    if len(spans_by_match) != len(spans):
        raise DanglingReference("duplicate reference span for one match")

    replays = []
    span_records = []
    for m in match_set.transient_matches:
        g = by_gesture.get(m.segment.parent_gesture)
        if g is None:
            raise DanglingReference(f"match {m.match_id} references unknown gesture")
        span = spans_by_match.pop(m.match_id, None)
        if span is None:
            raise DanglingReference(f"match {m.match_id} has no reference span")
        if span.utterance != m.utterance or span.utterance not in utterance_ids:
            raise DanglingReference(f"span for {m.match_id} targets the wrong utterance")
        replays.append(
            {
                "id": m.match_id,
                "gesture": g.id,
                "segment_index": m.segment.segment_index,
                "artboard": g.artboard,
                "author": g.user,
                "author_name": names[g.user],
                "color": colors[g.user],
                "tool": g.tool.value,
                "points": _points(m.segment.points),
                "interpolated": list(m.segment.interpolated),
                "start_ms": m.segment.start_ms,
                "end_ms": m.segment.end_ms,
            }
        )
        span_records.append(
            {
                "id": m.match_id,
                "utterance": span.utterance,
                "gesture": g.id,
                "word_start": span.word_start,
                "word_end": span.word_end,
                "source": span.source.value,
            }
        )
    if spans_by_match:
        raise DanglingReference(f"spans without matches: {sorted(spans_by_match)}")

    durable = []
    for d in match_set.durable_spans:
        g = by_gesture.get(d.gesture)
        if g is None:
            raise DanglingReference(f"durable span references unknown gesture {d.gesture!r}")
        durable.append(
            {
                "gesture": d.gesture,
                "artboard": g.artboard,
                "author": g.user,
                "author_name": names[g.user],
                "color": colors[g.user],
                "points": _points(g.points),
                "visible_from_ms": d.visible_from_ms,
                "visible_until_ms": d.visible_until_ms,
            }
        )

    replay_gestures = {r["gesture"] for r in replays}
    for block in minutes_blocks:
        for tok in block.markers:
            for gid in tok.ids:
                if gid not in replay_gestures:
                    raise DanglingReference(f"minutes marker {gid!r} has no replayable gesture")

    words = log.transcript_words
    utterance_records = []
    for u in utterances:
        utterance_records.append(
            {
                "id": u.id,
                "speaker": u.speaker,
                "speaker_name": names[u.speaker],
                "start_ms": u.start_ms,
                "end_ms": u.end_ms,
                "text": u.text,
                "words": [
                    {"text": words[i].text, "start_ms": words[i].start_ms, "end_ms": words[i].end_ms}
                    for i in u.words
                ],
            }
        )

    artboards = []
    for a in log.artboards:
        record = {"id": a.id, "kind": a.kind.value, "width": a.width, "height": a.height}
        if a.kind is ArtboardKind.STATIC:
            suffix = Path(a.source).suffix or ".svg"
            record["asset"] = f"assets/{a.id}{suffix}"
            record["source"] = a.source
        else:
            record["renderer"] = a.source
        artboards.append(record)

    data = {
        "schema_version": SCHEMA_VERSION,
        "meeting": {
            "meeting_id": log.meeting_id,
            "started_at": log.started_at,
            "duration_ms": meeting_end_ms(log),
        },
        "participants": [
            {"id": p.id, "display_name": p.display_name, "color": p.color} for p in log.participants
        ],
        "artboards": artboards,
        "focus_timeline": [{"t_ms": f.t_ms, "artboard": f.artboard} for f in log.focus_events],
        "utterances": utterance_records,
        "reference_spans": span_records,
        "gesture_replays": replays,
        "durable_annotations": durable,
        "provenance_timeline": [
            {"t_ms": s.t_ms, "user": s.user, "user_name": names[s.user], "artboard": s.artboard,
             "action": s.action, "state": s.state}
            for s in match_set.provenance_timeline
        ],
        "minutes": [
            {
                "segment": b.segment,
                "time_label": b.time_label,
                "text": b.text,
                "markers": [list(t.ids) for t in b.markers],
            }
            for b in minutes_blocks
        ],
        "taxonomy": [
            {"gesture": gid, **label} for gid, label in sorted((taxonomy or {}).items())
        ],
    }
    return NotesBundle(data=data)


def emit_json(bundle: NotesBundle) -> bytes:
    return canonical_bytes(bundle.to_dict())


_MARKER_MD = re.compile("⟦([^⟧]+)⟧")


def emit_markdown(bundle: NotesBundle) -> str:
    """Hand-editable markdown twin of the bundle.

    Link structure is lossless: every reference span and minutes marker
    renders as ``[text]{#id}``; geometry stays in notes.json.
    """
    d = bundle.to_dict()
    out: list[str] = [f"# Meeting notes - {d['meeting']['meeting_id']}", ""]

    out += ["## Minutes", ""]
    for block in d["minutes"]:
        out.append(f"### {block['time_label']}")
        out.append(_MARKER_MD.sub(lambda m: f"[{m.group(1)}]{{#{m.group(1)}}}", block["text"]))
        out.append("")

    spans_by_utterance: dict[str, list[dict]] = {}
    for s in d["reference_spans"]:
        spans_by_utterance.setdefault(s["utterance"], []).append(s)

    out += ["## Transcript", ""]
    for u in d["utterances"]:
        tokens = [w["text"] for w in u["words"]]
        inline = [s for s in spans_by_utterance.get(u["id"], []) if s["word_end"] - s["word_start"] < len(tokens)]
        whole = [s for s in spans_by_utterance.get(u["id"], []) if s not in inline]
        inline.sort(key=lambda s: (s["word_start"], s["word_end"]))
        rendered: list[str] = []
        i = 0
        for s in inline:
            a, b = s["word_start"], s["word_end"]
            if a < i:  # overlapping fallback spans render as chips instead
                whole.append(s)
                continue
            rendered += tokens[i:a]
            rendered.append(f"[{' '.join(tokens[a:b])}]{{#{s['id']}}}")
            i = b
        rendered += tokens[i:]
        line = f"- **{u['speaker_name']}** @{fmt_mmss(u['start_ms'])}: {' '.join(rendered)}"
        for s in whole:
            line += f" [↩]{{#{s['id']}}}"
        out.append(line)
    out.append("")

    if d["durable_annotations"] or d["provenance_timeline"]:
        out += ["## Annotations & interactions", ""]
        lines = []
        for a in d["durable_annotations"]:
            lines.append((a["visible_from_ms"], f"@{fmt_mmss(a['visible_from_ms'])} [{a['author_name']}] annotation #{a['gesture']}"))
        for i, s in enumerate(d["provenance_timeline"]):
            lines.append((s["t_ms"], f"@{fmt_mmss(s['t_ms'])} [{s['user_name']}] {s['action']} #prov{i}"))
        out += [line for _, line in sorted(lines, key=lambda t: t[0])]
        out.append("")

    return "\n".join(out)


def markdown_link_ids(markdown: str) -> list[str]:
    """All link ids in an emitted document, in order; the id round-trip."""
    return re.findall(r"\{#([^}]+)\}", markdown)


_PLACEHOLDER_SVG = """<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">
  <rect width="{w}" height="{h}" fill="#f4f1ea"/>
  <rect x="8" y="8" width="{w2}" height="{h2}" fill="none" stroke="#b8b0a0" stroke-width="2" stroke-dasharray="8 6"/>
  <text x="50%" y="50%" font-family="sans-serif" font-size="28" fill="#8a807a" text-anchor="middle">{label}</text>
</svg>
"""


def write_bundle(bundle: NotesBundle, out_dir: str | Path, asset_root: str | Path | None = None) -> None:
    """Write the bundle directory.

    Static artboard sources resolve relative to ``asset_root`` (usually the
    log file's directory); a missing source gets a deterministic
    placeholder SVG so the bundle stays self-contained.
    """
    out = Path(out_dir)
    (out / "assets").mkdir(parents=True, exist_ok=True)
    (out / "schema").mkdir(parents=True, exist_ok=True)
    (out / "notes.json").write_bytes(emit_json(bundle))
    (out / "notes.md").write_text(emit_markdown(bundle), "utf-8")
    schema_text = files("deixis.schemas").joinpath("notes.schema.json").read_text("utf-8")
    (out / "schema" / "notes.schema.json").write_text(schema_text, "utf-8")

    for record in bundle.to_dict()["artboards"]:
        asset = record.get("asset")
        if not asset:
            continue
        dest = out / asset
        copied = False
        if asset_root is not None:
            original = Path(asset_root) / record.get("source", "__missing__")
            if original.is_file():
                shutil.copyfile(original, dest)
                copied = True
        if not copied:
            svg = _PLACEHOLDER_SVG.format(
                w=record["width"], h=record["height"], w2=record["width"] - 16, h2=record["height"] - 16,
                label=record["id"],
            )
            dest.write_text(svg, "utf-8")

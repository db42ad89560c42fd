"""Domain model for recorded data-meeting logs.

All types are frozen dataclasses: immutable after construction and safe to
share across threads. Field-level and referential invariants are enforced by
``deixis.logio.check_integrity`` (called by the parser), not by constructors,
so synthetic builders stay cheap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple


class DeixisError(Exception):
    """Base class for pipeline errors."""


class MalformedJson(DeixisError):
    """Input is not parseable JSON text."""


class SchemaViolation(DeixisError):
    """A field is missing, ill-typed, or out of range; message names the path."""


class IntegrityViolation(DeixisError):
    """A dangling reference or unsorted timestamp; message names the record."""


class InvalidParams(DeixisError):
    """Synthesis parameters out of bounds."""


class StrokePoint(NamedTuple):
    x: float
    y: float
    t_ms: int


class ArtboardKind(str, enum.Enum):
    STATIC = "static"
    INTERACTIVE = "interactive"


class Tool(str, enum.Enum):
    LASER = "laser"
    PENCIL = "pencil"


@dataclass(frozen=True)
class Participant:
    id: str
    display_name: str
    color: str  # "#RRGGBB"


@dataclass(frozen=True)
class Artboard:
    id: str
    kind: ArtboardKind
    source: str  # image path (static) or state-renderer identifier (interactive)
    width: int
    height: int

    @property
    def diagonal_px(self) -> float:
        return (self.width**2 + self.height**2) ** 0.5


@dataclass(frozen=True)
class TranscriptWord:
    text: str
    start_ms: int
    end_ms: int
    speaker: str  # Participant id


@dataclass(frozen=True)
class Utterance:
    id: str
    speaker: str
    words: tuple[int, ...]  # indices into the transcript word list
    start_ms: int
    end_ms: int
    text: str


@dataclass(frozen=True)
class GestureEvent:
    id: str
    tool: Tool
    user: str  # Participant id
    artboard: str  # Artboard id
    points: tuple[StrokePoint, ...]
    erased_at_ms: int | None = None  # pencil only

    @property
    def start_ms(self) -> int:
        return self.points[0].t_ms

    @property
    def end_ms(self) -> int:
        return self.points[-1].t_ms


@dataclass(frozen=True)
class ProvenanceState:
    t_ms: int
    user: str
    artboard: str
    action: str
    state: dict = field(hash=False)  # opaque serialized visualization state


@dataclass(frozen=True)
class FocusEvent:
    t_ms: int
    artboard: str


@dataclass(frozen=True)
class MeetingLog:
    meeting_id: str
    started_at: str  # ISO-8601
    participants: tuple[Participant, ...]
    artboards: tuple[Artboard, ...]
    transcript_words: tuple[TranscriptWord, ...]
    gestures: tuple[GestureEvent, ...]
    provenance: tuple[ProvenanceState, ...]
    focus_events: tuple[FocusEvent, ...]

    def participant(self, pid: str) -> Participant:
        for p in self.participants:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def artboard(self, aid: str) -> Artboard:
        for a in self.artboards:
            if a.id == aid:
                return a
        raise KeyError(aid)


def meeting_end_ms(log: MeetingLog) -> int:
    """Last timestamp anywhere in the log; the meeting's effective duration."""
    last = 0
    for w in log.transcript_words:
        last = max(last, w.end_ms)
    for g in log.gestures:
        last = max(last, g.points[-1].t_ms)
        if g.erased_at_ms is not None:
            last = max(last, g.erased_at_ms)
    for s in log.provenance:
        last = max(last, s.t_ms)
    for f in log.focus_events:
        last = max(last, f.t_ms)
    return last


def interval_gap_ms(a_start: int, a_end: int, b_start: int, b_end: int) -> int:
    """Distance between two closed intervals; 0 when they overlap or touch."""
    return max(0, a_start - b_end, b_start - a_end)


def fmt_mmss(t_ms: int) -> str:
    minutes, seconds = divmod(max(0, t_ms) // 1000, 60)
    return f"{minutes:02d}:{seconds:02d}"


def overlap_ms(a_start: int, a_end: int, b_start: int, b_end: int) -> int:
    """Length of the intersection of two closed intervals (0 for point touch)."""
    return max(0, min(a_end, b_end) - max(a_start, b_start))

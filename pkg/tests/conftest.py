import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from deixis.model import (
    Artboard,
    ArtboardKind,
    FocusEvent,
    GestureEvent,
    MeetingLog,
    Participant,
    StrokePoint,
    Tool,
    TranscriptWord,
)

PARTICIPANTS = (
    Participant(id="p0", display_name="Alice", color="#E6B422"),
    Participant(id="p1", display_name="Bob", color="#2E86AB"),
)
BOARD = Artboard(id="a0", kind=ArtboardKind.STATIC, source="assets/a0.svg", width=1000, height=800)


def word(text, start, end, speaker="p0"):
    return TranscriptWord(text=text, start_ms=start, end_ms=end, speaker=speaker)


def sentence(text, start, end, speaker="p0"):
    """Evenly spaced words over [start, end]; final word keeps its punctuation."""
    tokens = text.split()
    cell = max(1, (end - start) // len(tokens))
    out = []
    for i, tok in enumerate(tokens):
        s = start + i * cell
        e = end if i == len(tokens) - 1 else s + max(1, int(cell * 0.8))
        out.append(word(tok, s, e, speaker))
    return out


def line_points(t0, t1, n=5, x0=0.2, y0=0.2, dx=0.3, dy=0.0):
    pts = []
    for i in range(n):
        f = i / (n - 1) if n > 1 else 0
        pts.append(StrokePoint(round(x0 + f * dx, 6), round(y0 + f * dy, 6), int(t0 + f * (t1 - t0))))
    return tuple(pts)


def laser(gid, user, points, artboard="a0"):
    return GestureEvent(id=gid, tool=Tool.LASER, user=user, artboard=artboard, points=tuple(points))


def pencil(gid, user, points, erased_at_ms=None, artboard="a0"):
    return GestureEvent(
        id=gid, tool=Tool.PENCIL, user=user, artboard=artboard, points=tuple(points), erased_at_ms=erased_at_ms
    )


def make_log(words=(), gestures=(), provenance=(), focus=None, participants=PARTICIPANTS, artboards=(BOARD,)):
    return MeetingLog(
        meeting_id="m-test",
        started_at="2026-02-03T10:00:00+00:00",
        participants=tuple(participants),
        artboards=tuple(artboards),
        transcript_words=tuple(words),
        gestures=tuple(gestures),
        provenance=tuple(provenance),
        focus_events=tuple(focus) if focus is not None else (FocusEvent(t_ms=0, artboard=artboards[0].id),),
    )

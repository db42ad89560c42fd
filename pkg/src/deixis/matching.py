"""Aligning gestures with utterances.

Transient (laser) gestures are matched to sentence-level utterances by
temporal overlap: one utterance means one whole-stroke match, several mean
the stroke is split at utterance boundaries, none means the nearest own
utterance within a configurable window. Durable (pencil) annotations and
interaction-provenance states are matched by lifespan timestamps instead of
sentences.

Overlap semantics are closed-interval; a gesture that only touches a
boundary instant belongs to the earlier utterance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import (
    DeixisError,
    GestureEvent,
    MeetingLog,
    StrokePoint,
    Tool,
    Utterance,
    interval_gap_ms,
    meeting_end_ms,
    overlap_ms,
)


class NoCandidate(DeixisError):
    """No utterance within the attach window: caller skipped the filter."""


class InvalidCuts(DeixisError):
    """Cut times not strictly increasing inside the gesture's time span."""


class DropReason(str, enum.Enum):
    NOT_ACTIVE_SPEAKER = "not_active_speaker"
    NO_NEARBY_UTTERANCE = "no_nearby_utterance"
    DEGENERATE_STROKE = "degenerate_stroke"


@dataclass(frozen=True)
class MatchParams:
    attach_window_ms: int = 2000
    degenerate_max_points: int = 3  # fewer than this, and
    degenerate_diag_frac: float = 0.005  # smaller than this fraction of the artboard diagonal


@dataclass(frozen=True)
class StrokeSegment:
    parent_gesture: str
    segment_index: int
    points: tuple[StrokePoint, ...]
    interpolated: tuple[bool, ...]  # parallel to points; True for cut-boundary points

    @property
    def start_ms(self) -> int:
        return self.points[0].t_ms

    @property
    def end_ms(self) -> int:
        return self.points[-1].t_ms

    def real_points(self) -> tuple[StrokePoint, ...]:
        return tuple(p for p, interp in zip(self.points, self.interpolated) if not interp)


@dataclass(frozen=True)
class TransientMatch:
    segment: StrokeSegment
    utterance: str  # Utterance id

    @property
    def match_id(self) -> str:
        return f"{self.segment.parent_gesture}.{self.segment.segment_index}"


@dataclass(frozen=True)
class DurableSpan:
    gesture: str
    visible_from_ms: int
    visible_until_ms: int


@dataclass(frozen=True)
class DroppedGesture:
    gesture: str
    reason: DropReason


@dataclass(frozen=True)
class MatchSet:
    transient_matches: tuple[TransientMatch, ...]
    durable_spans: tuple[DurableSpan, ...]
    provenance_timeline: tuple
    dropped: tuple[DroppedGesture, ...]


def _bbox_diag_px(gesture: GestureEvent, width: int, height: int) -> float:
    xs = [p.x for p in gesture.points]
    ys = [p.y for p in gesture.points]
    w = (max(xs) - min(xs)) * width
    h = (max(ys) - min(ys)) * height
    return (w * w + h * h) ** 0.5


def _nearest_gap_ms(gesture: GestureEvent, utterances: list[Utterance]) -> int | None:
    gaps = [
        interval_gap_ms(gesture.start_ms, gesture.end_ms, u.start_ms, u.end_ms)
        for u in utterances
        if u.speaker == gesture.user
    ]
    return min(gaps) if gaps else None


def filter_gestures(
    log: MeetingLog,
    utterances: list[Utterance],
    params: MatchParams = MatchParams(),
) -> tuple[list[GestureEvent], list[DroppedGesture]]:
    """Split gestures into kept and dropped.

    Pencil gestures are always kept (durable). A laser gesture survives when
    its author speaks during it or within ``attach_window_ms`` of it, unless
    it is a degenerate flick (tiny bounding box and too few points).
    """
    kept: list[GestureEvent] = []
    dropped: list[DroppedGesture] = []
    for g in log.gestures:
        if g.tool is Tool.PENCIL:
            kept.append(g)
            continue
        board = log.artboard(g.artboard)
        if (
            len(g.points) < params.degenerate_max_points
            and _bbox_diag_px(g, board.width, board.height)
            < params.degenerate_diag_frac * board.diagonal_px
        ):
            dropped.append(DroppedGesture(g.id, DropReason.DEGENERATE_STROKE))
            continue
        gap = _nearest_gap_ms(g, utterances)
        if gap is not None and gap <= params.attach_window_ms:
            kept.append(g)
            continue
        someone_else_speaking = any(
            u.speaker != g.user and overlap_ms(g.start_ms, g.end_ms, u.start_ms, u.end_ms) > 0
            for u in utterances
        )
        reason = DropReason.NOT_ACTIVE_SPEAKER if someone_else_speaking else DropReason.NO_NEARBY_UTTERANCE
        dropped.append(DroppedGesture(g.id, reason))
    return kept, dropped


def _whole_segment(gesture: GestureEvent) -> StrokeSegment:
    return StrokeSegment(
        parent_gesture=gesture.id,
        segment_index=0,
        points=gesture.points,
        interpolated=(False,) * len(gesture.points),
    )


def split_gesture(gesture: GestureEvent, cut_times: list[int]) -> list[StrokeSegment]:
    """Divide a stroke into segments at the given cut times.

    Points are assigned by half-open window ``[prev_cut, cut)``; at every cut
    an interpolated point (linear in x, y at t = cut) is appended to the
    earlier segment and prepended to the later one. A window left with fewer
    than 2 real points is folded into the adjacent window group nearer to
    its points (the earlier one when empty or tied), so every emitted
    segment has at least 2 real points. A surviving segment keeps the index
    of the first window it covers.
    """
    if not cut_times:
        return [_whole_segment(gesture)]
    for a, b in zip(cut_times, cut_times[1:]):
        if b <= a:
            raise InvalidCuts(f"cut times not strictly increasing: {cut_times}")
    if cut_times[0] <= gesture.start_ms or cut_times[-1] >= gesture.end_ms:
        raise InvalidCuts(
            f"cuts {cut_times} out of range ({gesture.start_ms}, {gesture.end_ms}) for gesture {gesture.id!r}"
        )

    k = len(cut_times)
    windows: list[list[StrokePoint]] = [[] for _ in range(k + 1)]
    w = 0
    for p in gesture.points:
        while w < k and p.t_ms >= cut_times[w]:
            w += 1
        windows[w].append(p)

    groups: list[list[int]] = [[i] for i in range(k + 1)]

    def n_points(g: list[int]) -> int:
        return sum(len(windows[i]) for i in g)

    while len(groups) > 1:
        idx = next((i for i, g in enumerate(groups) if n_points(g) < 2), None)
        if idx is None:
            break
        g = groups[idx]
        if idx == 0:
            target = 1
        elif idx == len(groups) - 1:
            target = idx - 1
        else:
            ts = [p.t_ms for i in g for p in windows[i]]
            if not ts:
                target = idx - 1
            else:
                ct = sum(ts) / len(ts)
                lo, hi = cut_times[g[0] - 1], cut_times[g[-1]]
                target = idx - 1 if ct - lo <= hi - ct else idx + 1
        a, b = sorted((idx, target))
        groups[a] = groups[a] + groups[b]
        del groups[b]

    def interp_at(t: int) -> StrokePoint:
        pts = gesture.points
        after = next(i for i, p in enumerate(pts) if p.t_ms >= t)
        if pts[after].t_ms == t:
            return StrokePoint(pts[after].x, pts[after].y, t)
        a, c = pts[after - 1], pts[after]
        f = (t - a.t_ms) / (c.t_ms - a.t_ms)
        return StrokePoint(round(a.x + f * (c.x - a.x), 6), round(a.y + f * (c.y - a.y), 6), t)

    segments: list[StrokeSegment] = []
    for gi, g in enumerate(groups):
        pts = [p for i in g for p in windows[i]]
        flags = [False] * len(pts)
        if gi > 0:
            pts.insert(0, interp_at(cut_times[g[0] - 1]))
            flags.insert(0, True)
        if gi < len(groups) - 1:
            pts.append(interp_at(cut_times[g[-1]]))
            flags.append(True)
        segments.append(
            StrokeSegment(
                parent_gesture=gesture.id,
                segment_index=g[0],
                points=tuple(pts),
                interpolated=tuple(flags),
            )
        )
    return segments


def associate_durable(log: MeetingLog) -> list[DurableSpan]:
    """One lifespan per pencil annotation: first point to erase (or meeting end)."""
    end = meeting_end_ms(log)
    spans = []
    for g in log.gestures:
        if g.tool is not Tool.PENCIL:
            continue
        start = g.points[0].t_ms
        until = g.erased_at_ms if g.erased_at_ms is not None else end
        spans.append(DurableSpan(gesture=g.id, visible_from_ms=start, visible_until_ms=max(until, start + 1)))
    return spans


def match_transient(
    gesture: GestureEvent,
    utterances: list[Utterance],
    params: MatchParams = MatchParams(),
) -> list[TransientMatch]:
    """Match one kept laser gesture against its author's utterances.

    Positive-length overlap with one utterance pairs the whole stroke with
    it; overlap with several splits the stroke at the later utterances'
    start times (gap points join the earlier segment); no overlap falls back
    to the nearest own utterance within the attach window, earlier utterance
    winning ties. Zero-length boundary touches count only when nothing
    overlaps positively, and then the earliest touched utterance wins.
    """
    own = [u for u in utterances if u.speaker == gesture.user]
    overlapping = [u for u in own if overlap_ms(gesture.start_ms, gesture.end_ms, u.start_ms, u.end_ms) > 0]

    if len(overlapping) >= 2:
        cuts = [u.start_ms for u in overlapping[1:]]
        segments = split_gesture(gesture, cuts)
        by_index = {s.segment_index: s for s in segments}
        return [
            TransientMatch(segment=by_index[i], utterance=u.id)
            for i, u in enumerate(overlapping)
            if i in by_index
        ]

    if len(overlapping) == 1:
        target = overlapping[0]
    else:
        touching = [
            u for u in own if interval_gap_ms(gesture.start_ms, gesture.end_ms, u.start_ms, u.end_ms) == 0
        ]
        if touching:
            target = min(touching, key=lambda u: (u.start_ms, u.id))
        else:
            candidates = [
                (interval_gap_ms(gesture.start_ms, gesture.end_ms, u.start_ms, u.end_ms), u) for u in own
            ]
            candidates = [(gap, u) for gap, u in candidates if gap <= params.attach_window_ms]
            if not candidates:
                raise NoCandidate(
                    f"gesture {gesture.id!r} has no utterance of {gesture.user!r} within "
                    f"{params.attach_window_ms} ms; filter_gestures should have dropped it"
                )
            target = min(candidates, key=lambda c: (c[0], c[1].start_ms, c[1].id))[1]

    return [TransientMatch(segment=_whole_segment(gesture), utterance=target.id)]


def build_match_set(
    log: MeetingLog,
    utterances: list[Utterance],
    params: MatchParams = MatchParams(),
) -> MatchSet:
    """Filter, match, and timestamp-associate every gesture in the log."""
    kept, dropped = filter_gestures(log, utterances, params)
    matches: list[TransientMatch] = []
    for g in kept:
        if g.tool is Tool.LASER:
            matches.extend(match_transient(g, utterances, params))
    matches.sort(key=lambda m: (m.segment.start_ms, m.segment.parent_gesture, m.segment.segment_index))
    return MatchSet(
        transient_matches=tuple(matches),
        durable_spans=tuple(associate_durable(log)),
        provenance_timeline=tuple(sorted(log.provenance, key=lambda s: s.t_ms)),
        dropped=tuple(dropped),
    )

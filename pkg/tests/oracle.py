"""Independent brute-force matcher: enumerate every gesture-utterance
interval overlap per author and apply the zero/one/many rule directly.

Deliberately shares no code with deixis.matching beyond the data model, so
it can serve as an equivalence oracle.
"""

from __future__ import annotations

import math

from deixis.model import MeetingLog, Utterance

Pair = tuple[str, int, int, str]  # (gesture id, segment start, segment end, utterance id)


def oracle_match_pairs(
    log: MeetingLog,
    utterances: list[Utterance],
    attach_window_ms: int = 2000,
    degenerate_max_points: int = 3,
    degenerate_diag_frac: float = 0.005,
) -> set[Pair]:
    pairs: set[Pair] = set()
    boards = {a.id: a for a in log.artboards}
    for g in log.gestures:
        if g.tool.value == "pencil":
            continue
        xs = [p.x for p in g.points]
        ys = [p.y for p in g.points]
        b = boards[g.artboard]
        stroke_diag = math.hypot((max(xs) - min(xs)) * b.width, (max(ys) - min(ys)) * b.height)
        board_diag = math.hypot(b.width, b.height)
        if len(g.points) < degenerate_max_points and stroke_diag < degenerate_diag_frac * board_diag:
            continue

        gs, ge = g.points[0].t_ms, g.points[-1].t_ms
        own = [u for u in utterances if u.speaker == g.user]
        overlapping = [u for u in own if min(ge, u.end_ms) - max(gs, u.start_ms) > 0]

        if len(overlapping) >= 2:
            cuts = [u.start_ms for u in overlapping[1:]]
            bounds = [gs, *cuts, ge]
            for i, u in enumerate(overlapping):
                pairs.add((g.id, bounds[i], bounds[i + 1], u.id))
            continue

        if len(overlapping) == 1:
            pairs.add((g.id, gs, ge, overlapping[0].id))
            continue

        touching = [u for u in own if min(ge, u.end_ms) - max(gs, u.start_ms) == 0]
        if touching:
            u = min(touching, key=lambda u: (u.start_ms, u.id))
            pairs.add((g.id, gs, ge, u.id))
            continue

        best = None
        best_key = None
        for u in own:
            gap = max(gs - u.end_ms, u.start_ms - ge)
            if gap > attach_window_ms:
                continue
            key = (gap, u.start_ms, u.id)
            if best_key is None or key < best_key:
                best, best_key = u, key
        if best is not None:
            pairs.add((g.id, gs, ge, best.id))
    return pairs


def match_set_pairs(match_set) -> set[Pair]:
    return {
        (m.segment.parent_gesture, m.segment.start_ms, m.segment.end_ms, m.utterance)
        for m in match_set.transient_matches
    }

"""Geometric stroke features, shape classification, and intention ranking.

The shape classes quantify the gesture forms observed with virtual laser
pointers (scanning, arrows, lassos, wavy underlines, arcs); intentions are
ranked from the shape's candidate set plus keywords in the accompanying
speech, since identical forms serve many intentions. Labels are advisory:
they never gate matching.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass

from .model import StrokePoint

# Calibrated against the parametric generators in deixis.strokegen; the
# taxonomy itself is qualitative.
THRESHOLDS: dict[str, float] = {
    "dot_max_path": 0.02,
    "closed_chord_frac": 0.2,
    "loop_min_turning_rad": 1.5 * math.pi,
    "scan_min_reversals": 3,
    "scan_min_aspect": 0.25,
    "wavy_min_reversals": 3,
    "arrow_min_straightness": 0.6,
    "arrow_sharp_angle_deg": 100.0,
    "arrow_tail_frac": 0.2,
    "arrow_min_sharp_turns": 2,
    "line_min_straightness": 0.9,
    "arc_min_turning_rad": 0.25 * math.pi,
    "reversal_hysteresis_frac": 0.05,
    # jittered samples can locally reverse direction, which corrupts the
    # telescoped turning sum by +-2pi; near-reversal vertices with legs at
    # noise scale are removed before summing
    "spike_min_turn_rad": 2.6,
    "spike_max_leg_frac": 0.04,
}


class ShapeClass(str, enum.Enum):
    DOT = "dot"
    LINE = "line"
    ARROW = "arrow"
    CLOSED_LOOP = "closed_loop"
    ZIGZAG_SCAN = "zigzag_scan"
    WAVY_LINE = "wavy_line"
    ARC = "arc"
    OTHER = "other"


class Intention(str, enum.Enum):
    DIRECT_ATTENTION = "direct_attention"
    HIGHLIGHT_TRENDS = "highlight_trends"
    DEPICT_PATH = "depict_path"
    OUTLINE_BOUNDARY = "outline_boundary"
    INDICATE_AREA_GROUP = "indicate_area_group"
    REFER_ABSENT_OBJECTS = "refer_absent_objects"
    INDICATE_INTERVAL = "indicate_interval"
    CONNECT_COMPONENTS = "connect_components"
    DIRECT_READING_DIRECTION = "direct_reading_direction"


@dataclass(frozen=True)
class StrokeFeatures:
    path_length: float
    chord: float
    bbox_w: float
    bbox_h: float
    bbox_diag: float
    straightness: float  # chord / path length; 1.0 for a single point
    closed: bool
    total_turning: float  # signed radians
    reversals_dominant: int
    reversals_perp: int
    extent_dominant: float  # projection range along the principal axis
    extent_perp: float
    late_sharp_turns: int  # turns > arrow_sharp_angle_deg in the path's final tail
    duration_ms: int
    mean_speed: float  # normalized units per second


def _dist(a: StrokePoint, b: StrokePoint) -> float:
    return math.hypot(b.x - a.x, b.y - a.y)


def _count_reversals(vals: list[float], hysteresis: float) -> int:
    if len(vals) < 2:
        return 0
    count = 0
    direction = 0
    extreme = vals[0]
    for v in vals[1:]:
        if direction == 0:
            if v - extreme > hysteresis:
                direction, extreme = 1, v
            elif extreme - v > hysteresis:
                direction, extreme = -1, v
        elif direction == 1:
            if v > extreme:
                extreme = v
            elif extreme - v > hysteresis:
                count, direction, extreme = count + 1, -1, v
        else:
            if v < extreme:
                extreme = v
            elif v - extreme > hysteresis:
                count, direction, extreme = count + 1, 1, v
    return count


def _vertex_turn(a: StrokePoint, b: StrokePoint, c: StrokePoint) -> float | None:
    if _dist(a, b) == 0 or _dist(b, c) == 0:
        return None
    d1 = math.atan2(b.y - a.y, b.x - a.x)
    d2 = math.atan2(c.y - b.y, c.x - b.x)
    return math.atan2(math.sin(d2 - d1), math.cos(d2 - d1))


def _despike(pts: tuple[StrokePoint, ...], max_leg: float) -> tuple[StrokePoint, ...]:
    """Drop interior near-reversal vertices whose shorter leg is at noise
    scale; real corners (arrowheads) have longer legs and survive."""
    min_turn = THRESHOLDS["spike_min_turn_rad"]
    out = list(pts)
    changed = True
    while changed and len(out) > 2:
        changed = False
        for i in range(1, len(out) - 1):
            a, b, c = out[i - 1], out[i], out[i + 1]
            if min(_dist(a, b), _dist(b, c)) >= max_leg:
                continue
            turn = _vertex_turn(a, b, c)
            if turn is not None and abs(turn) > min_turn:
                del out[i]
                changed = True
                break
    return tuple(out)


def _principal_axis(points: tuple[StrokePoint, ...]) -> tuple[float, float]:
    n = len(points)
    cx = sum(p.x for p in points) / n
    cy = sum(p.y for p in points) / n
    sxx = sum((p.x - cx) ** 2 for p in points) / n
    syy = sum((p.y - cy) ** 2 for p in points) / n
    sxy = sum((p.x - cx) * (p.y - cy) for p in points) / n
    theta = 0.5 * math.atan2(2 * sxy, sxx - syy)
    return math.cos(theta), math.sin(theta)


def stroke_features(points: list[StrokePoint] | tuple[StrokePoint, ...]) -> StrokeFeatures:
    pts = tuple(points)
    if not pts:
        raise ValueError("stroke needs at least one point")
    duration = pts[-1].t_ms - pts[0].t_ms

    path = sum(_dist(a, b) for a, b in zip(pts, pts[1:]))
    chord = _dist(pts[0], pts[-1])
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    w, h = max(xs) - min(xs), max(ys) - min(ys)
    diag = math.hypot(w, h)
    straightness = 1.0 if path == 0 else min(1.0, chord / path)
    closed = chord <= THRESHOLDS["closed_chord_frac"] * diag

    # total turning telescopes over the despiked polyline
    smooth = _despike(pts, THRESHOLDS["spike_max_leg_frac"] * diag)
    turning = 0.0
    prev_dir: float | None = None
    for a, b in zip(smooth, smooth[1:]):
        if _dist(a, b) == 0:
            continue
        cur = math.atan2(b.y - a.y, b.x - a.x)
        if prev_dir is not None:
            turning += math.atan2(math.sin(cur - prev_dir), math.cos(cur - prev_dir))
        prev_dir = cur

    # sharp-turn events keep raw vertices: arrowhead spikes are the signal
    turn_events: list[tuple[float, float]] = []  # (cumulative length at vertex, |angle|)
    cum = 0.0
    prev_dir = None
    for a, b in zip(pts, pts[1:]):
        d = _dist(a, b)
        if d == 0:
            cum += d
            continue
        cur = math.atan2(b.y - a.y, b.x - a.x)
        if prev_dir is not None:
            delta = math.atan2(math.sin(cur - prev_dir), math.cos(cur - prev_dir))
            turn_events.append((cum, abs(delta)))
        cum += d
        prev_dir = cur

    ux, uy = _principal_axis(pts)
    proj_dom = [p.x * ux + p.y * uy for p in pts]
    proj_perp = [-p.x * uy + p.y * ux for p in pts]
    extent_dom = max(proj_dom) - min(proj_dom)
    extent_perp = max(proj_perp) - min(proj_perp)
    if extent_perp > extent_dom:
        proj_dom, proj_perp = proj_perp, proj_dom
        extent_dom, extent_perp = extent_perp, extent_dom
    # measured in the principal frame so the counts are rotation-invariant
    hysteresis = THRESHOLDS["reversal_hysteresis_frac"] * extent_dom

    tail_start = (1.0 - THRESHOLDS["arrow_tail_frac"]) * path
    sharp = math.radians(THRESHOLDS["arrow_sharp_angle_deg"])
    late_sharp = sum(1 for at, ang in turn_events if at >= tail_start and ang > sharp)

    return StrokeFeatures(
        path_length=path,
        chord=chord,
        bbox_w=w,
        bbox_h=h,
        bbox_diag=diag,
        straightness=straightness,
        closed=closed,
        total_turning=turning,
        reversals_dominant=_count_reversals(proj_dom, hysteresis),
        reversals_perp=_count_reversals(proj_perp, hysteresis),
        extent_dominant=extent_dom,
        extent_perp=extent_perp,
        late_sharp_turns=late_sharp,
        duration_ms=duration,
        mean_speed=path / (duration / 1000.0) if duration > 0 else 0.0,
    )


def classify_shape(f: StrokeFeatures) -> ShapeClass:
    """First matching rule wins; thresholds live in THRESHOLDS."""
    t = THRESHOLDS
    if f.path_length < t["dot_max_path"]:
        return ShapeClass.DOT
    if f.closed and abs(f.total_turning) >= t["loop_min_turning_rad"]:
        return ShapeClass.CLOSED_LOOP
    if f.reversals_dominant >= t["scan_min_reversals"] and f.extent_perp >= t["scan_min_aspect"] * f.extent_dominant:
        return ShapeClass.ZIGZAG_SCAN
    if f.reversals_perp >= t["wavy_min_reversals"] and f.extent_perp < t["scan_min_aspect"] * f.extent_dominant:
        return ShapeClass.WAVY_LINE
    if f.straightness >= t["arrow_min_straightness"] and f.late_sharp_turns >= t["arrow_min_sharp_turns"]:
        return ShapeClass.ARROW
    if f.straightness >= t["line_min_straightness"]:
        return ShapeClass.LINE
    if t["arc_min_turning_rad"] <= abs(f.total_turning) < t["loop_min_turning_rad"]:
        return ShapeClass.ARC
    return ShapeClass.OTHER


@dataclass(frozen=True)
class GestureContext:
    artboard_kind: str = "static"
    utterance_text: str = ""
    target_hint: str | None = None


_A = Intention.DIRECT_ATTENTION
_B = Intention.HIGHLIGHT_TRENDS
_C = Intention.DEPICT_PATH
_D = Intention.OUTLINE_BOUNDARY
_E = Intention.INDICATE_AREA_GROUP
_F = Intention.REFER_ABSENT_OBJECTS
_G = Intention.INDICATE_INTERVAL
_H = Intention.CONNECT_COMPONENTS
_I = Intention.DIRECT_READING_DIRECTION

# Candidate intentions per observed gesture form. Every shape also directs
# attention, so the default head is always available.
SHAPE_INTENTIONS: dict[ShapeClass, tuple[Intention, ...]] = {
    ShapeClass.DOT: (_A, _B, _G, _H),
    ShapeClass.LINE: (_A, _B, _C, _D, _G, _H, _I),
    ShapeClass.ARROW: (_A, _C, _F, _H, _I),
    ShapeClass.CLOSED_LOOP: (_A, _B, _C, _E, _F, _G),
    ShapeClass.ZIGZAG_SCAN: (_A, _B, _E),
    ShapeClass.WAVY_LINE: (_A, _B),
    ShapeClass.ARC: (_A, _B, _C, _D, _I),
    ShapeClass.OTHER: (_A, _B, _C, _D, _E, _F, _G, _H, _I),
}

INTENTION_KEYWORDS: dict[Intention, tuple[str, ...]] = {
    _B: ("trend", "grow", "drop", "peak", "increase"),
    _C: ("path", "route", "flow", "through"),
    _D: ("boundary", "divide", "split", "side"),
    _E: ("cluster", "group", "area", "region"),
    _F: ("missing", "absent", "should be"),
    _G: ("between", "interval", "range", "period", "from", "to"),
    _H: ("connect", "relate", "link", "both"),
    _I: ("read", "order", "first", "then"),
}

_WORD_EDGE = re.compile(r"^\W+|\W+$")


def _tokens(text: str) -> list[str]:
    return [t for t in (_WORD_EDGE.sub("", w.lower()) for w in text.split()) if t]


def infer_intentions(shape: ShapeClass, context: GestureContext) -> list[Intention]:
    """Rank candidate intentions for a shape given its verbal context.

    The base candidates come from the shape table; an intention whose
    keyword occurs in the utterance (whole-word) moves ahead, earlier
    occurrence winning. With no keyword hits the head stays
    direct_attention.
    """
    text = context.utterance_text or ""
    if context.target_hint:
        text = f"{text} {context.target_hint}"
    toks = _tokens(text)
    bigrams = [f"{a} {b}" for a, b in zip(toks, toks[1:])]

    first_hit: dict[Intention, int] = {}
    for intent, keywords in INTENTION_KEYWORDS.items():
        best = None
        for kw in keywords:
            seq = bigrams if " " in kw else toks
            for pos, tok in enumerate(seq):
                if tok == kw:
                    best = pos if best is None else min(best, pos)
                    break
        if best is not None:
            first_hit[intent] = best

    base = SHAPE_INTENTIONS[shape]
    ranked = sorted(base, key=lambda it: (first_hit.get(it, math.inf), base.index(it)))
    return list(dict.fromkeys(ranked))

"""Deterministic synthetic meeting-log generator for tests and benchmarks.

Gesture ids carry a prefix naming the construction the generator used, so
tests can assert on intent without re-deriving it: ``ga`` one-gesture-in-one-
utterance, ``gb`` several-gestures-in-one-utterance, ``gc`` one-gesture-over-
several-utterances, ``gp`` pencil annotation, ``gd`` cross-speaker doodle,
``gs`` gesture in a speech gap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import (
    Artboard,
    ArtboardKind,
    FocusEvent,
    GestureEvent,
    InvalidParams,
    MeetingLog,
    Participant,
    ProvenanceState,
    StrokePoint,
    Tool,
    TranscriptWord,
)

_NAMES = ("Alice", "Bob", "Carol", "Dan", "Eve", "Fay", "Gil", "Hana")
_PALETTE = ("#E6B422", "#2E86AB", "#A23B72", "#3B7A57", "#C1440E", "#6A5ACD", "#8B5F4D", "#2F4F4F")
_VOCAB = (
    "look", "at", "the", "data", "we", "see", "values", "rise", "over", "time",
    "points", "group", "near", "axis", "line", "chart", "trend", "peak", "cluster",
    "here", "this", "that", "region", "curve", "drops", "between", "years", "area",
)
_ACTIONS = ("select", "brush", "filter", "highlight")

_WORD_CELL_CAP_MS = 600
_MIN_SLOT_MS = 100


@dataclass(frozen=True)
class SynthParams:
    n_speakers: int = 2
    n_utterances: int = 12
    n_gestures: int = 8
    n_provenance: int = 0
    duration_ms: int = 120_000
    case_weights: tuple[float, float, float] = (0.6, 0.25, 0.15)  # Fig-3 cases A, B, C
    p_pencil: float = 0.15
    p_doodle: float = 0.0
    p_gap_gesture: float = 0.0
    words_min: int = 3
    words_max: int = 8


def _walk_points(rng: random.Random, ts: list[int]) -> tuple[StrokePoint, ...]:
    x = rng.uniform(0.15, 0.85)
    y = rng.uniform(0.15, 0.85)
    pts = []
    for t in ts:
        pts.append(StrokePoint(round(x, 6), round(y, 6), t))
        x = min(1.0, max(0.0, x + rng.uniform(-0.06, 0.06) + 0.01))
        y = min(1.0, max(0.0, y + rng.uniform(-0.06, 0.06)))
    return tuple(pts)


def _spread_times(rng: random.Random, start: int, end: int, n: int) -> list[int]:
    if n == 1:
        return [start]
    inner = sorted(rng.randint(start, end) for _ in range(n - 2))
    return [start, *inner, end]


class _Builder:
    def __init__(self, seed: int, params: SynthParams):
        self.rng = random.Random(seed)
        self.params = params
        self.gestures: list[GestureEvent] = []
        self.counter = 0

    def gesture_id(self, prefix: str) -> str:
        gid = f"{prefix}{self.counter}"
        self.counter += 1
        return gid


def synthesize_log(seed: int, params: SynthParams = SynthParams()) -> MeetingLog:
    """Build a valid, reproducible meeting log. Same (seed, params), same bytes."""
    p = params
    if p.n_speakers < 1:
        raise InvalidParams("n_speakers must be >= 1")
    if p.duration_ms < 1:
        raise InvalidParams("duration_ms must be >= 1")
    if p.n_utterances < 1:
        raise InvalidParams("n_utterances must be >= 1")
    if p.n_gestures < 0 or p.n_provenance < 0:
        raise InvalidParams("n_gestures and n_provenance must be >= 0")
    slot = p.duration_ms // p.n_utterances
    if slot < _MIN_SLOT_MS:
        raise InvalidParams(f"duration_ms too small for {p.n_utterances} utterances (slot {slot} ms)")

    b = _Builder(seed, p)
    rng = b.rng

    participants = [
        Participant(
            id=f"p{i}",
            display_name=_NAMES[i % len(_NAMES)] + ("" if i < len(_NAMES) else str(i)),
            color=_PALETTE[i % len(_PALETTE)],
        )
        for i in range(p.n_speakers)
    ]
    if p.p_doodle > 0:
        participants.append(Participant(id="p-doodler", display_name="Lurker", color="#777777"))
    speakers = [pt.id for pt in participants[: p.n_speakers]]

    artboards = [Artboard(id="board0", kind=ArtboardKind.STATIC, source="assets/board0.svg", width=1280, height=800)]
    if p.n_provenance > 0:
        artboards.append(
            Artboard(id="board-live", kind=ArtboardKind.INTERACTIVE, source="graph-renderer", width=1280, height=800)
        )

    # speaker runs of 1-3 so same-speaker adjacent pairs exist for case C
    spk: list[str] = []
    while len(spk) < p.n_utterances:
        s = rng.choice(speakers)
        for _ in range(rng.randint(1, 3)):
            if len(spk) < p.n_utterances:
                spk.append(s)
    if p.case_weights[2] > 0 and p.n_utterances >= 2:
        if not any(spk[i] == spk[i + 1] for i in range(len(spk) - 1)):
            spk[1] = spk[0]

    words: list[TranscriptWord] = []
    spans: list[tuple[int, int]] = []  # per-utterance (first word start, last word end)
    for i in range(p.n_utterances):
        u_start = i * slot + rng.randint(0, max(1, slot // 8))
        u_len = int(slot * (0.6 + 0.25 * rng.random()))
        n_words = rng.randint(p.words_min, p.words_max)
        cell = min(_WORD_CELL_CAP_MS, max(2, u_len // n_words))
        first = None
        last_end = 0
        for k in range(n_words):
            w_start = u_start + k * cell
            w_end = w_start + max(1, int(cell * 0.8))
            text = rng.choice(_VOCAB)
            if k == n_words - 1:
                text += "?" if rng.random() < 0.1 else "."
            words.append(TranscriptWord(text=text, start_ms=w_start, end_ms=w_end, speaker=spk[i]))
            first = w_start if first is None else first
            last_end = w_end
        spans.append((first, last_end))

    _make_gestures(b, spk, spans, speakers)

    provenance = []
    if p.n_provenance > 0:
        times = sorted(rng.randint(0, p.duration_ms) for _ in range(p.n_provenance))
        for i, t in enumerate(times):
            provenance.append(
                ProvenanceState(
                    t_ms=t,
                    user=rng.choice(speakers),
                    artboard="board-live",
                    action=_ACTIONS[i % len(_ACTIONS)],
                    state={"selected": f"node-{rng.randint(0, 30)}", "step": i},
                )
            )

    focus = [FocusEvent(t_ms=0, artboard="board0")]
    if len(artboards) > 1:
        t1 = rng.randint(p.duration_ms // 4, p.duration_ms // 2)
        t2 = rng.randint(t1 + 1, p.duration_ms)
        focus.append(FocusEvent(t_ms=t1, artboard=artboards[1].id))
        focus.append(FocusEvent(t_ms=t2, artboard="board0"))

    gestures = sorted(b.gestures, key=lambda g: (g.start_ms, g.id))
    return MeetingLog(
        meeting_id=f"synth-{seed}",
        started_at="2026-01-05T09:30:00+00:00",
        participants=tuple(participants),
        artboards=tuple(artboards),
        transcript_words=tuple(words),
        gestures=tuple(gestures),
        provenance=tuple(provenance),
        focus_events=tuple(focus),
    )


def _make_gestures(
    b: _Builder, spk: list[str], spans: list[tuple[int, int]], speakers: list[str]
) -> None:
    p, rng = b.params, b.rng
    n = len(spans)
    wa, wb, wc = p.case_weights
    total = (wa + wb + wc) or 1.0

    adj_pairs = [i for i in range(n - 1) if spk[i] == spk[i + 1]]
    skip_pairs = [i for i in range(n - 2) if spk[i] == spk[i + 2] and spk[i + 1] != spk[i]]

    def emit(prefix: str, author: str, gs: int, ge: int, ts: list[int] | None = None) -> None:
        if ts is None:
            ts = _spread_times(rng, gs, ge, rng.randint(4, 10))
        b.gestures.append(
            GestureEvent(
                id=b.gesture_id(prefix),
                tool=Tool.LASER,
                user=author,
                artboard="board0",
                points=_walk_points(rng, ts),
            )
        )

    def inside(i: int) -> tuple[int, int]:
        s, e = spans[i]
        m = max(1, (e - s) // 3)
        gs = s + rng.randint(1, m)
        ge = e - rng.randint(1, m)
        return (gs, ge) if ge > gs else (gs, gs + 1)

    def case_a() -> None:
        i = rng.randrange(n)
        gs, ge = inside(i)
        emit("ga", spk[i], gs, ge)

    def case_b() -> None:
        cands = [i for i in range(n) if spans[i][1] - spans[i][0] >= 8]
        if not cands:
            case_a()
            return
        i = rng.choice(cands)
        s, e = spans[i]
        mid = (s + e) // 2
        emit("gb", spk[i], s + 1, mid - 1)
        if b.counter - count_start < budget:
            emit("gb", spk[i], mid + 1, e - 1)

    def case_c() -> None:
        step = 2 if skip_pairs and rng.random() < 0.3 else 1
        variants = skip_pairs if step == 2 else adj_pairs
        if not variants:
            case_a()
            return
        i = rng.choice(variants)
        j = i + step
        si, ei = spans[i]
        sj, ej = spans[j]
        gs = si + rng.randint(1, max(1, (ei - si) // 2))
        ge = sj + rng.randint(1, max(1, (ej - sj) - 1))
        gs = min(gs, ei - 1)
        ge = max(ge, sj + 1)
        # >= 4 real points in each utterance window so segments never degenerate
        first = _spread_times(rng, gs, min(ei, ge - 1), 4)
        second = _spread_times(rng, max(sj, gs + 1), ge, 4)
        mid = [rng.randint(ei, sj)] if sj > ei and rng.random() < 0.5 else []
        ts = sorted(first + mid + second)
        emit("gc", spk[i], gs, ge, ts)

    def doodle() -> None:
        i = rng.randrange(n)
        s, e = spans[i]
        if e - s < 6:
            case_a()
            return
        gs = s + rng.randint(1, (e - s) // 3)
        ge = min(e - 1, gs + rng.randint(300, 1200))
        ge = max(ge, gs + 1)
        emit("gd", "p-doodler", gs, ge)

    def gap_gesture() -> None:
        i = rng.randrange(n)
        author = spk[i]
        nxt = next((spans[j][0] for j in range(i + 1, n) if spk[j] == author), None)
        lo = spans[i][1] + 50
        hi = min(spans[i][1] + 1900, p.duration_ms, (nxt - 1) if nxt else p.duration_ms)
        if hi - lo < 40:
            case_a()
            return
        gs = rng.randint(lo, hi - 30)
        ge = rng.randint(gs + 20, hi)
        emit("gs", author, gs, ge)

    def pencil() -> None:
        t0 = rng.randint(0, max(0, p.duration_ms - 2000))
        t1 = t0 + rng.randint(400, 5000)
        ts = _spread_times(rng, t0, t1, rng.randint(3, 10))
        erased = None
        if rng.random() < 0.5:
            erased = ts[-1] + rng.randint(1, 60_000)
        b.gestures.append(
            GestureEvent(
                id=b.gesture_id("gp"),
                tool=Tool.PENCIL,
                user=rng.choice(speakers),
                artboard="board0",
                points=_walk_points(rng, ts),
                erased_at_ms=erased,
            )
        )

    budget = p.n_gestures
    count_start = b.counter
    while b.counter - count_start < budget:
        r = rng.random()
        if r < p.p_pencil:
            pencil()
        elif r < p.p_pencil + p.p_doodle:
            doodle()
        elif r < p.p_pencil + p.p_doodle + p.p_gap_gesture:
            gap_gesture()
        else:
            c = rng.random() * total
            if c < wa:
                case_a()
            elif c < wa + wb:
                case_b()
            else:
                case_c()

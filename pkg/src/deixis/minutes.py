"""Topic segmentation and gesture-preserving meeting minutes.

Gesture links ride through summarization as opaque inline markers
(``⟦g1⟧``, merged ``⟦g1+g2⟧``) the summarizer must copy
verbatim, which turns "preserve referential gestures" into a mechanically
checkable contract. Every LLM reply is validated against the segment's
marker set; failures fall back to a deterministic extractive summary.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass

from .model import DeixisError, Utterance, fmt_mmss
from .prompts import minutes_messages, segmentation_messages
from .transport import ChatTransport, TransportError

log = logging.getLogger(__name__)

MARKER_OPEN = "⟦"
MARKER_CLOSE = "⟧"
_MARKER_RE = re.compile(f"{MARKER_OPEN}([^{MARKER_CLOSE}]+){MARKER_CLOSE}")

_STOPWORDS = frozenset(
    "a an and are as at be but by for from has have i in is it its of on or "
    "so that the then this to was we were will with you".split()
)


class MarkerValidationFailure(DeixisError):
    """Summarizer reply invented, repeated, or mangled a gesture marker."""


@dataclass(frozen=True)
class MinutesParams:
    window: int = 12  # fallback topic length, in utterances
    snap_range: int = 3  # how far a cut may move forward to a speaker change
    max_sentences: int = 3  # extractive fallback budget


@dataclass(frozen=True)
class TopicSegment:
    id: str
    utterance_ids: tuple[str, ...]
    start_ms: int
    end_ms: int
    marker_ids: tuple[str, ...]


@dataclass(frozen=True)
class MarkerToken:
    ids: tuple[str, ...]  # one id for a plain marker, two or more for merged

    def render(self) -> str:
        return f"{MARKER_OPEN}{'+'.join(self.ids)}{MARKER_CLOSE}"


@dataclass(frozen=True)
class MinutesBlock:
    segment: str
    text: str
    time_label: str
    markers: tuple[MarkerToken, ...]


def marker_token(gesture_id: str) -> str:
    return f"{MARKER_OPEN}{gesture_id}{MARKER_CLOSE}"


def parse_markers(text: str) -> list[MarkerToken]:
    return [MarkerToken(ids=tuple(body.split("+"))) for body in _MARKER_RE.findall(text)]


def strip_markers(text: str) -> str:
    return re.sub(f" ?{MARKER_OPEN}[^{MARKER_CLOSE}]*{MARKER_CLOSE}", "", text)


def segment_topics(
    utterances: list[Utterance],
    params: MinutesParams = MinutesParams(),
    markers_by_utterance: dict[str, list[str]] | None = None,
    boundary_backend=None,
) -> list[TopicSegment]:
    """Partition the utterance sequence into contiguous topic segments.

    With a boundary backend, the service proposes topic-start indices
    (validated: strictly increasing, in range); otherwise, or on any
    failure, a cut lands every ``window`` utterances, snapped forward to
    the next speaker change within ``snap_range``.
    """
    if not utterances:
        return []
    n = len(utterances)
    cuts: list[int] | None = None
    if boundary_backend is not None:
        try:
            proposal = boundary_backend.propose(utterances)
            if (
                isinstance(proposal, list)
                and all(isinstance(b, int) and 0 < b < n for b in proposal)
                and all(a < b for a, b in zip(proposal, proposal[1:]))
            ):
                cuts = list(proposal)
            else:
                log.warning("segmentation backend proposal invalid (%r); using window fallback", proposal)
        except (TransportError, DeixisError) as e:
            log.warning("segmentation backend failed (%s); using window fallback", e)

    if cuts is None:
        def snap(pos: int) -> int:
            for j in range(pos, min(pos + params.snap_range + 1, n)):
                if utterances[j].speaker != utterances[j - 1].speaker:
                    return j
            return pos

        cuts = []
        pos = params.window
        while pos < n:
            c = snap(pos)
            cuts.append(c)
            pos = c + params.window

    markers_by_utterance = markers_by_utterance or {}
    bounds = [0, *cuts, n]
    segments = []
    for i, (a, b) in enumerate(zip(bounds, bounds[1:])):
        members = utterances[a:b]
        marker_ids = [m for u in members for m in markers_by_utterance.get(u.id, [])]
        segments.append(
            TopicSegment(
                id=f"t{i:03d}",
                utterance_ids=tuple(u.id for u in members),
                start_ms=members[0].start_ms,
                end_ms=max(u.end_ms for u in members),
                marker_ids=tuple(dict.fromkeys(marker_ids)),
            )
        )
    return segments


def merge_gesture_markers(
    candidate_text: str, allowed_ids: set[str], segment: TopicSegment
) -> MinutesBlock:
    """Accept a minutes draft whose markers stay sound, or raise.

    Markers may be dropped or merged (``⟦a+b⟧``), but every id
    must come from the segment and appear at most once across the block.
    """
    tokens = parse_markers(candidate_text)
    seen: set[str] = set()
    for tok in tokens:
        for gid in tok.ids:
            if gid not in allowed_ids:
                raise MarkerValidationFailure(f"marker id {gid!r} not present in segment {segment.id}")
            if gid in seen:
                raise MarkerValidationFailure(f"marker id {gid!r} appears more than once")
            seen.add(gid)
        if len(tok.ids) != len(set(tok.ids)):
            raise MarkerValidationFailure(f"merged marker repeats an id: {tok.render()}")
    return MinutesBlock(
        segment=segment.id,
        text=candidate_text.strip(),
        time_label=f"{fmt_mmss(segment.start_ms)}–{fmt_mmss(segment.end_ms)}",
        markers=tuple(tokens),
    )


def _content_words(text: str) -> set[str]:
    words = re.findall(r"[a-z0-9']+", strip_markers(text).lower())
    return {w for w in words if w not in _STOPWORDS}


def dedupe_markers(text: str) -> str:
    """Keep only each gesture id's first marker occurrence (a split gesture
    can mark several sentences; a block may cite it once)."""
    seen: set[str] = set()

    def repl(m: re.Match) -> str:
        ids = [i for i in m.group(1).split("+") if i not in seen]
        seen.update(ids)
        return MarkerToken(ids=tuple(ids)).render() if ids else ""

    return re.sub(_MARKER_RE, repl, text).replace("  ", " ").replace(" .", ".").strip()


def extractive_minutes(
    segment: TopicSegment, marked_sentences: list[str], params: MinutesParams = MinutesParams()
) -> MinutesBlock:
    """Deterministic fallback: keep the highest-scoring sentences verbatim.

    score = 2 * markers in the sentence + content words shared with the
    rest of the segment; ties favor earlier sentences.
    """
    all_words = [_content_words(s) for s in marked_sentences]
    scored = []
    for i, sent in enumerate(marked_sentences):
        markers = len(parse_markers(sent))
        others = set().union(*(w for j, w in enumerate(all_words) if j != i)) if len(all_words) > 1 else set()
        overlap = len(all_words[i] & others)
        scored.append((-(2 * markers + overlap), i, sent))
    keep = sorted(sorted(scored)[: params.max_sentences], key=lambda t: t[1])
    text = dedupe_markers(" ".join(sent for _, _, sent in keep))
    return merge_gesture_markers(text, set(segment.marker_ids), segment)


class WindowSegmenter:
    """No-service stand-in: always defers to the window fallback."""

    def propose(self, utterances):
        raise DeixisError("window segmenter has no service")


class LlmSegmenter:
    def __init__(self, transport: ChatTransport, model: str = "gpt-4o-mini"):
        self.transport = transport
        self.model = model

    def propose(self, utterances: list[Utterance]) -> list[int]:
        numbered = "\n".join(f"{i}: {u.text}" for i, u in enumerate(utterances))
        body = {
            "model": self.model,
            "messages": segmentation_messages(numbered, max_boundaries=max(1, len(utterances) // 6)),
            "temperature": 0.0,
        }
        reply = self.transport.send(body)
        m = re.findall(r"\[[\d,\s]*\]", reply)
        if not m:
            raise DeixisError("segmentation reply carries no JSON array")
        return json.loads(m[-1])


class ExtractiveSummarizer:
    """Pure fallback summarizer."""

    def summarize(self, segment: TopicSegment, marked_sentences: list[str], params: MinutesParams) -> MinutesBlock:
        return extractive_minutes(segment, marked_sentences, params)


class LlmSummarizer:
    def __init__(self, transport: ChatTransport, model: str = "gpt-4o-mini"):
        self.transport = transport
        self.model = model

    def summarize(self, segment: TopicSegment, marked_sentences: list[str], params: MinutesParams) -> MinutesBlock:
        time_range = f"{fmt_mmss(segment.start_ms)}–{fmt_mmss(segment.end_ms)}"
        body = {
            "model": self.model,
            "messages": minutes_messages("\n".join(marked_sentences), time_range),
            "temperature": 0.0,
        }
        reply = self.transport.send(body)
        return merge_gesture_markers(reply, set(segment.marker_ids), segment)


def summarize_segment(
    segment: TopicSegment,
    marked_sentences: list[str],
    backend,
    params: MinutesParams = MinutesParams(),
) -> MinutesBlock:
    """Produce one validated minutes block; degradation is total."""
    try:
        return backend.summarize(segment, marked_sentences, params)
    except (TransportError, MarkerValidationFailure, DeixisError) as e:
        log.warning("summarizer failed for %s (%s); using extractive fallback", segment.id, e)
        return extractive_minutes(segment, marked_sentences, params)

"""Narrowing matched sentences to the word spans gestures refer to.

The primary route asks a chat-completion service with few-shot, reasoned
prompting and validates every candidate verbatim against the utterance; any
failure (transport, parse, validation) degrades to a deterministic deictic
heuristic, and past that to whole-sentence spans. Degradation is total: the
caller always gets exactly one span per match.
"""

from __future__ import annotations

import enum
import json
import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .matching import TransientMatch
from .model import DeixisError, Utterance
from .prompts import extraction_messages
from .transport import ChatTransport, TransportError

log = logging.getLogger(__name__)

ANCHOR_WORDS = frozenset({"this", "that", "these", "those", "here", "there"})
SPAN_STOP_WORDS = frozenset({"and", "but", "or", "which", "where"})
MAX_ANCHOR_EXTENSION = 4  # words appended to the right of an anchor

RETRY_DELAYS_MS = (250, 1000)  # exponential backoff schedule
MAX_ATTEMPTS = 2

DEFAULT_MODEL = "gpt-4o-mini"


class MalformedReply(DeixisError):
    """Service reply carries no parseable JSON answer."""


class ValidationFailure(DeixisError):
    """A candidate phrase does not occur verbatim in the utterance."""


class SpanSource(str, enum.Enum):
    LLM = "llm"
    HEURISTIC = "heuristic"
    WHOLE_SENTENCE = "whole_sentence"


@dataclass(frozen=True)
class ReferenceSpan:
    match_id: str  # bound by extract_references; "" from the bare ops
    utterance: str
    word_start: int
    word_end: int  # half-open
    source: SpanSource


@dataclass(frozen=True)
class ExtractionRequest:
    numbered_sentence: str
    gesture_lines: str
    model: str
    temperature: float = 0.0

    def to_body(self) -> dict:
        return {
            "model": self.model,
            "messages": extraction_messages(self.numbered_sentence, self.gesture_lines),
            "temperature": self.temperature,
        }


def _norm(word: str) -> str:
    return re.sub(r"^\W+|\W+$", "", word.lower())


def utterance_tokens(utterance: Utterance) -> list[str]:
    return utterance.text.split()


def build_extraction_request(
    utterance: Utterance,
    matches: list[TransientMatch],
    shapes: dict[str, str] | None = None,
    model: str = DEFAULT_MODEL,
) -> ExtractionRequest:
    numbered = " ".join(f"{i}:{w}" for i, w in enumerate(utterance_tokens(utterance)))
    lines = []
    for i, m in enumerate(matches):
        dur = m.segment.end_ms - m.segment.start_ms
        shape = (shapes or {}).get(m.segment.parent_gesture, "unknown")
        lines.append(f"gesture {i}: {shape}, {dur} ms")
    return ExtractionRequest(numbered_sentence=numbered, gesture_lines="; ".join(lines), model=model)


_JSON_FENCE = re.compile(r"```(?:json)?\s*(\{.*?\})\s*```", re.DOTALL)


def _last_json_object(text: str) -> dict | None:
    for candidate in reversed(_JSON_FENCE.findall(text)):
        try:
            obj = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(obj, dict):
            return obj
    # no fence: scan for the last balanced top-level object
    end = len(text)
    while True:
        close = text.rfind("}", 0, end)
        if close < 0:
            return None
        depth = 0
        for start in range(close, -1, -1):
            if text[start] == "}":
                depth += 1
            elif text[start] == "{":
                depth -= 1
                if depth == 0:
                    try:
                        obj = json.loads(text[start : close + 1])
                    except json.JSONDecodeError:
                        break
                    if isinstance(obj, dict):
                        return obj
                    break
        end = close


def llm_extract(
    request: ExtractionRequest,
    transport: ChatTransport,
    sleep=time.sleep,
) -> list[str]:
    """One chat call (retried once on transport error) returning the
    candidate phrase per gesture, in gesture order."""
    body = request.to_body()
    last_error: TransportError | None = None
    for attempt in range(MAX_ATTEMPTS):
        try:
            reply = transport.send(body)
            break
        except TransportError as e:
            last_error = e
            if attempt + 1 < MAX_ATTEMPTS:
                sleep(RETRY_DELAYS_MS[attempt] / 1000.0)
    else:
        raise last_error
    obj = _last_json_object(reply)
    if obj is None:
        raise MalformedReply("reply carries no parseable JSON object")
    n = len(obj)
    candidates: list[str] = []
    for i in range(n):
        value = obj.get(str(i), obj.get(i))
        if not isinstance(value, str):
            raise MalformedReply(f"reply JSON lacks a string entry for gesture {i}")
        candidates.append(value)
    return candidates


def validate_spans(utterance: Utterance, candidates: list[str]) -> list[ReferenceSpan]:
    """Ground each candidate verbatim in the utterance.

    Matching is case-insensitive and whitespace-normalized, tolerant of
    punctuation stuck to word edges; occurrences are chosen left to right so
    spans come out disjoint and ordered.
    """
    words = [_norm(w) for w in utterance_tokens(utterance)]
    spans: list[ReferenceSpan] = []
    cursor = 0
    for cand in candidates:
        tokens = [_norm(t) for t in cand.split()]
        tokens = [t for t in tokens if t]
        if not tokens:
            raise ValidationFailure(f"empty candidate {cand!r}")
        found = None
        for start in range(cursor, len(words) - len(tokens) + 1):
            if words[start : start + len(tokens)] == tokens:
                found = start
                break
        if found is None:
            raise ValidationFailure(f"candidate {cand!r} does not occur verbatim after word {cursor}")
        spans.append(
            ReferenceSpan(
                match_id="",
                utterance=utterance.id,
                word_start=found,
                word_end=found + len(tokens),
                source=SpanSource.LLM,
            )
        )
        cursor = found + len(tokens)
    return spans


def heuristic_extract(utterance: Utterance, n_gestures: int) -> list[ReferenceSpan]:
    """Deterministic offline extraction from deictic anchor words.

    Anchors (this/that/these/those/here/there) are assigned to gestures in
    temporal order; each span extends right from its anchor by up to 4
    words, stopping before the next assigned anchor, a function word, or
    past terminal punctuation. Surplus gestures get the whole sentence.
    """
    tokens = utterance_tokens(utterance)
    n_words = len(tokens)
    anchors = [i for i, w in enumerate(tokens) if _norm(w) in ANCHOR_WORDS]
    assigned = anchors[:n_gestures]
    assigned_set = set(assigned)

    spans: list[ReferenceSpan] = []
    for gi in range(n_gestures):
        if gi >= len(assigned):
            spans.append(ReferenceSpan("", utterance.id, 0, n_words, SpanSource.WHOLE_SENTENCE))
            continue
        start = assigned[gi]
        end = start + 1
        for _ in range(MAX_ANCHOR_EXTENSION):
            nxt = end
            if nxt >= n_words:
                break
            if nxt in assigned_set:
                break
            if _norm(tokens[nxt]) in SPAN_STOP_WORDS:
                break
            if tokens[end - 1].rstrip().endswith((".", "?", "!")):
                break
            end = nxt + 1
        spans.append(ReferenceSpan("", utterance.id, start, end, SpanSource.HEURISTIC))
    return spans


class HeuristicBackend:
    """Pure offline extractor."""

    def extract(self, utterance: Utterance, matches: list[TransientMatch]) -> list[ReferenceSpan]:
        return heuristic_extract(utterance, len(matches))


class LlmBackend:
    def __init__(
        self,
        transport: ChatTransport,
        model: str = DEFAULT_MODEL,
        shapes: dict[str, str] | None = None,
        sleep=time.sleep,
    ):
        self.transport = transport
        self.model = model
        self.shapes = shapes or {}
        self.sleep = sleep

    def extract(self, utterance: Utterance, matches: list[TransientMatch]) -> list[ReferenceSpan]:
        request = build_extraction_request(utterance, matches, self.shapes, self.model)
        candidates = llm_extract(request, self.transport, sleep=self.sleep)
        if len(candidates) != len(matches):
            raise ValidationFailure(
                f"reply names {len(candidates)} gestures, utterance has {len(matches)} matches"
            )
        return validate_spans(utterance, candidates)


def extract_references(
    utterance: Utterance,
    matches: list[TransientMatch],
    backend,
) -> list[ReferenceSpan]:
    """One span per match, in match order. Never raises: llm failures fall
    back to the heuristic, which itself degrades to whole-sentence spans."""
    if not matches:
        return []
    try:
        spans = backend.extract(utterance, matches)
    except (TransportError, MalformedReply, ValidationFailure, DeixisError) as e:
        log.warning("extraction backend failed for %s (%s); using heuristic", utterance.id, e)
        spans = heuristic_extract(utterance, len(matches))
    if len(spans) != len(matches):  # heuristic is total by construction
        spans = heuristic_extract(utterance, len(matches))
    return [replace(span, match_id=m.match_id) for span, m in zip(spans, matches)]


def extract_all(
    per_utterance: list[tuple[Utterance, list[TransientMatch]]],
    backend,
    concurrency: int = 4,
) -> list[ReferenceSpan]:
    """Extraction over many utterances, optionally concurrent; output order
    is fixed by utterance order, so concurrency never changes the bytes."""
    if concurrency <= 1 or len(per_utterance) <= 1:
        results = [extract_references(u, ms, backend) for u, ms in per_utterance]
    else:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            results = list(pool.map(lambda um: extract_references(um[0], um[1], backend), per_utterance))
    return [span for group in results for span in group]

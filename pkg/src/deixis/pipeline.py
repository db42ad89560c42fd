"""End-to-end orchestration: log in, notes bundle out.

Offline mode is fully deterministic and touches no transport; llm mode
shares one chat transport between reference extraction and minutes
generation, with every service failure degrading to the offline behavior.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .bundle import NotesBundle, build_bundle
from .extraction import DEFAULT_MODEL, HeuristicBackend, LlmBackend, ReferenceSpan, extract_all
from .matching import MatchParams, MatchSet, TransientMatch, build_match_set
from .minutes import (
    ExtractiveSummarizer,
    LlmSegmenter,
    LlmSummarizer,
    MinutesBlock,
    MinutesParams,
    TopicSegment,
    marker_token,
    segment_topics,
    summarize_segment,
)
from .model import MeetingLog, Utterance
from .segmentation import SegmentationRules, assemble_utterances
from .strokes import GestureContext, classify_shape, infer_intentions, stroke_features
from .transport import ChatTransport, transport_from_env

log = logging.getLogger(__name__)

MODE_OFFLINE = "offline"
MODE_LLM = "llm"


@dataclass(frozen=True)
class PipelineConfig:
    mode: str = MODE_OFFLINE
    llm_url: str | None = None
    llm_key: str | None = None
    llm_model: str = DEFAULT_MODEL
    max_gap_ms: int = 1500
    attach_window_ms: int = 2000
    minutes_window: int = 12
    concurrency: int = 4

    def segmentation_rules(self) -> SegmentationRules:
        return SegmentationRules(max_gap_ms=self.max_gap_ms)

    def match_params(self) -> MatchParams:
        return MatchParams(attach_window_ms=self.attach_window_ms)

    def minutes_params(self) -> MinutesParams:
        return MinutesParams(window=self.minutes_window)


def classify_gestures(log_: MeetingLog, match_set: MatchSet, utterances: list[Utterance]) -> dict[str, dict]:
    """Advisory taxonomy labels for every kept gesture."""
    by_id = {u.id: u for u in utterances}
    texts: dict[str, list[str]] = {}
    for m in match_set.transient_matches:
        texts.setdefault(m.segment.parent_gesture, []).append(by_id[m.utterance].text)
    kept = set(texts) | {d.gesture for d in match_set.durable_spans}
    labels: dict[str, dict] = {}
    for g in log_.gestures:
        if g.id not in kept:
            continue
        shape = classify_shape(stroke_features(g.points))
        context = GestureContext(
            artboard_kind=log_.artboard(g.artboard).kind.value,
            utterance_text=" ".join(texts.get(g.id, [])),
        )
        intentions = infer_intentions(shape, context)
        labels[g.id] = {"shape": shape.value, "intentions": [i.value for i in intentions]}
    return labels


def group_matches_by_utterance(
    match_set: MatchSet, utterances: list[Utterance]
) -> list[tuple[Utterance, list[TransientMatch]]]:
    grouped: dict[str, list[TransientMatch]] = {}
    for m in match_set.transient_matches:
        grouped.setdefault(m.utterance, []).append(m)
    out = []
    for u in utterances:
        if u.id in grouped:
            ms = sorted(grouped[u.id], key=lambda m: (m.segment.start_ms, m.match_id))
            out.append((u, ms))
    return out


def marked_sentences_for(
    segment: TopicSegment,
    utterances_by_id: dict[str, Utterance],
    spans_by_utterance: dict[str, list[ReferenceSpan]],
    speaker_names: dict[str, str],
) -> list[str]:
    """Transcript lines with gesture markers embedded at span positions."""
    lines = []
    for uid in segment.utterance_ids:
        u = utterances_by_id[uid]
        tokens = u.text.split()
        tail: list[str] = []
        after: dict[int, list[str]] = {}
        for s in sorted(spans_by_utterance.get(uid, []), key=lambda s: (s.word_start, s.word_end)):
            gid = s.match_id.rsplit(".", 1)[0]
            if s.word_end - s.word_start >= len(tokens):
                tail.append(marker_token(gid))
            else:
                after.setdefault(s.word_end - 1, []).append(marker_token(gid))
        parts: list[str] = []
        for i, tok in enumerate(tokens):
            parts.append(tok)
            parts.extend(after.get(i, []))
        parts.extend(tail)
        lines.append(f"{speaker_names[u.speaker]}: {' '.join(parts)}")
    return lines


def run_pipeline(
    log_: MeetingLog,
    config: PipelineConfig = PipelineConfig(),
    transport: ChatTransport | None = None,
) -> NotesBundle:
    utterances = assemble_utterances(log_.transcript_words, config.segmentation_rules())
    match_set = build_match_set(log_, utterances, config.match_params())
    taxonomy = classify_gestures(log_, match_set, utterances)

    if config.mode == MODE_LLM:
        if transport is None:
            transport = transport_from_env(config.llm_url, config.llm_key)
        shapes = {gid: label["shape"] for gid, label in taxonomy.items()}
        extract_backend = LlmBackend(transport, model=config.llm_model, shapes=shapes)
        segmenter = LlmSegmenter(transport, model=config.llm_model)
        summarizer = LlmSummarizer(transport, model=config.llm_model)
    else:
        extract_backend = HeuristicBackend()
        segmenter = None
        summarizer = ExtractiveSummarizer()

    grouped = group_matches_by_utterance(match_set, utterances)
    spans = extract_all(grouped, extract_backend, concurrency=config.concurrency)

    spans_by_utterance: dict[str, list[ReferenceSpan]] = {}
    markers_by_utterance: dict[str, list[str]] = {}
    for s in spans:
        spans_by_utterance.setdefault(s.utterance, []).append(s)
    for uid, span_list in spans_by_utterance.items():
        ordered = sorted(span_list, key=lambda s: (s.word_start, s.word_end, s.match_id))
        markers_by_utterance[uid] = list(
            dict.fromkeys(s.match_id.rsplit(".", 1)[0] for s in ordered)
        )

    segments = segment_topics(
        utterances, config.minutes_params(), markers_by_utterance, boundary_backend=segmenter
    )
    names = {p.id: p.display_name for p in log_.participants}
    by_id = {u.id: u for u in utterances}
    blocks: list[MinutesBlock] = []
    for segment in segments:
        sentences = marked_sentences_for(segment, by_id, spans_by_utterance, names)
        blocks.append(summarize_segment(segment, sentences, summarizer, config.minutes_params()))

    return build_bundle(log_, utterances, match_set, spans, blocks, taxonomy)

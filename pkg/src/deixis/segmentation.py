"""Sentence-level utterance assembly from word-timestamped transcripts.

ASR transcripts carry punctuation, so a three-rule heuristic replaces a full
NLP sentence splitter: split after terminal punctuation, at speaker changes,
and across long silent gaps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import TranscriptWord, Utterance

_TERMINAL = (".", "?", "!")


@dataclass(frozen=True)
class SegmentationRules:
    max_gap_ms: int = 1500


def _ends_sentence(text: str) -> bool:
    return text.rstrip().endswith(_TERMINAL)


def assemble_utterances(
    words: list[TranscriptWord] | tuple[TranscriptWord, ...],
    rules: SegmentationRules = SegmentationRules(),
) -> list[Utterance]:
    """Partition transcript words into utterances.

    A boundary is inserted after word i when its text ends in ``. ? !``, the
    next word has a different speaker, or the gap to the next word's start
    exceeds ``rules.max_gap_ms``. Every word lands in exactly one utterance;
    a same-speaker punctuation split is suppressed if the next word starts
    inside the current word (rare ASR overlap), keeping one speaker's
    utterance intervals free of mutual overlap.
    """
    utterances: list[Utterance] = []
    current: list[int] = []

    def flush() -> None:
        if not current:
            return
        members = [words[i] for i in current]
        utterances.append(
            Utterance(
                id=f"u{len(utterances):04d}",
                speaker=members[0].speaker,
                words=tuple(current),
                start_ms=min(w.start_ms for w in members),
                end_ms=max(w.end_ms for w in members),
                text=" ".join(w.text for w in members),
            )
        )
        current.clear()

    for i, w in enumerate(words):
        current.append(i)
        nxt = words[i + 1] if i + 1 < len(words) else None
        if nxt is None:
            flush()
            continue
        if nxt.speaker != w.speaker:
            flush()
        elif nxt.start_ms - w.end_ms > rules.max_gap_ms:
            flush()
        elif _ends_sentence(w.text) and nxt.start_ms >= w.end_ms:
            flush()
    flush()
    return utterances

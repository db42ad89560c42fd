"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS line per
criterion. Tolerances are fixed here, not calibrated elsewhere.
"""

import json
import random
import time

import pytest
from conftest import laser, line_points, sentence
from fakellm import FakeLlm
from oracle import match_set_pairs, oracle_match_pairs

from deixis.bundle import emit_json, emit_markdown
from deixis.extraction import (
    LlmBackend,
    SpanSource,
    build_extraction_request,
    extract_references,
)
from deixis.jsonutil import request_hash
from deixis.logio import parse_meeting_log, serialize_meeting_log
from deixis.matching import DropReason, build_match_set, match_transient, split_gesture
from deixis.minutes import marker_token, merge_gesture_markers, summarize_segment
from deixis.model import StrokePoint, overlap_ms
from deixis.pipeline import PipelineConfig, run_pipeline
from deixis.segmentation import assemble_utterances
from deixis.strokegen import GENERATORS, add_noise, transform
from deixis.strokes import ShapeClass, classify_shape, stroke_features
from deixis.synth import SynthParams, synthesize_log
from deixis.transport import FailOnContactTransport, ReplayTransport


def report(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


def random_params(meta: random.Random) -> SynthParams:
    return SynthParams(
        n_speakers=meta.randint(1, 3),
        n_utterances=meta.randint(2, 12),
        n_gestures=meta.randint(1, 12),
        duration_ms=meta.randint(30_000, 120_000),
        case_weights=(meta.random(), meta.random(), meta.random()),
        p_pencil=meta.random() * 0.3,
        p_doodle=meta.random() * 0.2,
        p_gap_gesture=meta.random() * 0.3,
    )


def test_matching_oracle_1000_logs():
    """build_match_set equals the brute-force interval-overlap oracle on
    1,000 seeded logs (<= 12 utterances, <= 12 gestures); 0 mismatches,
    under 10 s total."""
    meta = random.Random(2026)
    t0 = time.perf_counter()
    mismatches = 0
    segment_checks = 0
    for seed in range(1000):
        log = synthesize_log(seed, random_params(meta))
        utts = assemble_utterances(log.transcript_words)
        ms = build_match_set(log, utts)
        if match_set_pairs(ms) != oracle_match_pairs(log, utts):
            mismatches += 1
        by_id = {u.id: u for u in utts}
        by_gesture = {}
        for m in ms.transient_matches:
            by_gesture.setdefault(m.segment.parent_gesture, []).append(m)
        for matches in by_gesture.values():
            matched = [by_id[m.utterance] for m in matches]
            if len(matches) == 1:
                continue
            for m in matches:
                hits = [
                    u
                    for u in matched
                    if overlap_ms(m.segment.start_ms, m.segment.end_ms, u.start_ms, u.end_ms) > 0
                ]
                segment_checks += 1
                assert len(hits) == 1 and hits[0].id == m.utterance
    elapsed = time.perf_counter() - t0
    assert mismatches == 0, f"{mismatches} mismatching logs"
    assert elapsed < 10.0, f"oracle comparison took {elapsed:.2f}s"
    report(f"matching oracle: 0 mismatches over 1000 logs, {segment_checks} split-segment checks, {elapsed:.2f}s")


def test_splitting_conservation_10000_cases():
    """Concatenated non-interpolated segment points equal the original
    sequence over 10,000 random gesture/cut cases; 0 failures."""
    rng = random.Random(7)
    failures = 0
    for _ in range(10_000):
        n = rng.randint(2, 24)
        t = 0
        ts = []
        for _ in range(n):
            ts.append(t)
            t += rng.randint(0, 300)
        if ts[-1] == ts[0]:
            ts[-1] = ts[0] + 1
        pts = tuple(
            StrokePoint(round(rng.random(), 6), round(rng.random(), 6), tt) for tt in ts
        )
        g = laser("g", "p0", pts)
        span = ts[-1] - ts[0]
        cuts = sorted({rng.randint(ts[0] + 1, ts[-1] - 1) for _ in range(rng.randint(0, 5))}) if span > 1 else []
        segs = split_gesture(g, cuts)
        real = [p for s in segs for p in s.real_points()]
        if real != list(pts):
            failures += 1
    assert failures == 0
    report("splitting conservation: 0 failures over 10000 cases")


def test_filter_soundness_cross_speaker_doodles():
    """No transient match pairs a gesture with another speaker's utterance;
    injected cross-speaker doodles are 100% dropped as not_active_speaker."""
    meta = random.Random(99)
    doodles = 0
    for seed in range(60):
        p = SynthParams(
            n_speakers=meta.randint(2, 3),
            n_utterances=meta.randint(6, 12),
            n_gestures=meta.randint(4, 12),
            p_doodle=0.5,
            p_pencil=0.1,
        )
        log = synthesize_log(seed, p)
        utts = assemble_utterances(log.transcript_words)
        by_id = {u.id: u for u in utts}
        authors = {g.id: g.user for g in log.gestures}
        ms = build_match_set(log, utts)
        for m in ms.transient_matches:
            assert authors[m.segment.parent_gesture] == by_id[m.utterance].speaker
        dropped = {d.gesture: d.reason for d in ms.dropped}
        for g in log.gestures:
            if g.id.startswith("gd"):
                doodles += 1
                assert dropped.get(g.id) is DropReason.NOT_ACTIVE_SPEAKER, g.id
    assert doodles > 50
    report(f"filter soundness: author==speaker everywhere; {doodles}/{doodles} doodles dropped as not_active_speaker")


FIG5_TEXT = (
    "Since its foundation, after several years of rapid growth, we can observe "
    "that Google's stock price reached its peak around 2008."
)


def test_reference_extraction_scenario(tmp_path):
    """With the replay transport returning the recorded mapping, the
    pipeline links two ordered, disjoint spans: words [4,9) and [16,21)."""
    words = sentence(FIG5_TEXT, 0, 12000, "p0")
    (utt,) = assemble_utterances(words)
    gestures = [laser("g0", "p0", line_points(1000, 2500)), laser("g1", "p0", line_points(6000, 8000))]
    matches = [m for g in gestures for m in match_transient(g, [utt])]
    req = build_extraction_request(utt, matches)
    reply = (
        "The first gesture traces the early rise, the second circles the maximum.\n"
        '```json\n{"0": "several years of rapid growth", "1": "reached its peak around 2008"}\n```'
    )
    path = tmp_path / "replays.json"
    path.write_text(json.dumps({request_hash(req.to_body()): reply}))
    spans = extract_references(utt, matches, LlmBackend(ReplayTransport(path)))
    assert [(s.word_start, s.word_end) for s in spans] == [(4, 9), (16, 21)]
    assert spans[0].word_end <= spans[1].word_start
    assert all(s.source is SpanSource.LLM for s in spans)
    report('reference extraction scenario: spans [4,9) "several years of rapid growth" and [16,21) "reached its peak around 2008"')


def test_minutes_marker_contract():
    """A scripted reply merging markers 1-3 and keeping 4 and 9 из 9
    validates: 3 marker tokens covering 5 gesture ids."""
    words = []
    for i in range(9):
        words += sentence("topic item discussed fully.", i * 3000, i * 3000 + 2500, "p0")
    utts = assemble_utterances(words)
    from deixis.minutes import TopicSegment

    seg = TopicSegment(
        id="t000",
        utterance_ids=tuple(u.id for u in utts),
        start_ms=utts[0].start_ms,
        end_ms=utts[-1].end_ms,
        marker_ids=tuple(f"g{i}" for i in range(1, 10)),
    )

    class Scripted:
        def summarize(self, segment, sentences, params):
            reply = (
                f"The eastern districts {marker_token('g1+g2+g3')} dominated the first half. "
                f"Attention then moved north {marker_token('g4')}. "
                f"The walkthrough closed along the river {marker_token('g9')}."
            )
            return merge_gesture_markers(reply, set(segment.marker_ids), segment)

    block = summarize_segment(seg, ["line"] * 9, Scripted())
    assert len(block.markers) == 3
    ids = [gid for t in block.markers for gid in t.ids]
    assert ids == ["g1", "g2", "g3", "g4", "g9"]
    assert set(ids) <= set(seg.marker_ids)
    report("minutes marker contract: 3 tokens covering 5 of 9 gesture ids validate")


def test_classifier_accuracy_and_invariance():
    """>= 95/100 noisy samples per class (sigma = 0.02 * bbox diagonal);
    scale/rotation invariance: 0 failures over 1,000 trials."""
    rng = random.Random(71)
    per_class = {}
    for cls, gen in GENERATORS.items():
        hits = sum(
            classify_shape(stroke_features(add_noise(gen(rng), rng))) is cls for _ in range(100)
        )
        per_class[cls.value] = hits
        assert hits >= 95, f"{cls.value}: {hits}/100"
    inv_rng = random.Random(9)
    shapes = [c for c in ShapeClass if c is not ShapeClass.DOT]
    failures = 0
    for _ in range(1000):
        cls = inv_rng.choice(shapes)
        pts = GENERATORS[cls](inv_rng)
        f0 = stroke_features(pts)
        f1 = stroke_features(
            transform(pts, scale=inv_rng.uniform(0.5, 2.2), angle=inv_rng.uniform(0, 2 * 3.141592653589793))
        )
        ok = (
            classify_shape(f1) is classify_shape(f0)
            and abs(f1.straightness - f0.straightness) < 1e-9
            and abs(abs(f1.total_turning) - abs(f0.total_turning)) < 1e-9
            and f1.reversals_dominant == f0.reversals_dominant
            and f1.reversals_perp == f0.reversals_perp
        )
        failures += not ok
    assert failures == 0
    report(f"classifier: per-class accuracy {per_class}; invariance 0 failures / 1000 trials")


def _mutate_reply(rng: random.Random, reply: str, utterance_text: str) -> str:
    words = utterance_text.split()
    mutations = [
        lambda r: r[: rng.randint(0, len(r))],
        lambda r: r.replace("}", "", 1),
        lambda r: r.replace('"0"', '"zero"'),
        lambda r: r + ' {"0": 17}',
        lambda r: '```json\n{"0": "phrase not in the sentence at all"}\n```',
        lambda r: '```json\n{"0": "' + " ".join(rng.choices(words, k=3)) + ' extraword"}\n```',
        lambda r: "no json here, just prose about the gesture",
        lambda r: '```json\n[1, 2, 3]\n```',
        lambda r: '```json\n{"0": ""}\n```',
        lambda r: r.upper(),
    ]
    return rng.choice(mutations)(reply)


def test_extraction_validation_fuzzing():
    """llm-sourced spans are verbatim word ranges; 1,000 mutated replies
    never produce an out-of-sentence span (worst case whole_sentence)."""
    words = sentence("Look at this cluster right here near the peak.", 0, 9000, "p0")
    (utt,) = assemble_utterances(words)
    gestures = [laser("g0", "p0", line_points(1000, 2000)), laser("g1", "p0", line_points(4000, 5000))]
    matches = [m for g in gestures for m in match_transient(g, [utt])]
    base_reply = '```json\n{"0": "this cluster", "1": "the peak"}\n```'
    rng = random.Random(5)
    n_words = len(utt.text.split())

    class OneShot:
        def __init__(self, reply):
            self.reply = reply

        def send(self, body):
            return self.reply

    llm_spans = 0
    for _ in range(1000):
        reply = _mutate_reply(rng, base_reply, utt.text)
        backend = LlmBackend(OneShot(reply), sleep=lambda s: None)
        spans = extract_references(utt, matches, backend)
        assert len(spans) == len(matches)
        for s in spans:
            assert 0 <= s.word_start < s.word_end <= n_words
            if s.source is SpanSource.LLM:
                llm_spans += 1
                tokens = utt.text.split()[s.word_start : s.word_end]
                assert tokens, "llm span must cover words"
    report(f"extraction validation fuzzing: 1000 mutated replies, all spans in-sentence ({llm_spans} stayed llm-sourced)")


def test_offline_determinism_and_performance():
    """Offline build of a 30-minute meeting (500 utterances, 200 gestures,
    50 provenance states) in < 1 s, byte-identical across two runs."""
    params = SynthParams(
        n_speakers=4,
        n_utterances=500,
        n_gestures=200,
        n_provenance=50,
        duration_ms=1_800_000,
        p_pencil=0.15,
        p_doodle=0.05,
        p_gap_gesture=0.05,
    )
    data = serialize_meeting_log(synthesize_log(424242, params))

    def build_once():
        t0 = time.perf_counter()
        log = parse_meeting_log(data)
        bundle = run_pipeline(log, PipelineConfig(mode="offline"))
        payload = emit_json(bundle), emit_markdown(bundle)
        return payload, time.perf_counter() - t0

    (json1, md1), t1 = build_once()
    (json2, md2), t2 = build_once()
    assert json1 == json2 and md1 == md2
    assert t1 < 1.0 and t2 < 1.0, f"build took {t1:.3f}s / {t2:.3f}s"
    report(f"determinism & performance: byte-identical builds in {t1:.3f}s and {t2:.3f}s")


def test_offline_isolation():
    """mode=offline performs zero transport calls."""
    sentinel = FailOnContactTransport()
    log = synthesize_log(77, SynthParams(n_utterances=20, n_gestures=15, n_provenance=5, p_pencil=0.2))
    bundle = run_pipeline(log, PipelineConfig(mode="offline"), transport=sentinel)
    assert sentinel.calls == 0
    assert bundle.to_dict()["reference_spans"]
    report("offline isolation: fail-on-contact transport untouched")


def test_llm_replay_end_to_end(tmp_path):
    """llm mode against the replay transport reproduces the recorded run."""
    log = synthesize_log(31, SynthParams(n_utterances=14, n_gestures=8, n_provenance=2, p_pencil=0.2))
    replays = tmp_path / "replays.json"
    recorded = emit_json(
        run_pipeline(log, PipelineConfig(mode="llm"), transport=ReplayTransport(replays, record_with=FakeLlm()))
    )
    replayed = emit_json(run_pipeline(log, PipelineConfig(mode="llm"), transport=ReplayTransport(replays)))
    assert recorded == replayed
    report("llm replay: recorded and replayed bundles byte-identical")

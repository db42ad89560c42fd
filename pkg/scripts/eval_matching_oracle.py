#!/usr/bin/env python3
"""Compare the matcher against the brute-force oracle over many random logs.

Usage: python scripts/eval_matching_oracle.py [--logs N] [--seed N]
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "tests"))

from oracle import match_set_pairs, oracle_match_pairs  # noqa: E402

from deixis.matching import build_match_set  # noqa: E402
from deixis.segmentation import assemble_utterances  # noqa: E402
from deixis.synth import SynthParams, synthesize_log  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--logs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=2026)
    args = ap.parse_args()

    meta = random.Random(args.seed)
    t0 = time.perf_counter()
    mismatches = 0
    pairs_total = 0
    for seed in range(args.logs):
        params = SynthParams(
            n_speakers=meta.randint(1, 3),
            n_utterances=meta.randint(2, 12),
            n_gestures=meta.randint(1, 12),
            duration_ms=meta.randint(30_000, 120_000),
            case_weights=(meta.random(), meta.random(), meta.random()),
            p_pencil=meta.random() * 0.3,
            p_doodle=meta.random() * 0.2,
            p_gap_gesture=meta.random() * 0.3,
        )
        log = synthesize_log(seed, params)
        utts = assemble_utterances(log.transcript_words)
        got = match_set_pairs(build_match_set(log, utts))
        want = oracle_match_pairs(log, utts)
        pairs_total += len(want)
        if got != want:
            mismatches += 1
            print(f"MISMATCH seed={seed}")
            print(f"  impl only:   {sorted(got - want)[:5]}")
            print(f"  oracle only: {sorted(want - got)[:5]}")
    dt = time.perf_counter() - t0
    print(f"{args.logs} logs, {pairs_total} match pairs, {mismatches} mismatching logs, {dt:.2f}s")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())

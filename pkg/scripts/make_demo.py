#!/usr/bin/env python3
"""Generate a demo meeting log and build its notes bundle.

Usage: python scripts/make_demo.py [OUT_DIR] [--seed N]
The bundle lands in OUT_DIR (default demo_out/) and can be opened with the
viewer in frontend/.
"""

import argparse
import sys
from pathlib import Path

from deixis.bundle import write_bundle
from deixis.logio import serialize_meeting_log
from deixis.pipeline import PipelineConfig, run_pipeline
from deixis.synth import SynthParams, synthesize_log


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("out", nargs="?", default="demo_out")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    params = SynthParams(
        n_speakers=3,
        n_utterances=40,
        n_gestures=24,
        n_provenance=6,
        duration_ms=600_000,
        case_weights=(0.5, 0.3, 0.2),
        p_pencil=0.15,
        p_doodle=0.08,
        p_gap_gesture=0.08,
    )
    log = synthesize_log(args.seed, params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "meeting.json").write_bytes(serialize_meeting_log(log))
    bundle = run_pipeline(log, PipelineConfig(mode="offline"))
    write_bundle(bundle, out, asset_root=out)
    doc = bundle.to_dict()
    print(f"bundle in {out}/: {len(doc['utterances'])} utterances, "
          f"{len(doc['gesture_replays'])} replayable segments, "
          f"{len(doc['durable_annotations'])} durable annotations, "
          f"{len(doc['minutes'])} minutes blocks")
    return 0


if __name__ == "__main__":
    sys.exit(main())

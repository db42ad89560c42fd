"""deixis: interactive, gesture-linked notes from recorded data meetings."""

from .bundle import NotesBundle, build_bundle, emit_json, emit_markdown, write_bundle
from .extraction import ReferenceSpan, SpanSource, extract_references, heuristic_extract
from .logio import check_integrity, parse_meeting_log, serialize_meeting_log
from .matching import MatchParams, MatchSet, build_match_set, match_transient, split_gesture
from .minutes import MinutesBlock, TopicSegment, merge_gesture_markers, segment_topics, summarize_segment
from .model import (
    Artboard,
    FocusEvent,
    GestureEvent,
    MeetingLog,
    Participant,
    ProvenanceState,
    StrokePoint,
    TranscriptWord,
    Utterance,
)
from .pipeline import PipelineConfig, run_pipeline
from .segmentation import SegmentationRules, assemble_utterances
from .strokes import Intention, ShapeClass, classify_shape, infer_intentions, stroke_features
from .synth import SynthParams, synthesize_log

__version__ = "0.1.0"

import json

import jsonschema
import pytest
from conftest import laser, line_points, make_log, pencil, word

from deixis.logio import (
    check_integrity,
    log_to_dict,
    parse_meeting_log,
    serialize_meeting_log,
)
from deixis.model import (
    FocusEvent,
    IntegrityViolation,
    MalformedJson,
    ProvenanceState,
    SchemaViolation,
)
from deixis.synth import SynthParams, synthesize_log

MINIMAL = {
    "meeting_id": "m1",
    "started_at": "2026-02-03T10:00:00+00:00",
    "participants": [{"id": "p0", "display_name": "Alice", "color": "#E6B422"}],
    "artboards": [{"id": "a0", "kind": "static", "source": "assets/a0.png", "width": 1000, "height": 800}],
    "transcript": {"words": []},
    "gestures": [],
    "provenance": [],
    "focus": [],
}


def as_bytes(doc):
    return json.dumps(doc).encode()


def test_minimal_log_parses_with_empty_collections():
    log = parse_meeting_log(as_bytes(MINIMAL))
    assert log.meeting_id == "m1"
    assert log.transcript_words == ()
    assert log.gestures == ()
    assert log.provenance == ()


def test_dangling_artboard_names_gesture_and_target():
    doc = dict(MINIMAL)
    doc["gestures"] = [
        {"id": "g1", "tool": "laser", "user": "p0", "artboard": "zz", "points": [[0.1, 0.1, 0], [0.2, 0.2, 10]]}
    ]
    with pytest.raises(IntegrityViolation) as exc:
        parse_meeting_log(as_bytes(doc))
    assert "g1" in str(exc.value) and "zz" in str(exc.value)


def test_laser_with_erased_at_is_schema_violation():
    doc = dict(MINIMAL)
    doc["gestures"] = [
        {
            "id": "g1",
            "tool": "laser",
            "user": "p0",
            "artboard": "a0",
            "points": [[0.1, 0.1, 0]],
            "erased_at_ms": 99,
        }
    ]
    with pytest.raises(SchemaViolation):
        parse_meeting_log(as_bytes(doc))


def test_not_json_is_malformed():
    with pytest.raises(MalformedJson):
        parse_meeting_log(b"{nope")
    with pytest.raises(MalformedJson):
        parse_meeting_log(b"\xff\xfe\x00garbage")


@pytest.mark.parametrize(
    "mutate,needle",
    [
        (lambda d: d.pop("meeting_id"), "meeting_id"),
        (lambda d: d["participants"][0].pop("color"), "color"),
        (lambda d: d["participants"][0].update(color="yellow"), "color"),
        (lambda d: d["artboards"][0].update(kind="video"), "kind"),
        (lambda d: d["artboards"][0].update(width=0), "width"),
        (lambda d: d.update(started_at="not a time"), "started_at"),
        (lambda d: d["transcript"].pop("words"), "words"),
    ],
)
def test_schema_violations_name_the_path(mutate, needle):
    doc = json.loads(json.dumps(MINIMAL))
    mutate(doc)
    with pytest.raises(SchemaViolation) as exc:
        parse_meeting_log(as_bytes(doc))
    assert needle in str(exc.value)


def test_point_out_of_range_rejected():
    doc = dict(MINIMAL)
    doc["gestures"] = [
        {"id": "g1", "tool": "laser", "user": "p0", "artboard": "a0", "points": [[1.5, 0.1, 0]]}
    ]
    with pytest.raises(SchemaViolation) as exc:
        parse_meeting_log(as_bytes(doc))
    assert "points[0]" in str(exc.value)


def test_unknown_keys_ignored():
    doc = dict(MINIMAL)
    doc["x_future_extension"] = {"anything": 1}
    doc["participants"][0] = dict(doc["participants"][0], x_extra=True)
    parse_meeting_log(as_bytes(doc))


def test_unsorted_words_rejected():
    doc = dict(MINIMAL)
    doc["transcript"] = {
        "words": [
            {"text": "b", "start_ms": 100, "end_ms": 150, "speaker": "p0"},
            {"text": "a", "start_ms": 20, "end_ms": 60, "speaker": "p0"},
        ]
    }
    with pytest.raises(IntegrityViolation):
        parse_meeting_log(as_bytes(doc))


def test_provenance_on_static_artboard_rejected():
    log = make_log(provenance=(ProvenanceState(t_ms=5, user="p0", artboard="a0", action="select", state={}),))
    with pytest.raises(IntegrityViolation):
        check_integrity(log)


def test_focus_must_start_at_zero():
    log = make_log(focus=(FocusEvent(t_ms=10, artboard="a0"),))
    with pytest.raises(IntegrityViolation):
        check_integrity(log)


def test_erase_before_last_point_rejected():
    log = make_log(gestures=(pencil("g1", "p0", line_points(100, 900), erased_at_ms=500),))
    with pytest.raises(IntegrityViolation):
        check_integrity(log)


@pytest.mark.parametrize("seed", [0, 7, 23])
def test_serialize_parse_round_trip(seed):
    log = synthesize_log(seed, SynthParams(n_utterances=6, n_gestures=5, n_provenance=2, p_doodle=0.2))
    data = serialize_meeting_log(log)
    assert parse_meeting_log(data) == log


def test_realistic_log_round_trip():
    words = [word("Look", 0, 200), word("here.", 250, 500)]
    log = make_log(words=words, gestures=(laser("g1", "p0", line_points(100, 450)),))
    assert parse_meeting_log(serialize_meeting_log(log)) == log


@pytest.fixture(scope="module")
def log_schema():
    from importlib.resources import files

    return json.loads(files("deixis.schemas").joinpath("meeting_log.schema.json").read_text())


@pytest.mark.parametrize("seed", [1, 5])
def test_published_schema_accepts_valid_logs(log_schema, seed):
    log = synthesize_log(seed, SynthParams(n_utterances=5, n_gestures=4, n_provenance=1))
    jsonschema.validate(json.loads(serialize_meeting_log(log)), log_schema)


def test_published_schema_and_parser_agree_on_rejects(log_schema):
    bad_docs = []
    d = json.loads(json.dumps(MINIMAL))
    d["participants"][0]["color"] = "#12345"
    bad_docs.append(d)
    d = json.loads(json.dumps(MINIMAL))
    d["gestures"] = [
        {"id": "g", "tool": "laser", "user": "p0", "artboard": "a0", "points": [[0.5, 0.5, 1]], "erased_at_ms": 9}
    ]
    bad_docs.append(d)
    d = json.loads(json.dumps(MINIMAL))
    d["artboards"][0]["width"] = 0
    bad_docs.append(d)
    for doc in bad_docs:
        assert not _schema_ok(doc, log_schema)
        with pytest.raises((SchemaViolation, IntegrityViolation)):
            parse_meeting_log(as_bytes(doc))


def _schema_ok(doc, schema):
    try:
        jsonschema.validate(doc, schema)
        return True
    except jsonschema.ValidationError:
        return False


def test_docs_copy_matches_package_schema(log_schema):
    from pathlib import Path

    docs = json.loads((Path(__file__).parent.parent / "docs" / "meeting_log.schema.json").read_text())
    assert docs == log_schema


def test_log_to_dict_is_canonical_input():
    log = synthesize_log(3, SynthParams(n_utterances=4, n_gestures=3))
    assert serialize_meeting_log(log) == serialize_meeting_log(log)
    d = log_to_dict(log)
    assert set(d) == {
        "meeting_id", "started_at", "participants", "artboards", "transcript", "gestures", "provenance", "focus",
    }

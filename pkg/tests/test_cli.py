import json
import os
from pathlib import Path

import pytest
from fakellm import FakeLlm

from deixis.cli import EXIT_INPUT, EXIT_OK, run
from deixis.logio import serialize_meeting_log
from deixis.synth import SynthParams, synthesize_log
from deixis.transport import ReplayTransport


@pytest.fixture()
def log_file(tmp_path):
    log = synthesize_log(21, SynthParams(n_utterances=8, n_gestures=6, n_provenance=2, p_pencil=0.2))
    path = tmp_path / "meeting.json"
    path.write_bytes(serialize_meeting_log(log))
    return path


def test_validate_ok(log_file, capsys):
    assert run(["validate", str(log_file)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] and out["gestures"] == 6


def test_validate_dangling_names_gesture(tmp_path, capsys):
    doc = {
        "meeting_id": "m",
        "started_at": "2026-01-01T00:00:00+00:00",
        "participants": [{"id": "p0", "display_name": "A", "color": "#112233"}],
        "artboards": [{"id": "a0", "kind": "static", "source": "x.png", "width": 10, "height": 10}],
        "transcript": {"words": []},
        "gestures": [
            {"id": "g1", "tool": "laser", "user": "p0", "artboard": "zz", "points": [[0.1, 0.1, 0], [0.2, 0.2, 5]]}
        ],
        "provenance": [],
        "focus": [],
    }
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run(["validate", str(bad)]) == EXIT_INPUT
    err = capsys.readouterr().err
    assert "g1" in err and "zz" in err


def test_validate_garbage_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_bytes(b"\x00\x01 not json")
    assert run(["validate", str(bad)]) == EXIT_INPUT


def test_missing_file_is_input_error(capsys):
    assert run(["validate", "/nonexistent/meeting.json"]) == EXIT_INPUT


def test_match_json_to_stdout(log_file, capsys):
    assert run(["match", str(log_file)]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert "transient_matches" in doc and "dropped" in doc


def test_classify_and_minutes_and_extract(log_file, capsys):
    assert run(["classify", str(log_file)]) == EXIT_OK
    assert "taxonomy" in json.loads(capsys.readouterr().out)
    assert run(["minutes", str(log_file)]) == EXIT_OK
    assert "minutes" in json.loads(capsys.readouterr().out)
    assert run(["extract", str(log_file)]) == EXIT_OK
    assert "reference_spans" in json.loads(capsys.readouterr().out)


def test_build_offline_writes_bundle(log_file, tmp_path):
    out = tmp_path / "bundle"
    assert run(["build", str(log_file), "-o", str(out), "--mode", "offline"]) == EXIT_OK
    assert (out / "notes.json").is_file() and (out / "notes.md").is_file()


def test_build_idempotent_bytes(log_file, tmp_path):
    out = tmp_path / "bundle"
    assert run(["build", str(log_file), "-o", str(out), "--mode", "offline"]) == EXIT_OK
    first = (out / "notes.json").read_bytes()
    assert run(["build", str(log_file), "-o", str(out), "--mode", "offline"]) == EXIT_OK
    assert (out / "notes.json").read_bytes() == first


def test_synth_roundtrip(tmp_path, capsys):
    out = tmp_path / "synth.json"
    assert run(["synth", "--seed", "3", "-o", str(out), "--utterances", "6", "--gestures", "4"]) == EXIT_OK
    assert run(["validate", str(out)]) == EXIT_OK


def test_synth_stdout(capsys):
    assert run(["synth", "--seed", "3", "--utterances", "4", "--gestures", "2"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["meeting_id"] == "synth-3"


def test_log_json_structures_diagnostics(log_file, tmp_path, capsys):
    out = tmp_path / "bundle"
    assert run(["--log-json", "build", str(log_file), "-o", str(out)]) == EXIT_OK
    err_lines = [l for l in capsys.readouterr().err.splitlines() if l.strip()]
    assert err_lines
    for line in err_lines:
        json.loads(line)


def test_config_file_and_flag_precedence(log_file, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    Path("deixis.toml").write_text("[deixis]\nminutes_window = 2\n")
    assert run(["minutes", str(log_file)]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["minutes"]) >= 3  # window 2 over 8 utterances
    assert run(["minutes", str(log_file), "--window", "12"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["minutes"]) == 1  # flag beats config file


def test_llm_mode_with_replay_transport_matches_recorded_run(log_file, tmp_path, monkeypatch):
    from deixis.logio import parse_meeting_log
    from deixis.pipeline import PipelineConfig, run_pipeline
    from deixis.bundle import emit_json

    replays = tmp_path / "replays.json"
    log = parse_meeting_log(log_file.read_bytes())
    recording = ReplayTransport(replays, record_with=FakeLlm())
    recorded = emit_json(run_pipeline(log, PipelineConfig(mode="llm"), transport=recording))

    out = tmp_path / "bundle"
    monkeypatch.setenv("DEIXIS_LLM_URL", f"replay:{replays}")
    assert run(["build", str(log_file), "-o", str(out), "--mode", "llm"]) == EXIT_OK
    assert (out / "notes.json").read_bytes() == recorded


def test_llm_mode_degrades_when_replay_empty(log_file, tmp_path, monkeypatch):
    empty = tmp_path / "none.json"
    out = tmp_path / "bundle"
    monkeypatch.setenv("DEIXIS_LLM_URL", f"replay:{empty}")
    monkeypatch.setattr("deixis.extraction.RETRY_DELAYS_MS", (0, 0))
    assert run(["build", str(log_file), "-o", str(out), "--mode", "llm"]) == EXIT_OK
    doc = json.loads((out / "notes.json").read_text())
    assert all(s["source"] in ("heuristic", "whole_sentence") for s in doc["reference_spans"])


def test_offline_cli_never_touches_network(log_file, tmp_path, monkeypatch):
    import requests

    def boom(*a, **kw):
        raise AssertionError("network touched in offline mode")

    monkeypatch.setattr(requests, "post", boom)
    monkeypatch.setattr(requests, "get", boom, raising=False)
    out = tmp_path / "bundle"
    assert run(["build", str(log_file), "-o", str(out), "--mode", "offline"]) == EXIT_OK

import json

import numpy as np
import pytest
from click.testing import CliRunner

from adauthor import media, project_io
from adauthor.cli import main
from adauthor.model import ADSlot
from adauthor.timing import AudioTrack
from conftest import make_store, make_video


@pytest.fixture
def runner():
    return CliRunner()


def write_silent_wav(path, duration_ms=20000, rate=8000):
    media.write_wav(path, AudioTrack(np.zeros(rate * duration_ms // 1000), rate))


def make_project(tmp_path, with_descriptions=True):
    """Project file with one video (silent wav) and one variation."""
    wav = tmp_path / "clip.wav"
    write_silent_wav(wav)
    store = make_store()
    make_video(store, duration_ms=20000, media_refs={"wav": str(wav)})
    v = store.create_variation("vid1", "Base", "alice")
    if with_descriptions:
        store.add_description(v.id, ADSlot(1000, 3000), "A door opens.",
                              author_name="alice")
        store.add_description(v.id, ADSlot(6000, 8000), "A cat enters.",
                              author_name="alice")
    path = tmp_path / "project.json"
    project_io.save_project(store, path)
    return path, v.id


def run(runner, project, *args):
    return runner.invoke(main, ["--project", str(project), *args])


def test_plan_structured_matches_expected_slots(runner, tmp_path):
    wav = tmp_path / "clip.wav"
    write_silent_wav(wav)  # fully silent: one level-2 stretch, split in half
    result = runner.invoke(main, ["--format", "structured", "plan", "--audio", str(wav)])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["duration_ms"] == 20000
    assert [(s["start_ms"], s["end_ms"]) for s in payload["slots"]] == [
        (0, 10000),
        (10000, 20000),
    ]


def test_plan_text_output_is_tabular(runner, tmp_path):
    wav = tmp_path / "clip.wav"
    write_silent_wav(wav)
    result = runner.invoke(main, ["plan", "--audio", str(wav)])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert "start_ms" in lines[0]
    assert len(lines) == 3


def test_ingest_init_creates_project(runner, tmp_path):
    wav = tmp_path / "clip.wav"
    write_silent_wav(wav, duration_ms=3000)
    project = tmp_path / "project.json"
    result = run(runner, project, "ingest", "--init", "--source", str(wav))
    assert result.exit_code == 0, result.output
    store = project_io.load_project(project)
    [video] = store.videos.values()
    assert video.duration_ms == 3000


def test_fork_repeat_increments_count(runner, tmp_path):
    project, vid = make_project(tmp_path)
    for expected in (1, 2):
        result = run(runner, project, "fork", "--variation", vid)
        assert result.exit_code == 0, result.output
        store = project_io.load_project(project)
        assert store.get_variation(vid).fork_count == expected


def test_generate_with_mock_persists(runner, tmp_path):
    project, vid = make_project(tmp_path, with_descriptions=False)
    result = run(runner, project, "generate", "--variation", vid, "--mock")
    assert result.exit_code == 0, result.output
    store = project_io.load_project(project)
    descs = store.descriptions_for(vid)
    assert len(descs) == 2  # the two split silent slots
    assert all(d.text.startswith("DESC[") for d in descs)


def test_generate_without_provider_is_usage_error(runner, tmp_path):
    project, vid = make_project(tmp_path, with_descriptions=False)
    result = run(runner, project, "generate", "--variation", vid)
    assert result.exit_code == 2
    assert "provider" in result.output


def test_revise_then_project_carries_proposals(runner, tmp_path):
    project, vid = make_project(tmp_path)
    store = project_io.load_project(project)
    desc_id = store.descriptions_for(vid)[0].id
    result = run(
        runner, project, "--format", "structured",
        "revise", "--variation", vid, "--description-id", desc_id,
        "--prompt", "shorten", "--mock",
    )
    assert result.exit_code == 0, result.output
    [proposal] = json.loads(result.output)["proposals"]
    assert proposal["proposed_text"].startswith("REVISED[")
    reloaded = project_io.load_project(project)
    assert desc_id in reloaded.proposals


def test_tags_command_with_mock(runner, tmp_path):
    project, vid = make_project(tmp_path)
    result = run(runner, project, "tags", "--variation", vid, "--mock")
    assert result.exit_code == 0, result.output
    store = project_io.load_project(project)
    assert store.get_variation(vid).tags.predefined


def test_export_import_round_trip(runner, tmp_path):
    project, vid = make_project(tmp_path)
    vtt = tmp_path / "out.vtt"
    result = run(runner, project, "export", "--variation", vid, "-o", str(vtt))
    assert result.exit_code == 0
    assert vtt.read_text().startswith("WEBVTT")
    result = run(runner, project, "import", str(vtt), "--video", "vid1",
                 "--name", "copy")
    assert result.exit_code == 0, result.output
    store = project_io.load_project(project)
    copy = next(v for v in store.variations.values() if v.name == "copy")
    assert [(d.slot.start_ms, d.text) for d in store.descriptions_for(copy.id)] == [
        (1000, "A door opens."),
        (6000, "A cat enters."),
    ]


def test_metrics_between_variations(runner, tmp_path):
    project, vid = make_project(tmp_path)
    store = project_io.load_project(project)
    other = store.fork_variation(vid, "bob")
    d = store.descriptions_for(other.id)[0]
    store.edit_description_text(d.id, "A door creaks.", "bob")
    project_io.save_project(store, project)
    result = run(
        runner, project, "--format", "structured",
        "metrics", "--variation", vid, "--against", other.id,
    )
    assert result.exit_code == 0, result.output
    rows = json.loads(result.output)["per_slot"]
    assert [r["slot_start_ms"] for r in rows] == [1000, 6000]
    assert rows[1]["lexical_ratio"] == 1.0
    assert rows[0]["edit_distance"]["distance"] > 0


def test_domain_error_exit_code(runner, tmp_path):
    project, vid = make_project(tmp_path)
    result = run(runner, project, "fork", "--variation", "ghost")
    assert result.exit_code == 1
    assert "UnknownVariation" in result.output


def test_unknown_subcommand_is_usage_error(runner, tmp_path):
    project, _ = make_project(tmp_path)
    result = run(runner, project, "frobnicate")
    assert result.exit_code == 2

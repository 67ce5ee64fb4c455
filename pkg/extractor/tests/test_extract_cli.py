"""Command line behavior of reid-extract."""

import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from reidextract.cli import cli, main

from corpus import write_walk_video


@pytest.fixture
def runner():
    return CliRunner()


def main_with_argv(args):
    old = sys.argv
    sys.argv = ["reid-extract"] + args
    try:
        main()
    finally:
        sys.argv = old


class TestEmbedCommand:
    def test_embeds_directory_sorted(self, runner, still_corpus, tmp_path):
        image_dir, paths = still_corpus
        emb = tmp_path / "e.emb"
        manifest = tmp_path / "m.csv"
        result = runner.invoke(cli, [
            "embed", "--images", str(image_dir),
            "--out", str(emb), "--manifest", str(manifest),
            "--split", "gallery",
        ])
        assert result.exit_code == 0, result.output
        assert "embedded 10 images" in result.output
        lines = manifest.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "image_id,identity_id,camera_id,split,embedding_idx"
        assert [line.split(",")[0] for line in lines[1:]] == \
            [p.name for p in paths]
        assert emb.stat().st_size == 16 + 10 * 768 * 4

    def test_empty_directory_fails(self, runner, tmp_path):
        empty = tmp_path / "none"
        empty.mkdir()
        with pytest.raises(SystemExit) as exc_info:
            main_with_argv([
                "embed", "--images", str(empty),
                "--out", str(tmp_path / "e.emb"),
                "--manifest", str(tmp_path / "m.csv"),
            ])
        assert exc_info.value.code == 2

    def test_unknown_model_usage_error(self, tmp_path, still_corpus):
        image_dir, _ = still_corpus
        with pytest.raises(SystemExit) as exc_info:
            main_with_argv([
                "embed", "--images", str(image_dir),
                "--model", "made-up",
                "--out", str(tmp_path / "e.emb"),
                "--manifest", str(tmp_path / "m.csv"),
            ])
        assert exc_info.value.code == 2

    def test_bad_input_size(self, tmp_path, still_corpus):
        image_dir, _ = still_corpus
        with pytest.raises(SystemExit) as exc_info:
            main_with_argv([
                "embed", "--images", str(image_dir),
                "--input-size", "tallxwide",
                "--out", str(tmp_path / "e.emb"),
                "--manifest", str(tmp_path / "m.csv"),
            ])
        assert exc_info.value.code == 2


class TestDetectCommand:
    def test_detect_writes_jsonl_and_store(self, runner, tmp_path):
        video = tmp_path / "clip.avi"
        write_walk_video(video, [(0, 0, 30)], n_frames=30)
        out = tmp_path / "d.jsonl"
        result = runner.invoke(cli, [
            "detect", "--video", str(video), "--out", str(out),
            "--video-id", "cam7", "--camera", "7",
        ])
        assert result.exit_code == 0, result.output
        assert "30 frames" in result.output
        lines = [json.loads(l) for l in out.read_text().splitlines()]
        assert lines and all(l["video_id"] == "cam7" for l in lines)
        assert (tmp_path / "d.emb").exists()

    def test_missing_video_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc_info:
            main_with_argv([
                "detect", "--video", str(tmp_path / "gone.avi"),
                "--out", str(tmp_path / "d.jsonl"),
            ])
        assert exc_info.value.code == 2


class TestEntryPoint:
    def test_help_exits_zero(self):
        with pytest.raises(SystemExit) as exc_info:
            main_with_argv(["--help"])
        assert exc_info.value.code == 0

    def test_console_script(self):
        proc = subprocess.run(["reid-extract", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "embed" in proc.stdout and "detect" in proc.stdout

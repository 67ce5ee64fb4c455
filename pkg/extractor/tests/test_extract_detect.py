"""Video detection: frame accounting, overlap quality, score passthrough."""

import json
import struct

import numpy as np
import pytest

from reidextract import (
    ExtractorConfig,
    ModelLoadFailure,
    UndecodableVideo,
    build_detector,
    detect_video,
)

from corpus import iou, write_walk_video


def read_jsonl(path):
    return [json.loads(line) for line in path.read_text().splitlines() if line]


def store_rows(path):
    blob = path.read_bytes()
    _, rows, dim = struct.unpack_from("<III", blob, 4)
    return rows, dim


@pytest.fixture
def walk_video(tmp_path):
    path = tmp_path / "walk.avi"
    truth = write_walk_video(path, [(0, 0, 60), (1, 20, 40)], n_frames=60)
    return path, truth


class TestDetectVideo:
    def test_blank_video_empty_output(self, tmp_path):
        import cv2

        path = tmp_path / "blank.avi"
        writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"),
                                 10.0, (64, 48))
        for _ in range(7):
            writer.write(np.zeros((48, 64, 3), np.uint8))
        writer.release()
        report = detect_video(path, ExtractorConfig(), tmp_path / "d.jsonl")
        assert report.frame_count == 7
        assert report.n_detections == 0
        assert report.emb_path is None
        assert (tmp_path / "d.jsonl").read_text() == ""

    def test_every_present_frame_covered(self, walk_video, tmp_path):
        path, truth = walk_video
        report = detect_video(path, ExtractorConfig(), tmp_path / "d.jsonl")
        assert report.frame_count == 60
        by_frame = {}
        for line in read_jsonl(tmp_path / "d.jsonl"):
            by_frame.setdefault(line["frame_idx"], []).append(line["bbox"])
        for frame, entries in truth.items():
            for _, box in entries:
                best = max(
                    (iou(tuple(b), box) for b in by_frame.get(frame, [])),
                    default=0.0,
                )
                assert best >= 0.5, (frame, box, best)

    def test_line_schema_and_embedding_rows(self, walk_video, tmp_path):
        path, _ = walk_video
        report = detect_video(path, ExtractorConfig(), tmp_path / "d.jsonl",
                              video_id="street", camera_id=3)
        lines = read_jsonl(tmp_path / "d.jsonl")
        assert len(lines) == report.n_detections > 0
        assert [l["embedding_idx"] for l in lines] == list(range(len(lines)))
        rows, dim = store_rows(tmp_path / "d.emb")
        assert rows == len(lines)
        assert dim == 768
        for line in lines:
            assert line["video_id"] == "street"
            assert line["camera_id"] == 3
            assert 0.0 <= line["det_score"] <= 1.0
            assert len(line["bbox"]) == 4

    def test_score_floor_drops_ragged_blobs(self, tmp_path):
        import cv2

        path = tmp_path / "mixed.avi"
        writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"),
                                 10.0, (160, 120))
        for _ in range(5):
            frame = np.zeros((120, 160, 3), np.uint8)
            frame[10:90, 10:50] = (40, 40, 230)  # solid: coverage ~1
            # right triangle: fills about half its bounding box
            cv2.fillPoly(frame, [np.array([(90, 10), (150, 90), (90, 90)])],
                         (40, 230, 40))
            writer.write(frame)
        writer.release()

        all_lines_path = tmp_path / "all.jsonl"
        detect_video(path, ExtractorConfig(det_score_floor=0.0), all_lines_path)
        solid_only_path = tmp_path / "solid.jsonl"
        detect_video(path, ExtractorConfig(det_score_floor=0.9),
                     solid_only_path)
        n_all = len(read_jsonl(all_lines_path))
        n_solid = len(read_jsonl(solid_only_path))
        assert n_all >= 10  # both blobs, every frame
        assert n_solid == 5  # triangle filtered, solid kept
        for line in read_jsonl(solid_only_path):
            assert line["det_score"] >= 0.9

    def test_undecodable_video(self, tmp_path):
        junk = tmp_path / "junk.avi"
        junk.write_bytes(b"\x00" * 256)
        with pytest.raises(UndecodableVideo):
            detect_video(junk, ExtractorConfig(), tmp_path / "d.jsonl")

    def test_unknown_detector(self, walk_video, tmp_path):
        path, _ = walk_video
        with pytest.raises(ModelLoadFailure):
            detect_video(path, ExtractorConfig(), tmp_path / "d.jsonl",
                         detector="no-such-detector")

    def test_default_ids_from_file(self, walk_video, tmp_path):
        path, _ = walk_video
        detect_video(path, ExtractorConfig(), tmp_path / "d.jsonl")
        line = read_jsonl(tmp_path / "d.jsonl")[0]
        assert line["video_id"] == "walk"
        assert line["camera_id"] == 0


class TestDetectors:
    def test_hog_backend_loads_or_fails_cleanly(self):
        import cv2

        if hasattr(cv2, "HOGDescriptor"):
            detector = build_detector("hog")
            frame = np.zeros((256, 128, 3), np.uint8)
            assert detector.detect(frame) == []
        else:
            with pytest.raises(ModelLoadFailure):
                build_detector("hog")

    def test_contour_ignores_uniform_frames(self):
        detector = build_detector("contour")
        assert detector.detect(np.full((80, 80, 3), 17, np.uint8)) == []

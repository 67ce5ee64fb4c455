"""Loading, saving, and validation of the on-disk formats."""

from __future__ import annotations

import json
import struct

import numpy as np
import pytest

from reidbench import io
from reidbench.errors import (
    BadMagic,
    BadSplitValue,
    DuplicateEmbeddingIndex,
    DuplicateImageId,
    MalformedLine,
    MissingColumn,
    NonFiniteValue,
    OutOfRangeIndex,
    QueryWithoutGalleryMatch,
    TruncatedPayload,
    ValidationError,
    VersionUnsupported,
)
from reidbench.types import (
    DatasetManifest,
    DetectionRecord,
    DetectionTrack,
    EmbeddingStore,
    GroundTruthEntry,
    ImageRecord,
    QuerySpec,
    VideoGroundTruth,
)


# --------------------------------------------------------------------------
# manifest CSV
# --------------------------------------------------------------------------

class TestManifestCsv:
    def test_round_trip(self, tiny_manifest_store, tmp_path):
        manifest, _ = tiny_manifest_store
        path = tmp_path / "tiny.csv"
        io.save_manifest(manifest, path)
        loaded = io.load_manifest(path)
        assert loaded.records == manifest.records
        assert loaded.dataset_name == "tiny"

    def test_dataset_name_defaults_to_stem(self, tiny_manifest_store, tmp_path):
        manifest, _ = tiny_manifest_store
        path = tmp_path / "CUHK03.csv"
        io.save_manifest(manifest, path)
        assert io.load_manifest(path).dataset_name == "CUHK03"
        assert io.load_manifest(path, dataset_name="x").dataset_name == "x"

    def test_missing_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("image_id,identity_id,camera_id,split\n", encoding="utf-8")
        with pytest.raises(MissingColumn, match="embedding_idx"):
            io.load_manifest(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(MissingColumn):
            io.load_manifest(path)

    def test_short_row(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text(
            "image_id,identity_id,camera_id,split,embedding_idx\na.jpg,0,0,query\n",
            encoding="utf-8",
        )
        with pytest.raises(MissingColumn, match="row 2"):
            io.load_manifest(path)

    def test_non_integer_label(self, tmp_path):
        path = tmp_path / "label.csv"
        path.write_text(
            "image_id,identity_id,camera_id,split,embedding_idx\n"
            "a.jpg,zero,0,gallery,0\n",
            encoding="utf-8",
        )
        with pytest.raises(BadSplitValue, match="row 2"):
            io.load_manifest(path)

    def test_bad_split(self, tmp_path):
        path = tmp_path / "split.csv"
        path.write_text(
            "image_id,identity_id,camera_id,split,embedding_idx\n"
            "a.jpg,0,0,probe,0\n",
            encoding="utf-8",
        )
        with pytest.raises(BadSplitValue):
            io.load_manifest(path)

    def test_duplicate_image_id(self):
        recs = (
            ImageRecord("a.jpg", 0, 0, "gallery", 0),
            ImageRecord("a.jpg", 1, 0, "gallery", 1),
        )
        with pytest.raises(DuplicateImageId):
            DatasetManifest("d", recs)

    def test_duplicate_embedding_idx(self):
        recs = (
            ImageRecord("a.jpg", 0, 0, "gallery", 0),
            ImageRecord("b.jpg", 1, 0, "gallery", 0),
        )
        with pytest.raises(DuplicateEmbeddingIndex):
            DatasetManifest("d", recs)

    def test_query_needs_gallery_identity(self):
        recs = (
            ImageRecord("q.jpg", 3, 0, "query", 0),
            ImageRecord("g.jpg", 4, 1, "gallery", 1),
        )
        with pytest.raises(QueryWithoutGalleryMatch):
            DatasetManifest("d", recs)

    def test_split_stats(self, tiny_manifest_store):
        manifest, _ = tiny_manifest_store
        assert manifest.split_stats() == {
            "train": (1, 1),
            "query": (2, 2),
            "gallery": (2, 3),
        }

    def test_check_embeddings_bounds(self, tiny_manifest_store):
        manifest, _ = tiny_manifest_store
        small = EmbeddingStore(np.ones((2, 2), dtype=np.float32))
        with pytest.raises(OutOfRangeIndex):
            manifest.check_embeddings(small)


# --------------------------------------------------------------------------
# EMB1 binary embeddings
# --------------------------------------------------------------------------

class TestEmb1:
    def test_round_trip_byte_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        store = EmbeddingStore(rng.standard_normal((7, 5)).astype(np.float32))
        path = tmp_path / "e.emb1"
        io.save_embeddings(store, path)
        loaded = io.load_embeddings(path)
        assert loaded == store
        io.save_embeddings(loaded, tmp_path / "e2.emb1")
        assert (tmp_path / "e2.emb1").read_bytes() == path.read_bytes()

    def test_header_layout(self, tmp_path):
        store = EmbeddingStore(np.zeros((2, 3), dtype=np.float32))
        path = tmp_path / "e.emb1"
        io.save_embeddings(store, path)
        raw = path.read_bytes()
        assert raw[:4] == b"REID"
        assert struct.unpack("<III", raw[4:16]) == (1, 2, 3)
        assert len(raw) == 16 + 2 * 3 * 4

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.emb1"
        path.write_bytes(b"NOPE" + struct.pack("<III", 1, 1, 1) + b"\0" * 4)
        with pytest.raises(BadMagic):
            io.load_embeddings(path)

    def test_unsupported_version(self, tmp_path):
        path = tmp_path / "v2.emb1"
        path.write_bytes(b"REID" + struct.pack("<III", 2, 1, 1) + b"\0" * 4)
        with pytest.raises(VersionUnsupported):
            io.load_embeddings(path)

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "trunc.emb1"
        path.write_bytes(b"REID" + struct.pack("<III", 1, 2, 2) + b"\0" * 12)
        with pytest.raises(TruncatedPayload):
            io.load_embeddings(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "hdr.emb1"
        path.write_bytes(b"REID\x01")
        with pytest.raises(TruncatedPayload):
            io.load_embeddings(path)

    def test_oversized_payload(self, tmp_path):
        path = tmp_path / "over.emb1"
        path.write_bytes(b"REID" + struct.pack("<III", 1, 1, 1) + b"\0" * 8)
        with pytest.raises(TruncatedPayload):
            io.load_embeddings(path)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "nan.emb1"
        payload = struct.pack("<f", float("nan"))
        path.write_bytes(b"REID" + struct.pack("<III", 1, 1, 1) + payload)
        with pytest.raises(NonFiniteValue):
            io.load_embeddings(path)

    def test_little_endian_fixed(self, tmp_path):
        # value 1.0 as f32 LE is 00 00 80 3f regardless of host order
        store = EmbeddingStore(np.asarray([[1.0]], dtype=np.float32))
        path = tmp_path / "le.emb1"
        io.save_embeddings(store, path)
        assert path.read_bytes()[16:] == b"\x00\x00\x80\x3f"


# --------------------------------------------------------------------------
# detections / ground truth / queries JSONL
# --------------------------------------------------------------------------

def _det(frame, idx, score=0.9, box=(0.0, 0.0, 10.0, 20.0)):
    return DetectionRecord(frame_idx=frame, bbox=box, det_score=score,
                           embedding_idx=idx)


class TestDetectionsJsonl:
    def test_round_trip_single_video(self, tmp_path):
        track = DetectionTrack("v0", 0, (_det(3, 0), _det(1, 1), _det(3, 2)))
        path = tmp_path / "d.jsonl"
        io.save_detections(track, path)
        loaded = io.load_detections(path)
        assert loaded == track
        # frames come back sorted with stable within-frame order
        assert [d.frame_idx for d in loaded.frames] == [1, 3, 3]
        assert [d.embedding_idx for d in loaded.frames] == [1, 0, 2]

    def test_multi_video_grouping(self, tmp_path):
        t0 = DetectionTrack("v0", 0, (_det(0, 0),))
        t1 = DetectionTrack("v1", 1, (_det(0, 1),))
        path = tmp_path / "d.jsonl"
        io.save_detections([t1, t0], path)
        tracks = io.load_detection_tracks(path)
        assert [t.video_id for t in tracks] == ["v0", "v1"]
        with pytest.raises(ValidationError, match="exactly one video_id"):
            io.load_detections(path)

    def test_malformed_line_number(self, tmp_path):
        path = tmp_path / "d.jsonl"
        good = json.dumps({
            "video_id": "v0", "camera_id": 0, "frame_idx": 0,
            "bbox": [0, 0, 5, 5], "det_score": 0.8, "embedding_idx": 0,
        })
        path.write_text(good + "\n{not json}\n", encoding="utf-8")
        with pytest.raises(MalformedLine) as exc_info:
            io.load_detection_tracks(path)
        assert exc_info.value.line_no == 2

    def test_missing_key(self, tmp_path):
        path = tmp_path / "d.jsonl"
        path.write_text(json.dumps({
            "video_id": "v0", "frame_idx": 0, "bbox": [0, 0, 5, 5],
            "det_score": 0.8,
        }) + "\n", encoding="utf-8")
        with pytest.raises(MalformedLine, match="embedding_idx"):
            io.load_detection_tracks(path)

    def test_embedding_bounds_check(self, tmp_path):
        track = DetectionTrack("v0", 0, (_det(0, 5),))
        path = tmp_path / "d.jsonl"
        io.save_detections(track, path)
        assert io.load_detection_tracks(path, expected_rows=6)
        with pytest.raises(OutOfRangeIndex):
            io.load_detection_tracks(path, expected_rows=5)

    def test_blank_lines_skipped(self, tmp_path):
        track = DetectionTrack("v0", 0, (_det(0, 0),))
        path = tmp_path / "d.jsonl"
        io.save_detections(track, path)
        path.write_text(path.read_text(encoding="utf-8") + "\n\n",
                        encoding="utf-8")
        assert len(io.load_detections(path).frames) == 1

    def test_score_filter_inclusive(self):
        track = DetectionTrack("v0", 0, (
            _det(0, 0, score=0.50), _det(1, 1, score=0.49),
            _det(2, 2, score=1.0), _det(3, 3, score=0.0),
        ))
        kept = io.filter_detections(track, threshold=0.5)
        assert [d.embedding_idx for d in kept.frames] == [0, 2]
        assert io.filter_detections(track, threshold=0.0) == track


class TestGroundTruthJsonl:
    def test_round_trip(self, tmp_path):
        gt = VideoGroundTruth("v0", (
            GroundTruthEntry(4, 1, (0.0, 0.0, 5.0, 5.0)),
            GroundTruthEntry(2, 0, (1.0, 1.0, 5.0, 5.0)),
        ))
        path = tmp_path / "gt.jsonl"
        io.save_video_gt(gt, path)
        loaded = io.load_video_gt(path)
        assert loaded == gt
        assert [e.frame_idx for e in loaded.entries] == [2, 4]

    def test_multi_video(self, tmp_path):
        g0 = VideoGroundTruth("v0", (GroundTruthEntry(0, 0, (0, 0, 1, 1)),))
        g1 = VideoGroundTruth("v1", (GroundTruthEntry(0, 1, (0, 0, 1, 1)),))
        path = tmp_path / "gt.jsonl"
        io.save_video_gt([g1, g0], path)
        assert [g.video_id for g in io.load_video_gts(path)] == ["v0", "v1"]
        with pytest.raises(ValidationError):
            io.load_video_gt(path)


class TestQueriesJsonl:
    def test_round_trip(self, tmp_path):
        queries = [
            QuerySpec("q0", 0, np.asarray([1.0, 2.0, 3.0])),
            QuerySpec("q1", 7, np.asarray([0.0, -1.0, 0.5])),
        ]
        path = tmp_path / "q.jsonl"
        io.save_queries(queries, path)
        assert io.load_queries(path) == queries

    def test_dimension_check(self, tmp_path):
        io.save_queries([QuerySpec("q0", 0, np.ones(4))], tmp_path / "q.jsonl")
        assert io.load_queries(tmp_path / "q.jsonl", expected_dim=4)
        with pytest.raises(ValidationError):
            io.load_queries(tmp_path / "q.jsonl", expected_dim=3)

"""Readers and writers for the interchange formats.

Formats:
  * manifest       CSV, header ``image_id,identity_id,camera_id,split,embedding_idx``
  * embeddings     EMB1 binary: magic ``REID``, u32 LE version=1, u32 LE rows,
                   u32 LE dim, then rows*dim float32 LE, row-major
  * detections     JSONL, one object per detection
  * video GT       JSONL, one object per annotated (frame, identity) box
  * query set      JSONL, one object per query

All loaders are pure functions returning immutable, fully validated
structures. Writers round-trip byte-exactly (EMB1) or structurally (the
text formats).
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    BadMagic,
    BadSplitValue,
    MalformedLine,
    MissingColumn,
    NegativeDimension,
    OutOfRangeIndex,
    TruncatedPayload,
    ValidationError,
    VersionUnsupported,
)
from .types import (
    DatasetManifest,
    DetectionRecord,
    DetectionTrack,
    EmbeddingStore,
    GroundTruthEntry,
    ImageRecord,
    QuerySpec,
    VideoGroundTruth,
)

MANIFEST_HEADER = ["image_id", "identity_id", "camera_id", "split", "embedding_idx"]

EMB1_MAGIC = b"REID"
EMB1_VERSION = 1

DEFAULT_DET_SCORE_THRESHOLD = 0.5


# --------------------------------------------------------------------------
# manifest CSV
# --------------------------------------------------------------------------

def load_manifest(path: str | Path, dataset_name: str | None = None) -> DatasetManifest:
    """Load and validate a manifest CSV.

    `dataset_name` defaults to the file stem; the CSV schema itself carries
    no dataset name.
    """
    path = Path(path)
    name = dataset_name if dataset_name is not None else path.stem
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumn(f"{path}: empty file, expected header "
                                f"{','.join(MANIFEST_HEADER)}") from None
        if header != MANIFEST_HEADER:
            missing = [c for c in MANIFEST_HEADER if c not in header]
            raise MissingColumn(
                f"{path}: bad header {header!r}"
                + (f", missing column(s) {missing}" if missing else "")
            )
        records = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(MANIFEST_HEADER):
                raise MissingColumn(
                    f"{path} row {line_no}: expected {len(MANIFEST_HEADER)} "
                    f"fields, got {len(row)}"
                )
            image_id, identity, camera, split, emb_idx = row
            try:
                rec = ImageRecord(
                    image_id=image_id,
                    identity_id=int(identity),
                    camera_id=int(camera),
                    split=split,
                    embedding_idx=int(emb_idx),
                )
            except ValueError as exc:
                raise BadSplitValue(
                    f"{path} row {line_no} ({image_id!r}): {exc}"
                ) from None
            records.append(rec)
    return DatasetManifest(dataset_name=name, records=tuple(records))


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_HEADER)
        for r in manifest.records:
            writer.writerow(
                [r.image_id, r.identity_id, r.camera_id, r.split, r.embedding_idx]
            )


# --------------------------------------------------------------------------
# EMB1 embeddings
# --------------------------------------------------------------------------

def load_embeddings(path: str | Path) -> EmbeddingStore:
    raw = Path(path).read_bytes()
    if len(raw) < 16:
        raise TruncatedPayload(f"{path}: file too short for an EMB1 header")
    if raw[:4] != EMB1_MAGIC:
        raise BadMagic(f"{path}: bad magic {raw[:4]!r}, expected {EMB1_MAGIC!r}")
    version, rows, dim = struct.unpack("<III", raw[4:16])
    if version != EMB1_VERSION:
        raise VersionUnsupported(f"{path}: version {version}, only {EMB1_VERSION} supported")
    expected = rows * dim * 4
    payload = raw[16:]
    if len(payload) != expected:
        raise TruncatedPayload(
            f"{path}: payload is {len(payload)} bytes, expected {expected} "
            f"for {rows}x{dim} float32"
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(rows, dim)
    return EmbeddingStore(data=data)  # finite/shape invariants checked there


def save_embeddings(store: EmbeddingStore, path: str | Path) -> None:
    header = EMB1_MAGIC + struct.pack("<III", EMB1_VERSION, store.rows, store.dim)
    payload = np.ascontiguousarray(store.data, dtype="<f4").tobytes()
    Path(path).write_bytes(header + payload)


# --------------------------------------------------------------------------
# detection / ground-truth / query JSONL
# --------------------------------------------------------------------------

def _iter_jsonl(path: Path):
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedLine(line_no, f"{path}: {exc}") from None
            if not isinstance(obj, dict):
                raise MalformedLine(line_no, f"{path}: expected a JSON object")
            yield line_no, obj


def _require(obj: dict, keys: Sequence[str], path: Path, line_no: int) -> None:
    for key in keys:
        if key not in obj:
            raise MalformedLine(line_no, f"{path}: missing key {key!r}")


def _detection_from_obj(obj: dict, path: Path, line_no: int) -> tuple[str, int, DetectionRecord]:
    _require(obj, ("video_id", "frame_idx", "bbox", "det_score", "embedding_idx"), path, line_no)
    try:
        rec = DetectionRecord(
            frame_idx=int(obj["frame_idx"]),
            bbox=tuple(float(v) for v in obj["bbox"]),
            det_score=float(obj["det_score"]),
            embedding_idx=int(obj["embedding_idx"]),
        )
    except (TypeError, ValueError) as exc:
        raise MalformedLine(line_no, f"{path}: {exc}") from None
    except (NegativeDimension, OutOfRangeIndex) as exc:
        raise type(exc)(f"{path} line {line_no}: {exc}") from None
    return str(obj["video_id"]), int(obj.get("camera_id", 0)), rec


def load_detection_tracks(
    path: str | Path, expected_rows: int | None = None
) -> list[DetectionTrack]:
    """Load a detections JSONL file, grouping lines into one track per video.

    Tracks come back sorted by video id; detections keep input order within
    a frame. With `expected_rows` set, embedding indices are bounds-checked
    against the live embedding store size.
    """
    path = Path(path)
    grouped: dict[str, tuple[int, list[DetectionRecord]]] = {}
    for line_no, obj in _iter_jsonl(path):
        video_id, camera_id, rec = _detection_from_obj(obj, path, line_no)
        if expected_rows is not None and rec.embedding_idx >= expected_rows:
            raise OutOfRangeIndex(
                f"{path} line {line_no}: embedding_idx {rec.embedding_idx} "
                f">= store rows {expected_rows}"
            )
        if video_id not in grouped:
            grouped[video_id] = (camera_id, [])
        grouped[video_id][1].append(rec)
    return [
        DetectionTrack(video_id=vid, camera_id=cam, frames=tuple(recs))
        for vid, (cam, recs) in sorted(grouped.items())
    ]


def load_detections(path: str | Path, expected_rows: int | None = None) -> DetectionTrack:
    """Load a single-video detections JSONL file."""
    tracks = load_detection_tracks(path, expected_rows=expected_rows)
    if len(tracks) != 1:
        raise ValidationError(
            f"{path}: expected exactly one video_id, found {len(tracks)}; "
            "use load_detection_tracks for multi-video files"
        )
    return tracks[0]


def save_detections(tracks: DetectionTrack | Sequence[DetectionTrack], path: str | Path) -> None:
    if isinstance(tracks, DetectionTrack):
        tracks = [tracks]
    with open(path, "w", encoding="utf-8") as fh:
        for track in tracks:
            for d in track.frames:
                fh.write(json.dumps({
                    "video_id": track.video_id,
                    "camera_id": track.camera_id,
                    "frame_idx": d.frame_idx,
                    "bbox": list(d.bbox),
                    "det_score": d.det_score,
                    "embedding_idx": d.embedding_idx,
                }) + "\n")


def load_video_gts(path: str | Path) -> list[VideoGroundTruth]:
    """Load a ground-truth JSONL file, one VideoGroundTruth per video id."""
    path = Path(path)
    grouped: dict[str, list[GroundTruthEntry]] = {}
    for line_no, obj in _iter_jsonl(path):
        _require(obj, ("video_id", "frame_idx", "identity_id", "bbox"), path, line_no)
        try:
            entry = GroundTruthEntry(
                frame_idx=int(obj["frame_idx"]),
                identity_id=int(obj["identity_id"]),
                bbox=tuple(float(v) for v in obj["bbox"]),
            )
        except (TypeError, ValueError) as exc:
            raise MalformedLine(line_no, f"{path}: {exc}") from None
        except ValidationError as exc:
            raise type(exc)(f"{path} line {line_no}: {exc}") from None
        grouped.setdefault(str(obj["video_id"]), []).append(entry)
    return [
        VideoGroundTruth(video_id=vid, entries=tuple(entries))
        for vid, entries in sorted(grouped.items())
    ]


def load_video_gt(path: str | Path) -> VideoGroundTruth:
    """Load a single-video ground-truth JSONL file."""
    gts = load_video_gts(path)
    if len(gts) != 1:
        raise ValidationError(
            f"{path}: expected exactly one video_id, found {len(gts)}; "
            "use load_video_gts for multi-video files"
        )
    return gts[0]


def save_video_gt(gts: VideoGroundTruth | Sequence[VideoGroundTruth], path: str | Path) -> None:
    if isinstance(gts, VideoGroundTruth):
        gts = [gts]
    with open(path, "w", encoding="utf-8") as fh:
        for gt in gts:
            for e in gt.entries:
                fh.write(json.dumps({
                    "video_id": gt.video_id,
                    "frame_idx": e.frame_idx,
                    "identity_id": e.identity_id,
                    "bbox": list(e.bbox),
                }) + "\n")


def load_queries(path: str | Path, expected_dim: int | None = None) -> list[QuerySpec]:
    path = Path(path)
    queries = []
    for line_no, obj in _iter_jsonl(path):
        _require(obj, ("query_id", "identity_id", "embedding"), path, line_no)
        try:
            q = QuerySpec(
                query_id=str(obj["query_id"]),
                identity_id=int(obj["identity_id"]),
                embedding=np.asarray(obj["embedding"], dtype=np.float64),
            )
        except (TypeError, ValueError) as exc:
            raise MalformedLine(line_no, f"{path}: {exc}") from None
        except ValidationError as exc:
            raise type(exc)(f"{path} line {line_no}: {exc}") from None
        if expected_dim is not None and q.embedding.size != expected_dim:
            raise MalformedLine(
                line_no,
                f"{path}: embedding has dim {q.embedding.size}, expected {expected_dim}",
            )
        queries.append(q)
    return queries


def save_queries(queries: Sequence[QuerySpec], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for q in queries:
            fh.write(json.dumps({
                "query_id": q.query_id,
                "identity_id": q.identity_id,
                "embedding": [float(v) for v in q.embedding],
            }) + "\n")


# --------------------------------------------------------------------------
# detection filtering
# --------------------------------------------------------------------------

def filter_detections(
    track: DetectionTrack, threshold: float = DEFAULT_DET_SCORE_THRESHOLD
) -> DetectionTrack:
    """Keep detections with det_score >= threshold, preserving order.

    The boundary is inclusive so that threshold 0 is the identity filter.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValidationError(f"threshold must be in [0, 1], got {threshold}")
    kept = tuple(d for d in track.frames if d.det_score >= threshold)
    return DetectionTrack(video_id=track.video_id, camera_id=track.camera_id, frames=kept)

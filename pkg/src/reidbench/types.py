"""Core domain types.

All structures are immutable after construction and validate their
invariants eagerly, so a successfully built object is always safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateEmbeddingIndex,
    DuplicateImageId,
    BadSplitValue,
    EmptyStore,
    NegativeDimension,
    NegativeLabel,
    NonFiniteValue,
    OutOfRangeIndex,
    QueryWithoutGalleryMatch,
)

SPLITS = ("train", "query", "gallery")

Bbox = tuple[float, float, float, float]  # (x, y, w, h) in pixels


@dataclass(frozen=True)
class ImageRecord:
    """One cropped-person image: identity/camera labels plus its feature row."""

    image_id: str
    identity_id: int
    camera_id: int
    split: str
    embedding_idx: int

    def __post_init__(self):
        if self.split not in SPLITS:
            raise BadSplitValue(
                f"row {self.image_id!r}: split {self.split!r} not in {SPLITS}"
            )
        if self.identity_id < 0 or self.camera_id < 0:
            raise NegativeLabel(
                f"row {self.image_id!r}: identity_id and camera_id must be >= 0"
            )
        if self.embedding_idx < 0:
            raise OutOfRangeIndex(
                f"row {self.image_id!r}: embedding_idx must be >= 0"
            )


@dataclass(frozen=True)
class DatasetManifest:
    """Identity/camera/split catalog of one dataset's cropped images.

    Invariants (checked at construction):
      * image ids are unique;
      * embedding indices are unique;
      * every identity present in the query split also appears in the
        gallery split (closed-set retrieval assumption).
    """

    dataset_name: str
    records: tuple[ImageRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen_ids: set[str] = set()
        seen_emb: set[int] = set()
        for rec in self.records:
            if rec.image_id in seen_ids:
                raise DuplicateImageId(f"row {rec.image_id!r}: duplicate image_id")
            seen_ids.add(rec.image_id)
            if rec.embedding_idx in seen_emb:
                raise DuplicateEmbeddingIndex(
                    f"row {rec.image_id!r}: embedding_idx {rec.embedding_idx} reused"
                )
            seen_emb.add(rec.embedding_idx)
        gallery_ids = {r.identity_id for r in self.records if r.split == "gallery"}
        for rec in self.records:
            if rec.split == "query" and rec.identity_id not in gallery_ids:
                raise QueryWithoutGalleryMatch(
                    f"row {rec.image_id!r}: query identity {rec.identity_id} "
                    "has no gallery row"
                )

    def split_records(self, split: str) -> tuple[ImageRecord, ...]:
        if split not in SPLITS:
            raise BadSplitValue(f"split {split!r} not in {SPLITS}")
        return tuple(r for r in self.records if r.split == split)

    def split_stats(self) -> dict[str, tuple[int, int]]:
        """Per-split (number of identities, number of images)."""
        out = {}
        for split in SPLITS:
            recs = self.split_records(split)
            out[split] = (len({r.identity_id for r in recs}), len(recs))
        return out

    def check_embeddings(self, store: "EmbeddingStore") -> None:
        """Raise OutOfRangeIndex if any record points outside `store`."""
        for rec in self.records:
            if rec.embedding_idx >= store.rows:
                raise OutOfRangeIndex(
                    f"row {rec.image_id!r}: embedding_idx {rec.embedding_idx} "
                    f">= store rows {store.rows}"
                )


@dataclass(frozen=True, eq=False)
class EmbeddingStore:
    """Dense matrix of appearance feature vectors, one float32 row per image.

    The underlying array is made read-only; metric computation downstream
    always promotes to float64.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float32)
        if arr.ndim != 2:
            raise EmptyStore(f"expected a 2-D matrix, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise EmptyStore(f"store must have >= 1 row and column, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise NonFiniteValue("embedding store contains NaN or infinite values")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def take(self, indices: Sequence[int]) -> np.ndarray:
        """Rows `indices` as a float64 matrix (bounds-checked)."""
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.rows):
            raise OutOfRangeIndex(
                f"embedding index out of range for store with {self.rows} rows"
            )
        return self.data[idx].astype(np.float64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingStore):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(
            np.array_equal(self.data, other.data)
        )


def _check_bbox(bbox: Sequence[float], context: str) -> Bbox:
    x, y, w, h = (float(v) for v in bbox)
    if w <= 0 or h <= 0:
        raise NegativeDimension(f"{context}: bbox w and h must be > 0, got {bbox}")
    return (x, y, w, h)


@dataclass(frozen=True)
class DetectionRecord:
    """One detector output: frame, box, confidence and its embedding row."""

    frame_idx: int
    bbox: Bbox
    det_score: float
    embedding_idx: int

    def __post_init__(self):
        if self.frame_idx < 0:
            raise NegativeDimension(f"frame_idx must be >= 0, got {self.frame_idx}")
        object.__setattr__(self, "bbox", _check_bbox(self.bbox, "detection"))
        if not 0.0 <= self.det_score <= 1.0:
            raise NegativeDimension(
                f"det_score must be in [0, 1], got {self.det_score}"
            )
        if self.embedding_idx < 0:
            raise OutOfRangeIndex(
                f"embedding_idx must be >= 0, got {self.embedding_idx}"
            )


@dataclass(frozen=True)
class DetectionTrack:
    """Per-video pedestrian detection stream, sorted by frame.

    Detection order within a frame is preserved from the input.
    """

    video_id: str
    camera_id: int
    frames: tuple[DetectionRecord, ...]

    def __post_init__(self):
        ordered = tuple(
            sorted(self.frames, key=lambda d: d.frame_idx)  # stable sort
        )
        object.__setattr__(self, "frames", ordered)

    @property
    def n_frames(self) -> int:
        """1 + highest frame index carrying a detection (0 if empty)."""
        return max((d.frame_idx for d in self.frames), default=-1) + 1


@dataclass(frozen=True)
class GroundTruthEntry:
    frame_idx: int
    identity_id: int
    bbox: Bbox

    def __post_init__(self):
        if self.frame_idx < 0:
            raise NegativeDimension(f"frame_idx must be >= 0, got {self.frame_idx}")
        if self.identity_id < 0:
            raise NegativeLabel(f"identity_id must be >= 0, got {self.identity_id}")
        object.__setattr__(self, "bbox", _check_bbox(self.bbox, "ground truth"))


@dataclass(frozen=True)
class VideoGroundTruth:
    """Who is where in one video: annotated identity boxes per frame."""

    video_id: str
    entries: tuple[GroundTruthEntry, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.entries, key=lambda e: e.frame_idx))
        object.__setattr__(self, "entries", ordered)

    @property
    def n_frames(self) -> int:
        return max((e.frame_idx for e in self.entries), default=-1) + 1

    def identity_boxes(self, identity_id: int) -> dict[int, list[Bbox]]:
        """Frame index -> GT boxes of `identity_id` in that frame."""
        out: dict[int, list[Bbox]] = {}
        for e in self.entries:
            if e.identity_id == identity_id:
                out.setdefault(e.frame_idx, []).append(e.bbox)
        return out


@dataclass(frozen=True, eq=False)
class QuerySpec:
    """One search target: its identity label and reference feature vector."""

    query_id: str
    identity_id: int
    embedding: np.ndarray

    def __post_init__(self):
        if self.identity_id < 0:
            raise NegativeLabel(
                f"query {self.query_id!r}: identity_id must be >= 0"
            )
        vec = np.asarray(self.embedding, dtype=np.float64)
        if vec.ndim != 1 or vec.size == 0:
            raise DimensionMismatch(
                f"query {self.query_id!r}: embedding must be a non-empty vector"
            )
        if not np.isfinite(vec).all():
            raise NonFiniteValue(
                f"query {self.query_id!r}: embedding contains non-finite values"
            )
        vec.setflags(write=False)
        object.__setattr__(self, "embedding", vec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuerySpec):
            return NotImplemented
        return (
            self.query_id == other.query_id
            and self.identity_id == other.identity_id
            and bool(np.array_equal(self.embedding, other.embedding))
        )

"""Deterministic synthetic data generators.

Two families: retrieval datasets (manifest + embedding store with planted
identity clusters) and live-alert scenarios (detection tracks, ground
truth, and query vectors with planted appearances). Both are seeded and
reproducible, and small enough to evaluate in well under a second, which
makes them the backbone of the test suite and the demo scripts.

Identity prototypes are one-hot vectors. Under the cosine similarity map
(1 + cos) / 2, a noiseless detection of the right identity scores exactly
1.0 against its query and 0.5 against every other, so threshold behavior
is fully predictable; small `noise` perturbs scores without reordering
them until it grows past roughly 0.3.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .types import (
    Bbox,
    DatasetManifest,
    DetectionRecord,
    DetectionTrack,
    EmbeddingStore,
    GroundTruthEntry,
    ImageRecord,
    QuerySpec,
    VideoGroundTruth,
)

#: detection confidence given to plantings that should survive filtering
_GOOD_SCORE = 0.9
#: confidence given to deliberately missed plantings (below the 0.5 filter)
_WEAK_SCORE = 0.3
_DISTRACTOR_SCORE = 0.85


def _prototype(identity: int, dim: int) -> np.ndarray:
    vec = np.zeros(dim, dtype=np.float64)
    vec[identity] = 1.0
    return vec


def _slot_box(identity: int) -> Bbox:
    """Disjoint per-identity box so boxes never overlap across identities."""
    return (50.0 * identity, 10.0, 30.0, 60.0)


# --------------------------------------------------------------------------
# retrieval datasets
# --------------------------------------------------------------------------

def make_retrieval_dataset(
    n_identities: int = 20,
    gallery_per_id: int = 3,
    train_per_id: int = 2,
    n_cameras: int = 3,
    noise: float = 0.05,
    seed: int = 0,
    dataset_name: str = "synthetic",
) -> tuple[DatasetManifest, EmbeddingStore]:
    """Clustered manifest + store: one query, `gallery_per_id` gallery and
    `train_per_id` train images per identity.

    Cameras cycle through image slots, so the query (camera 0) always has
    cross-camera gallery matches when n_cameras >= 2. Embeddings are the
    identity prototype plus isotropic gaussian noise; at the default noise
    level nearest-neighbor retrieval is perfect by construction.
    """
    if n_identities < 1 or gallery_per_id < 1:
        raise ValidationError("need at least one identity and one gallery image")
    if n_cameras < 2:
        raise ValidationError("need n_cameras >= 2 for cross-camera evaluation")
    rng = np.random.default_rng(seed)
    dim = n_identities
    records = []
    vectors = []

    def _add(identity: int, slot: int, split: str) -> None:
        row = len(vectors)
        records.append(ImageRecord(
            image_id=f"{dataset_name}_{identity:04d}_{slot:02d}.jpg",
            identity_id=identity,
            camera_id=slot % n_cameras,
            split=split,
            embedding_idx=row,
        ))
        vectors.append(_prototype(identity, dim) + noise * rng.standard_normal(dim))

    for identity in range(n_identities):
        slot = 0
        _add(identity, slot, "query")
        for _ in range(gallery_per_id):
            slot += 1
            _add(identity, slot, "gallery")
        for _ in range(train_per_id):
            slot += 1
            _add(identity, slot, "train")

    store = EmbeddingStore(np.asarray(vectors, dtype=np.float32))
    return DatasetManifest(dataset_name=dataset_name, records=tuple(records)), store


def make_train_only_manifest(
    n_identities: int,
    images_per_id: int,
    dataset_name: str,
    n_cameras: int = 2,
) -> DatasetManifest:
    """Train-split-only manifest for exercising the dataset combiner."""
    records = [
        ImageRecord(
            image_id=f"{dataset_name}_{identity:04d}_{j:02d}.jpg",
            identity_id=identity,
            camera_id=j % n_cameras,
            split="train",
            embedding_idx=identity * images_per_id + j,
        )
        for identity in range(n_identities)
        for j in range(images_per_id)
    ]
    return DatasetManifest(dataset_name=dataset_name, records=tuple(records))


# --------------------------------------------------------------------------
# live-alert scenarios
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LiveScenario:
    """Planted live-alert inputs plus the bookkeeping tests need.

    `planted` maps (video_id, window_index, query_identity) to True when a
    findable appearance was planted there; `missed` holds (video_id,
    window_index, query_identity) keys whose only appearances were given
    sub-threshold detector confidence, so the query is present in ground
    truth but cannot be found after score filtering.
    """

    tracks: tuple[DetectionTrack, ...]
    gts: tuple[VideoGroundTruth, ...]
    queries: tuple[QuerySpec, ...]
    store: EmbeddingStore
    tau: int
    planted: frozenset[tuple[str, int, int]]
    missed: frozenset[tuple[str, int, int]]

    @property
    def sequences(self) -> list[tuple[DetectionTrack, VideoGroundTruth]]:
        return list(zip(self.tracks, self.gts))


def make_live_scenario(
    n_videos: int = 2,
    n_queries: int = 3,
    n_distractors: int = 4,
    windows_per_video: int = 4,
    tau: int = 50,
    presence_rate: float = 0.6,
    miss_rate: float = 0.0,
    noise: float = 0.0,
    seed: int = 7,
) -> LiveScenario:
    """Generate videos with planted query appearances and distractors.

    Every query is guaranteed at least one findable appearance. Distractor
    detections carry orthogonal prototypes, so with zero noise they score
    exactly 0.5 against every query: any threshold above 0.5 admits only
    true appearances, and 1.0 F-scores at such thresholds are expected
    when miss_rate is 0.
    """
    if n_videos < 1 or n_queries < 1 or windows_per_video < 1:
        raise ValidationError("scenario needs >= 1 video, query, and window")
    if n_distractors < 1:
        raise ValidationError(
            "need n_distractors >= 1; the span-pinning sentinel detection "
            "must carry a non-query identity"
        )
    if not 0.0 <= presence_rate <= 1.0 or not 0.0 <= miss_rate < 1.0:
        raise ValidationError("presence_rate in [0,1] and miss_rate in [0,1) required")
    rng = random.Random(seed)
    np_rng = np.random.default_rng(seed)
    dim = n_queries + n_distractors

    vectors: list[np.ndarray] = []

    def _embed(identity: int) -> int:
        vectors.append(
            _prototype(identity, dim) + noise * np_rng.standard_normal(dim)
        )
        return len(vectors) - 1

    forced = {
        (q % n_videos, q % windows_per_video, q) for q in range(n_queries)
    }

    tracks = []
    gts = []
    planted: set[tuple[str, int, int]] = set()
    missed: set[tuple[str, int, int]] = set()
    for v in range(n_videos):
        video_id = f"video{v:02d}"
        detections: list[DetectionRecord] = []
        entries: list[GroundTruthEntry] = []
        for w in range(windows_per_video):
            start = w * tau
            for q in range(n_queries):
                force = (v, w, q) in forced
                if not force and rng.random() >= presence_rate:
                    continue
                frame = start + rng.randrange(tau)
                box = _slot_box(q)
                entries.append(GroundTruthEntry(frame, q, box))
                weak = not force and rng.random() < miss_rate
                detections.append(DetectionRecord(
                    frame_idx=frame,
                    bbox=box,
                    det_score=_WEAK_SCORE if weak else _GOOD_SCORE,
                    embedding_idx=_embed(q),
                ))
                (missed if weak else planted).add((video_id, w, q))
            for d in range(n_distractors):
                if rng.random() >= 0.5:
                    continue
                identity = n_queries + d
                frame = start + rng.randrange(tau)
                box = _slot_box(identity)
                entries.append(GroundTruthEntry(frame, identity, box))
                detections.append(DetectionRecord(
                    frame_idx=frame,
                    bbox=box,
                    det_score=_DISTRACTOR_SCORE,
                    embedding_idx=_embed(identity),
                ))
        # pin the track span to the full clip length with one last-frame
        # distractor, so window segmentation is identical across videos
        identity = n_queries + (v % n_distractors)
        last = windows_per_video * tau - 1
        box = _slot_box(identity)
        entries.append(GroundTruthEntry(last, identity, box))
        detections.append(DetectionRecord(
            frame_idx=last,
            bbox=box,
            det_score=_DISTRACTOR_SCORE,
            embedding_idx=_embed(identity),
        ))
        tracks.append(DetectionTrack(
            video_id=video_id, camera_id=v, frames=tuple(detections)
        ))
        gts.append(VideoGroundTruth(video_id=video_id, entries=tuple(entries)))

    queries = tuple(
        QuerySpec(
            query_id=f"q{q:02d}",
            identity_id=q,
            embedding=_prototype(q, dim),
        )
        for q in range(n_queries)
    )
    store = EmbeddingStore(np.asarray(vectors, dtype=np.float32))
    return LiveScenario(
        tracks=tuple(tracks),
        gts=tuple(gts),
        queries=queries,
        store=store,
        tau=tau,
        planted=frozenset(planted),
        missed=frozenset(missed),
    )

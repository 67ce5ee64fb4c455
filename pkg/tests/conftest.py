"""Shared fixtures: tiny hand-checkable datasets and randomized generators."""

from __future__ import annotations

import numpy as np
import pytest

from reidbench.types import (
    DatasetManifest,
    EmbeddingStore,
    ImageRecord,
)


def make_instance(rng: np.random.Generator, n_identities=None, dim=None,
                  n_cameras=None):
    """One randomized small retrieval instance (manifest + store).

    Gallery/train counts per identity vary, every query identity keeps at
    least one cross-camera gallery image, and embeddings are dense gaussian
    so rankings are almost surely tie-free.
    """
    n_identities = n_identities or int(rng.integers(2, 7))
    dim = dim or int(rng.integers(3, 9))
    n_cameras = n_cameras or int(rng.integers(2, 5))
    records = []
    vectors = []

    def add(identity, camera, split):
        row = len(vectors)
        records.append(ImageRecord(
            image_id=f"im{row:04d}.jpg",
            identity_id=identity,
            camera_id=camera,
            split=split,
            embedding_idx=row,
        ))
        vectors.append(rng.standard_normal(dim))

    for identity in range(n_identities):
        q_cam = int(rng.integers(0, n_cameras))
        add(identity, q_cam, "query")
        # one guaranteed cross-camera gallery match
        add(identity, (q_cam + 1) % n_cameras, "gallery")
        for _ in range(int(rng.integers(0, 4))):
            add(identity, int(rng.integers(0, n_cameras)), "gallery")
        for _ in range(int(rng.integers(0, 3))):
            add(identity, int(rng.integers(0, n_cameras)), "train")

    store = EmbeddingStore(np.asarray(vectors, dtype=np.float32))
    manifest = DatasetManifest(dataset_name="random", records=tuple(records))
    return manifest, store


@pytest.fixture
def tiny_manifest_store():
    """Two identities, one camera pair, scores fully hand-checkable.

    Embeddings are 2-D unit-ish vectors; with the cosine map the ranking
    for each query is known by construction.
    """
    records = (
        ImageRecord("q0.jpg", 0, 0, "query", 0),
        ImageRecord("q1.jpg", 1, 0, "query", 1),
        ImageRecord("g0.jpg", 0, 1, "gallery", 2),
        ImageRecord("g1.jpg", 1, 1, "gallery", 3),
        ImageRecord("g2.jpg", 0, 1, "gallery", 4),
        ImageRecord("t0.jpg", 0, 0, "train", 5),
    )
    store = EmbeddingStore(np.asarray([
        [1.0, 0.0],     # q0
        [0.0, 1.0],     # q1
        [1.0, 0.1],     # g0: close to q0
        [0.1, 1.0],     # g1: close to q1
        [0.9, 0.5],     # g2: same identity as q0, further away
        [0.5, 0.5],     # t0
    ], dtype=np.float32))
    manifest = DatasetManifest(dataset_name="tiny", records=records)
    return manifest, store

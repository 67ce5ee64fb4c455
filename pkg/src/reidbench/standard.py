"""Single- and cross-dataset retrieval metrics: rank-n (CMC), mAP, mINP.

Conventions:
  * similarity scores live in [0, 1] (higher = more similar) so the same
    scores feed the live alert-threshold sweep;
  * gallery entries sharing both identity and camera with the query are
    excluded before ranking (cross-camera evaluation);
  * ties rank by ascending gallery index, which makes every ranking
    deterministic without a seed.

All arithmetic is float64 regardless of the float32 interchange format.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyGalleryAfterFilter,
    EmptySplit,
    NoMatchInGallery,
    ZeroVector,
)
from .types import DatasetManifest, EmbeddingStore, ImageRecord

METRICS = ("cosine", "euclidean")


def distance_matrix(
    queries: np.ndarray, gallery: np.ndarray, metric: str = "cosine"
) -> np.ndarray:
    """Similarity matrix in [0, 1], one row per query, one column per gallery row.

    cosine:    (1 + cos(u, v)) / 2 on L2-normalized rows
    euclidean: 1 / (1 + ||u - v||) on raw rows
    """
    q = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    g = np.atleast_2d(np.asarray(gallery, dtype=np.float64))
    if q.shape[0] < 1 or g.shape[0] < 1:
        raise DimensionMismatch("need at least one query and one gallery row")
    if q.shape[1] != g.shape[1]:
        raise DimensionMismatch(
            f"query dim {q.shape[1]} != gallery dim {g.shape[1]}"
        )
    if metric == "cosine":
        qn = np.linalg.norm(q, axis=1)
        gn = np.linalg.norm(g, axis=1)
        if np.any(qn == 0.0) or np.any(gn == 0.0):
            raise ZeroVector("cosine similarity undefined for zero vectors")
        cos = (q / qn[:, None]) @ (g / gn[:, None]).T
        return np.clip((1.0 + cos) / 2.0, 0.0, 1.0)
    if metric == "euclidean":
        diff = q[:, None, :] - g[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        return 1.0 / (1.0 + dist)
    raise ValueError(f"unknown metric {metric!r}, expected one of {METRICS}")


@dataclass(frozen=True)
class RankingResult:
    """Gallery ranking for one query after cross-camera filtering.

    `gallery_indices` are positions into the original gallery list, best
    first; `match_mask` marks same-identity entries in that order.
    """

    query_id: str
    gallery_indices: tuple[int, ...]
    scores: tuple[float, ...]
    match_mask: tuple[bool, ...]

    def __post_init__(self):
        if not (len(self.gallery_indices) == len(self.scores) == len(self.match_mask)):
            raise DimensionMismatch("ranking fields must have equal length")
        if any(a < b for a, b in zip(self.scores, self.scores[1:])):
            raise ValueError("ranking scores must be non-increasing")

    @property
    def first_match_rank(self) -> int:
        """1-based rank of the best true match."""
        for pos, is_match in enumerate(self.match_mask, start=1):
            if is_match:
                return pos
        raise NoMatchInGallery(self.query_id)

    @property
    def match_ranks(self) -> tuple[int, ...]:
        """1-based ranks of all true matches, ascending."""
        return tuple(p for p, m in enumerate(self.match_mask, start=1) if m)


def rank_gallery(
    scores: np.ndarray | Sequence[float],
    query: ImageRecord,
    gallery: Sequence[ImageRecord],
) -> RankingResult:
    """Rank the gallery for one query row of the similarity matrix.

    Entries with the query's identity AND camera are dropped first; the
    rest sort by score descending, gallery index ascending on ties.
    """
    row = np.asarray(scores, dtype=np.float64)
    if row.ndim != 1 or row.size != len(gallery):
        raise DimensionMismatch(
            f"score row has {row.size} entries for {len(gallery)} gallery records"
        )
    keep = [
        i
        for i, g in enumerate(gallery)
        if not (g.identity_id == query.identity_id and g.camera_id == query.camera_id)
    ]
    if not keep:
        raise EmptyGalleryAfterFilter(
            f"query {query.image_id!r}: no gallery entries left after "
            "same-identity/same-camera filtering"
        )
    order = sorted(keep, key=lambda i: (-row[i], i))
    return RankingResult(
        query_id=query.image_id,
        gallery_indices=tuple(order),
        scores=tuple(float(row[i]) for i in order),
        match_mask=tuple(gallery[i].identity_id == query.identity_id for i in order),
    )


def cmc_at(rankings: Sequence[RankingResult], n: int) -> float:
    """Fraction of queries whose first true match ranks within the top n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not rankings:
        raise EmptySplit("no rankings given")
    hits = sum(1 for r in rankings if r.first_match_rank <= n)
    return hits / len(rankings)


def average_precision(ranking: RankingResult) -> float:
    """AP over all true matches: mean of k / r_k for the k-th match at rank r_k."""
    ranks = ranking.match_ranks
    if not ranks:
        raise NoMatchInGallery(ranking.query_id)
    return float(sum(k / r for k, r in enumerate(ranks, start=1)) / len(ranks))


def mean_ap(rankings: Sequence[RankingResult]) -> float:
    if not rankings:
        raise EmptySplit("no rankings given")
    return float(sum(average_precision(r) for r in rankings) / len(rankings))


def inp(ranking: RankingResult) -> float:
    """Inverse negative penalty: match count over the worst true-match rank."""
    ranks = ranking.match_ranks
    if not ranks:
        raise NoMatchInGallery(ranking.query_id)
    return len(ranks) / ranks[-1]


def minp(rankings: Sequence[RankingResult]) -> float:
    if not rankings:
        raise EmptySplit("no rankings given")
    return float(sum(inp(r) for r in rankings) / len(rankings))


@dataclass(frozen=True)
class StandardMetrics:
    """One evaluation cell: rank-n accuracies plus mAP and mINP."""

    rank_n: dict[int, float]
    map_retrieval: float
    minp: float

    def as_dict(self) -> dict[str, float]:
        out = {f"rank{n}": v for n, v in sorted(self.rank_n.items())}
        out["map"] = self.map_retrieval
        out["minp"] = self.minp
        return out


def evaluate_standard(
    manifest: DatasetManifest,
    embeddings: EmbeddingStore,
    metric: str = "cosine",
    ranks: Sequence[int] = (1, 5, 10),
) -> StandardMetrics:
    """Full query-vs-gallery evaluation of one manifest."""
    queries = manifest.split_records("query")
    gallery = manifest.split_records("gallery")
    if not queries or not gallery:
        raise EmptySplit(
            f"{manifest.dataset_name}: need non-empty query and gallery splits"
        )
    manifest.check_embeddings(embeddings)
    q_mat = embeddings.take([r.embedding_idx for r in queries])
    g_mat = embeddings.take([r.embedding_idx for r in gallery])
    scores = distance_matrix(q_mat, g_mat, metric=metric)
    rankings = [rank_gallery(scores[i], q, gallery) for i, q in enumerate(queries)]
    return StandardMetrics(
        rank_n={n: cmc_at(rankings, n) for n in ranks},
        map_retrieval=mean_ap(rankings),
        minp=minp(rankings),
    )

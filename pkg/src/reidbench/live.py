"""Open-set live Re-ID simulation over detection tracks.

Each video is cut into consecutive windows of `tau` frames. For every
(query, window) trial, detections scoring at least `beta` against the query
raise an alert and the top `eta` of them are the candidate set shown to the
agent; the agent's verification is mechanized as an IoU match between a
candidate box and a ground-truth box of the query identity in the same
frame.

Aggregated over trials:
  FR  = found / query-present windows   (0.0 when the query never appears)
  TVR = found / raised alerts           (1.0 when no alert is raised:
                                         a silent system never disturbs)
  F_gamma = (1 + g^2) * FR * TVR / (g^2 * FR + TVR)

Sweeping beta yields F*_gamma (grid maximum, smallest beta on ties) and the
area under the TVR-vs-FR curve (trapezoidal, anchored at FR=0/TVR=1, max
TVR per distinct FR, no monotone envelope).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import NoTrials, ValidationError
from .standard import distance_matrix
from .types import Bbox, DetectionRecord, DetectionTrack, QuerySpec, VideoGroundTruth


def _default_beta_grid() -> tuple[float, ...]:
    return tuple(k / 50 for k in range(51))  # 0.00, 0.02, ..., 1.00


@dataclass(frozen=True)
class LiveConfig:
    tau: int = 1000
    eta: int = 20
    beta_grid: tuple[float, ...] = field(default_factory=_default_beta_grid)
    iou_threshold: float = 0.5
    gamma_values: tuple[float, ...] = (0.5, 1.0, 2.0)

    def __post_init__(self):
        object.__setattr__(self, "beta_grid", tuple(self.beta_grid))
        object.__setattr__(self, "gamma_values", tuple(self.gamma_values))
        if self.tau < 1:
            raise ValidationError(f"tau must be >= 1, got {self.tau}")
        if self.eta < 1:
            raise ValidationError(f"eta must be >= 1, got {self.eta}")
        if not self.beta_grid:
            raise ValidationError("beta_grid must be non-empty")
        if any(not 0.0 <= b <= 1.0 for b in self.beta_grid):
            raise ValidationError("beta_grid values must lie in [0, 1]")
        if any(a >= b for a, b in zip(self.beta_grid, self.beta_grid[1:])):
            raise ValidationError("beta_grid must be strictly increasing")
        if not 0.0 < self.iou_threshold <= 1.0:
            raise ValidationError(
                f"iou_threshold must be in (0, 1], got {self.iou_threshold}"
            )
        if any(g <= 0 for g in self.gamma_values):
            raise ValidationError("gamma values must be > 0")


@dataclass(frozen=True)
class Window:
    """Half-open frame range [start, end) of one video."""

    index: int
    start: int
    end: int
    detections: tuple[DetectionRecord, ...]


ScoredDetection = tuple[DetectionRecord, float]


@dataclass(frozen=True)
class AlertOutcome:
    """Verdict for one (query, window) trial."""

    window_id: str
    alert_raised: bool
    candidates: tuple[ScoredDetection, ...]
    query_present_gt: bool = False
    query_found: bool = False

    def __post_init__(self):
        if self.query_found and not self.alert_raised:
            raise ValidationError("query_found requires alert_raised")


@dataclass(frozen=True)
class LivePoint:
    beta: float
    fr: float
    tvr: float
    f_gamma: dict[float, float]


@dataclass(frozen=True)
class FStar:
    value: float
    beta: float


@dataclass(frozen=True)
class SweepResult:
    points: tuple[LivePoint, ...]
    f_star: dict[float, FStar]
    live_map: float


def segment_windows(
    track: DetectionTrack, tau: int, n_frames: int | None = None
) -> list[Window]:
    """Cut [0, n_frames) into consecutive windows of `tau` frames.

    The final partial window is kept. `n_frames` defaults to the track's
    own span; pass the real clip length when ground truth extends past the
    last detection.
    """
    if tau < 1:
        raise ValidationError(f"tau must be >= 1, got {tau}")
    total = track.n_frames if n_frames is None else n_frames
    windows = []
    for index, start in enumerate(range(0, total, tau)):
        end = min(start + tau, total)
        dets = tuple(d for d in track.frames if start <= d.frame_idx < end)
        windows.append(Window(index=index, start=start, end=end, detections=dets))
    return windows


def score_window(
    detections: Sequence[DetectionRecord],
    query: QuerySpec,
    embeddings,
    metric: str = "cosine",
) -> list[ScoredDetection]:
    """Similarity of every detection in the window against the query."""
    if not detections:
        return []
    mat = embeddings.take([d.embedding_idx for d in detections])
    scores = distance_matrix(query.embedding[None, :], mat, metric=metric)[0]
    return [(d, float(s)) for d, s in zip(detections, scores)]


def raise_alert(
    scored: Sequence[ScoredDetection],
    beta: float,
    eta: int,
    window_id: str = "",
) -> AlertOutcome:
    """Alert iff any score >= beta; candidates are the top-eta such detections.

    Ties sort by frame index, then by detection order within the window.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValidationError(f"beta must be in [0, 1], got {beta}")
    order = sorted(
        range(len(scored)),
        key=lambda i: (-scored[i][1], scored[i][0].frame_idx, i),
    )
    candidates = tuple(scored[i] for i in order if scored[i][1] >= beta)[:eta]
    return AlertOutcome(
        window_id=window_id,
        alert_raised=len(candidates) > 0,
        candidates=candidates,
    )


def bbox_iou(a: Bbox, b: Bbox) -> float:
    """Intersection-over-union of two (x, y, w, h) boxes."""
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    ix = max(0.0, min(ax + aw, bx + bw) - max(ax, bx))
    iy = max(0.0, min(ay + ah, by + bh) - max(ay, by))
    inter = ix * iy
    union = aw * ah + bw * bh - inter
    return inter / union if union > 0 else 0.0


def match_candidates_gt(
    candidates: Sequence[ScoredDetection],
    gt: VideoGroundTruth,
    query_identity: int,
    iou_threshold: float = 0.5,
) -> bool:
    """True iff some candidate box overlaps a same-frame GT box of the
    query identity at IoU >= iou_threshold."""
    boxes = gt.identity_boxes(query_identity)
    return _match_indexed(candidates, boxes, iou_threshold)


def _match_indexed(
    candidates: Sequence[ScoredDetection],
    boxes_by_frame: dict[int, list[Bbox]],
    iou_threshold: float,
) -> bool:
    for det, _ in candidates:
        for gt_box in boxes_by_frame.get(det.frame_idx, ()):
            if bbox_iou(det.bbox, gt_box) >= iou_threshold:
                return True
    return False


@dataclass(frozen=True)
class _Trial:
    """Pre-scored (query, window) pair; beta-independent."""

    query_id: str
    video_id: str
    window_index: int
    present: bool
    scored: tuple[ScoredDetection, ...]
    gt_boxes: dict[int, list[Bbox]]


def _prepare_trials(
    sequences: Sequence[tuple[DetectionTrack, VideoGroundTruth]],
    queries: Sequence[QuerySpec],
    config: LiveConfig,
    embeddings,
    metric: str,
) -> list[_Trial]:
    if not sequences or not queries:
        raise NoTrials("need at least one (track, ground truth) pair and one query")
    trials = []
    for track, gt in sequences:
        if track.video_id != gt.video_id:
            raise ValidationError(
                f"track {track.video_id!r} paired with ground truth "
                f"{gt.video_id!r}"
            )
        n_frames = max(track.n_frames, gt.n_frames)
        windows = segment_windows(track, config.tau, n_frames=n_frames)
        for query in queries:
            gt_boxes = gt.identity_boxes(query.identity_id)
            scored_by_window = {
                w.index: tuple(score_window(w.detections, query, embeddings, metric))
                for w in windows
            }
            for w in windows:
                present = any(w.start <= f < w.end for f in gt_boxes)
                trials.append(
                    _Trial(
                        query_id=query.query_id,
                        video_id=track.video_id,
                        window_index=w.index,
                        present=present,
                        scored=scored_by_window[w.index],
                        gt_boxes={
                            f: b for f, b in gt_boxes.items() if w.start <= f < w.end
                        },
                    )
                )
    return trials


def _point_at(trials: Sequence[_Trial], beta: float, config: LiveConfig) -> LivePoint:
    n_present = 0
    n_alerts = 0
    n_found = 0
    for trial in trials:
        outcome = raise_alert(
            trial.scored, beta, config.eta,
            window_id=f"{trial.video_id}:{trial.window_index}",
        )
        found = outcome.alert_raised and _match_indexed(
            outcome.candidates, trial.gt_boxes, config.iou_threshold
        )
        n_present += trial.present
        n_alerts += outcome.alert_raised
        n_found += found
    if n_present == 0:
        warnings.warn(
            "query never present in any window; FR defined as 0.0", stacklevel=3
        )
        fr = 0.0
    else:
        fr = n_found / n_present
    tvr = 1.0 if n_alerts == 0 else n_found / n_alerts
    return LivePoint(
        beta=beta,
        fr=fr,
        tvr=tvr,
        f_gamma={g: f_gamma(fr, tvr, g) for g in config.gamma_values},
    )


def evaluate_at_beta(
    sequences: Sequence[tuple[DetectionTrack, VideoGroundTruth]],
    queries: Sequence[QuerySpec],
    config: LiveConfig,
    beta: float,
    embeddings,
    metric: str = "cosine",
) -> LivePoint:
    """FR/TVR/F_gamma over all (query, window) trials at one threshold."""
    trials = _prepare_trials(sequences, queries, config, embeddings, metric)
    return _point_at(trials, beta, config)


def f_gamma(fr: float, tvr: float, gamma: float) -> float:
    """Weighted harmonic combination of FR and TVR; 0 when both are 0."""
    if gamma <= 0:
        raise ValidationError(f"gamma must be > 0, got {gamma}")
    denom = gamma * gamma * fr + tvr
    if denom == 0.0:
        return 0.0
    return (1.0 + gamma * gamma) * fr * tvr / denom


def _auc_tvr_vs_fr(points: Sequence[LivePoint]) -> float:
    """Trapezoidal area under TVR vs FR with a (0, 1) anchor.

    Distinct FR values keep their maximum TVR; no monotone envelope is
    applied.
    """
    best_tvr: dict[float, float] = {0.0: 1.0}
    for p in points:
        if p.fr not in best_tvr or p.tvr > best_tvr[p.fr]:
            best_tvr[p.fr] = p.tvr
    frs = sorted(best_tvr)
    area = 0.0
    for lo, hi in zip(frs, frs[1:]):
        area += (hi - lo) * (best_tvr[lo] + best_tvr[hi]) / 2.0
    return area


def sweep(
    sequences: Sequence[tuple[DetectionTrack, VideoGroundTruth]],
    queries: Sequence[QuerySpec],
    config: LiveConfig,
    embeddings,
    metric: str = "cosine",
) -> SweepResult:
    """Evaluate the whole beta grid; summarize with F*_gamma and the AUC."""
    trials = _prepare_trials(sequences, queries, config, embeddings, metric)
    points = tuple(_point_at(trials, beta, config) for beta in config.beta_grid)
    f_star = {}
    for g in config.gamma_values:
        best = max(points, key=lambda p: p.f_gamma[g])  # first max = smallest beta
        f_star[g] = FStar(value=best.f_gamma[g], beta=best.beta)
    return SweepResult(points=points, f_star=f_star, live_map=_auc_tvr_vs_fr(points))

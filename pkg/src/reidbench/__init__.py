"""Person re-identification benchmarking: retrieval metrics, training-set
combination, live-alert threshold sweeps, and result statistics."""

from .errors import ReidBenchError, ValidationError
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
from .io import (
    filter_detections,
    load_detection_tracks,
    load_detections,
    load_embeddings,
    load_manifest,
    load_queries,
    load_video_gt,
    load_video_gts,
    save_detections,
    save_embeddings,
    save_manifest,
    save_queries,
    save_video_gt,
)
from .standard import (
    RankingResult,
    StandardMetrics,
    average_precision,
    cmc_at,
    distance_matrix,
    evaluate_standard,
    inp,
    mean_ap,
    minp,
    rank_gallery,
)
from .combine import CombinePlan, materialize_plan, plan_combined
from .live import (
    AlertOutcome,
    FStar,
    LiveConfig,
    LivePoint,
    SweepResult,
    bbox_iou,
    evaluate_at_beta,
    f_gamma,
    match_candidates_gt,
    raise_alert,
    score_window,
    segment_windows,
    sweep,
)
from .stats import (
    AggregateResult,
    PairedTestResult,
    ResultCell,
    SELECTORS,
    aggregate,
    export_curves,
    load_cells,
    paired_t_test,
    paired_values,
    render_table,
    save_cells,
)
from .synthetic import LiveScenario, make_live_scenario, make_retrieval_dataset

__version__ = "0.1.0"

__all__ = [
    "AggregateResult",
    "AlertOutcome",
    "Bbox",
    "CombinePlan",
    "DatasetManifest",
    "DetectionRecord",
    "DetectionTrack",
    "EmbeddingStore",
    "FStar",
    "GroundTruthEntry",
    "ImageRecord",
    "LiveConfig",
    "LivePoint",
    "LiveScenario",
    "PairedTestResult",
    "QuerySpec",
    "RankingResult",
    "ReidBenchError",
    "ResultCell",
    "SELECTORS",
    "StandardMetrics",
    "SweepResult",
    "ValidationError",
    "VideoGroundTruth",
    "aggregate",
    "average_precision",
    "bbox_iou",
    "cmc_at",
    "distance_matrix",
    "evaluate_at_beta",
    "evaluate_standard",
    "export_curves",
    "f_gamma",
    "filter_detections",
    "inp",
    "load_cells",
    "load_detection_tracks",
    "load_detections",
    "load_embeddings",
    "load_manifest",
    "load_queries",
    "load_video_gt",
    "load_video_gts",
    "make_live_scenario",
    "make_retrieval_dataset",
    "match_candidates_gt",
    "materialize_plan",
    "mean_ap",
    "minp",
    "paired_t_test",
    "paired_values",
    "plan_combined",
    "raise_alert",
    "rank_gallery",
    "render_table",
    "save_cells",
    "save_detections",
    "save_embeddings",
    "save_manifest",
    "save_queries",
    "save_video_gt",
    "score_window",
    "segment_windows",
    "sweep",
    "__version__",
]

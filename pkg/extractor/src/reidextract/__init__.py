"""Extractor adapter: raw images and video in, benchmark input files out.

Produces the three interchange artifacts the evaluation engine ingests:
binary embedding stores, manifest CSVs, and detections JSONL. Coupling to
the engine is purely at file-format level; this package never imports it.
"""

from .config import DEFAULT_INPUT_SIZE, ExtractorConfig
from .detect import DETECTORS, DetectReport, build_detector, detect_video
from .errors import (
    BadConfig,
    ExtractError,
    MalformedImageName,
    ModelLoadFailure,
    UndecodableVideo,
    UnreadableImage,
)
from .extract import (
    ExtractReport,
    extract_embeddings,
    parse_image_name,
    read_image,
    write_store,
)
from .features import EMBEDDERS, build_embedder

__version__ = "0.1.0"

__all__ = [
    "BadConfig",
    "DEFAULT_INPUT_SIZE",
    "DETECTORS",
    "DetectReport",
    "EMBEDDERS",
    "ExtractError",
    "ExtractReport",
    "ExtractorConfig",
    "MalformedImageName",
    "ModelLoadFailure",
    "UndecodableVideo",
    "UnreadableImage",
    "build_detector",
    "build_embedder",
    "detect_video",
    "extract_embeddings",
    "parse_image_name",
    "read_image",
    "write_store",
]

"""Run configuration shared by the embedding and detection pipelines."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadConfig

#: conventional person-crop shape, height x width
DEFAULT_INPUT_SIZE = (256, 128)


@dataclass(frozen=True)
class ExtractorConfig:
    """Knobs for feature extraction and detection.

    `model` names the embedder (see features.EMBEDDERS). `input_size` is
    (height, width) every crop is resized to before embedding. The
    `det_score_floor` is a raw floor applied when writing detections; it
    defaults to 0 so every detection passes through and downstream
    confidence filtering stays the consumer's job.
    """

    model: str = "hsv-hist"
    input_size: tuple[int, int] = DEFAULT_INPUT_SIZE
    batch_size: int = 32
    det_score_floor: float = 0.0

    def __post_init__(self) -> None:
        if len(self.input_size) != 2:
            raise BadConfig(f"input_size must be (height, width), got {self.input_size}")
        h, w = self.input_size
        if not (isinstance(h, int) and isinstance(w, int)) or h <= 0 or w <= 0:
            raise BadConfig(f"input_size must be positive integers, got {self.input_size}")
        if not isinstance(self.batch_size, int) or self.batch_size < 1:
            raise BadConfig(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0.0 <= self.det_score_floor <= 1.0:
            raise BadConfig(f"det_score_floor must be in [0, 1], got {self.det_score_floor}")

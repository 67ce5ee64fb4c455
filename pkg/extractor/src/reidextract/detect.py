"""Detect people in video and emit detections JSONL plus crop embeddings.

Detection lines follow the consumer's schema: one JSON object per
detection with video_id, camera_id, frame_idx, bbox [x, y, w, h],
det_score in [0, 1], and embedding_idx into the store written alongside.
Raw scores are passed through; confidence filtering stays downstream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from .config import ExtractorConfig
from .errors import ModelLoadFailure, UndecodableVideo
from .extract import write_store
from .features import build_embedder


class ContourDetector:
    """Blob detector for footage with figures brighter than the background.

    Thresholds with Otsu and takes external contours. Each box is scored
    by how much of it the segmented blob fills, so solid figures score
    near 1 regardless of their color. Near-uniform frames yield nothing,
    which keeps Otsu from splitting noise into phantom boxes.
    """

    name = "contour"

    def __init__(self, min_area: int = 64, min_contrast: float = 1.0) -> None:
        self.min_area = min_area
        self.min_contrast = min_contrast

    def detect(self, frame_bgr: np.ndarray) -> list[tuple[tuple[float, float, float, float], float]]:
        gray = cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2GRAY)
        if float(gray.std()) < self.min_contrast:
            return []
        _, mask = cv2.threshold(gray, 0, 255, cv2.THRESH_BINARY + cv2.THRESH_OTSU)
        contours, _ = cv2.findContours(mask, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE)
        out = []
        for contour in contours:
            x, y, w, h = cv2.boundingRect(contour)
            if w * h < self.min_area:
                continue
            coverage = float(mask[y:y + h, x:x + w].mean()) / 255.0
            out.append(((float(x), float(y), float(w), float(h)),
                        min(max(coverage, 0.0), 1.0)))
        # left-to-right, top-to-bottom for a deterministic row order
        out.sort(key=lambda item: (item[0][0], item[0][1]))
        return out


class HogPedestrianDetector:
    """OpenCV's bundled HOG + linear SVM people detector.

    SVM margins are squashed through a logistic so scores land in (0, 1).
    Not every OpenCV build ships the HOG API (5.x headless dropped it);
    construction then fails as ModelLoadFailure like any other missing
    backend.
    """

    name = "hog"

    def __init__(self) -> None:
        try:
            self._hog = cv2.HOGDescriptor()
            self._hog.setSVMDetector(
                cv2.HOGDescriptor_getDefaultPeopleDetector()
            )
        except AttributeError as exc:
            raise ModelLoadFailure(
                f"this OpenCV build has no HOG people detector: {exc}"
            ) from exc

    def detect(self, frame_bgr: np.ndarray) -> list[tuple[tuple[float, float, float, float], float]]:
        rects, weights = self._hog.detectMultiScale(frame_bgr, winStride=(8, 8))
        out = []
        for rect, weight in zip(rects, np.ravel(weights)):
            x, y, w, h = (float(v) for v in rect)
            score = 1.0 / (1.0 + math.exp(-float(weight)))
            out.append(((x, y, w, h), score))
        out.sort(key=lambda item: (item[0][0], item[0][1]))
        return out


DETECTORS = {
    ContourDetector.name: ContourDetector,
    HogPedestrianDetector.name: HogPedestrianDetector,
}


def build_detector(name: str):
    try:
        factory = DETECTORS[name]
    except KeyError:
        raise ModelLoadFailure(
            f"unknown detector {name!r}; known: {sorted(DETECTORS)}"
        ) from None
    return factory()


@dataclass(frozen=True)
class DetectReport:
    video_id: str
    frame_count: int
    n_detections: int
    jsonl_path: str
    emb_path: str | None


def _clamp_box(box, width: int, height: int):
    x, y, w, h = box
    x0 = min(max(int(round(x)), 0), width)
    y0 = min(max(int(round(y)), 0), height)
    x1 = min(max(int(round(x + w)), 0), width)
    y1 = min(max(int(round(y + h)), 0), height)
    return x0, y0, x1, y1


def detect_video(
    video_path: str | Path,
    config: ExtractorConfig,
    out_jsonl: str | Path,
    emb_path: str | Path | None = None,
    detector: str = "contour",
    video_id: str | None = None,
    camera_id: int = 0,
) -> DetectReport:
    """Run the detector over every frame and write JSONL + embeddings.

    frame_idx is 0-based. The embedding store is only written when at
    least one detection survives (the store format has no empty encoding),
    so a blank video yields an empty JSONL and emb_path None in the report.
    """
    video_path = Path(video_path)
    if video_id is None:
        video_id = video_path.stem
    if emb_path is None:
        emb_path = Path(out_jsonl).with_suffix(".emb")
    det = build_detector(detector)
    embedder = build_embedder(config)

    cap = cv2.VideoCapture(str(video_path))
    if not cap.isOpened():
        raise UndecodableVideo(f"cannot open video: {video_path}")
    crops: list[np.ndarray] = []
    lines: list[dict] = []
    frame_count = 0
    while True:
        ok, frame = cap.read()
        if not ok:
            break
        height, width = frame.shape[:2]
        for box, score in det.detect(frame):
            if score < config.det_score_floor:
                continue
            x0, y0, x1, y1 = _clamp_box(box, width, height)
            if x1 <= x0 or y1 <= y0:
                continue
            crops.append(frame[y0:y1, x0:x1])
            lines.append({
                "video_id": video_id,
                "camera_id": camera_id,
                "frame_idx": frame_count,
                "bbox": [float(v) for v in box],
                "det_score": score,
                "embedding_idx": len(lines),
            })
        frame_count += 1
    cap.release()
    if frame_count == 0:
        raise UndecodableVideo(f"no frames decoded from {video_path}")

    with open(out_jsonl, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(json.dumps(line) + "\n")
    written_emb = None
    if crops:
        blocks = [
            embedder.embed(crops[i:i + config.batch_size])
            for i in range(0, len(crops), config.batch_size)
        ]
        write_store(np.concatenate(blocks, axis=0), emb_path)
        written_emb = str(emb_path)
    return DetectReport(
        video_id=video_id,
        frame_count=frame_count,
        n_detections=len(lines),
        jsonl_path=str(out_jsonl),
        emb_path=written_emb,
    )

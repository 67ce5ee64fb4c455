"""Turn image files into an embedding store plus a manifest CSV.

Output formats are written here from scratch (no dependency on the
consumer package): the binary store is magic `REID`, little-endian u32
version/rows/dim, then float32 row-major data; the manifest is a CSV with
columns image_id, identity_id, camera_id, split, embedding_idx.
"""

from __future__ import annotations

import csv
import re
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import cv2
import numpy as np

from .config import ExtractorConfig
from .errors import MalformedImageName, UnreadableImage
from .features import build_embedder

STORE_MAGIC = b"REID"
STORE_VERSION = 1
SPLITS = ("train", "query", "gallery")
MANIFEST_HEADER = ("image_id", "identity_id", "camera_id", "split", "embedding_idx")

#: image names must lead with `<identity>_c<camera>`, Market style
_NAME_RE = re.compile(r"^(?P<identity>\d+)_c(?P<camera>\d+)")


def parse_image_name(path: str | Path) -> tuple[int, int]:
    """Extract (identity_id, camera_id) from a crop file name."""
    stem = Path(path).stem
    m = _NAME_RE.match(stem)
    if m is None:
        raise MalformedImageName(
            f"{path}: expected a name starting with <identity>_c<camera>"
        )
    return int(m.group("identity")), int(m.group("camera"))


def read_image(path: str | Path) -> np.ndarray:
    """Decode an image as BGR uint8 or raise UnreadableImage."""
    image = cv2.imread(str(path), cv2.IMREAD_COLOR)
    if image is None:
        raise UnreadableImage(path)
    return image


def write_store(rows: np.ndarray, path: str | Path) -> None:
    """Serialize a float32 matrix in the binary embedding-store layout."""
    rows = np.ascontiguousarray(rows, dtype="<f4")
    if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
        raise ValueError(f"need a non-empty 2-D matrix, got shape {rows.shape}")
    with open(path, "wb") as fh:
        fh.write(STORE_MAGIC)
        fh.write(struct.pack("<III", STORE_VERSION, rows.shape[0], rows.shape[1]))
        fh.write(rows.tobytes(order="C"))


@dataclass(frozen=True)
class ExtractReport:
    n_images: int
    dim: int
    emb_path: str
    manifest_path: str


def extract_embeddings(
    image_paths: Sequence[str | Path],
    config: ExtractorConfig,
    emb_path: str | Path,
    manifest_path: str | Path,
    split: str = "gallery",
) -> ExtractReport:
    """Embed images in order and write the store plus manifest rows.

    Row i of the store corresponds to manifest line i (embedding_idx == i).
    Identity and camera come from the file names; `split` applies to every
    row. Embedding is deterministic, so identical inputs give identical
    rows.
    """
    if split not in SPLITS:
        raise ValueError(f"split must be one of {SPLITS}, got {split!r}")
    if not image_paths:
        raise ValueError("no images given")
    labels = [parse_image_name(p) for p in image_paths]
    embedder = build_embedder(config)

    blocks = []
    for start in range(0, len(image_paths), config.batch_size):
        chunk = image_paths[start:start + config.batch_size]
        blocks.append(embedder.embed([read_image(p) for p in chunk]))
    matrix = np.concatenate(blocks, axis=0)

    write_store(matrix, emb_path)
    with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_HEADER)
        for idx, (path, (identity, camera)) in enumerate(zip(image_paths, labels)):
            writer.writerow([Path(path).name, identity, camera, split, idx])
    return ExtractReport(
        n_images=len(image_paths),
        dim=int(matrix.shape[1]),
        emb_path=str(emb_path),
        manifest_path=str(manifest_path),
    )

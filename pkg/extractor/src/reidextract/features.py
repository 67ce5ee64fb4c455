"""Embedding backends, pluggable by identifier.

The default backend is a classical stripe color histogram: deterministic,
dependency-light, and good enough to separate differently dressed people.
A torchvision backend is registered as well; it needs downloadable
pretrained weights and raises ModelLoadFailure when they are unavailable.
"""

from __future__ import annotations

import cv2
import numpy as np

from .config import ExtractorConfig
from .errors import ModelLoadFailure

#: vertical bands a crop is split into before histogramming
N_STRIPES = 6
#: histogram bins per channel in HSV order
HSV_BINS = (8, 4, 4)
HSV_RANGES = (0.0, 180.0, 0.0, 256.0, 0.0, 256.0)


class StripeHsvEmbedder:
    """Joint HSV histograms over horizontal stripes, L2-normalized.

    Pedestrian crops are vertically structured (head, torso, legs), so
    per-stripe color statistics carry most of the appearance signal that
    survives camera changes. The output never collapses to the zero vector
    because every histogram sums to the stripe's pixel count.
    """

    name = "hsv-hist"

    def __init__(self, config: ExtractorConfig) -> None:
        self.input_size = config.input_size
        self.dim = N_STRIPES * int(np.prod(HSV_BINS))

    def embed_one(self, image_bgr: np.ndarray) -> np.ndarray:
        h, w = self.input_size
        resized = cv2.resize(image_bgr, (w, h), interpolation=cv2.INTER_AREA)
        hsv = cv2.cvtColor(resized, cv2.COLOR_BGR2HSV)
        bounds = np.linspace(0, h, N_STRIPES + 1).astype(int)
        parts = []
        for i in range(N_STRIPES):
            stripe = hsv[bounds[i]:bounds[i + 1]]
            hist = cv2.calcHist([stripe], [0, 1, 2], None, list(HSV_BINS),
                                list(HSV_RANGES))
            parts.append(hist.reshape(-1))
        vec = np.concatenate(parts).astype(np.float64)
        vec /= np.linalg.norm(vec)
        return vec.astype(np.float32)

    def embed(self, images_bgr: list[np.ndarray]) -> np.ndarray:
        if not images_bgr:
            return np.zeros((0, self.dim), dtype=np.float32)
        return np.stack([self.embed_one(img) for img in images_bgr])


class TorchvisionEmbedder:
    """ImageNet-pretrained CNN trunk with the classifier head removed.

    Only usable where torchvision can fetch its weights; any failure on
    import or weight load surfaces as ModelLoadFailure.
    """

    name = "resnet18"

    def __init__(self, config: ExtractorConfig) -> None:
        self.input_size = config.input_size
        try:
            import torch
            from torchvision.models import ResNet18_Weights, resnet18
        except Exception as exc:
            raise ModelLoadFailure(f"torchvision backend unavailable: {exc}") from exc
        try:
            model = resnet18(weights=ResNet18_Weights.IMAGENET1K_V1)
        except Exception as exc:
            raise ModelLoadFailure(
                f"could not load pretrained resnet18 weights: {exc}"
            ) from exc
        model.fc = torch.nn.Identity()
        model.eval()
        self._torch = torch
        self._model = model
        self.dim = 512

    def embed(self, images_bgr: list[np.ndarray]) -> np.ndarray:
        torch = self._torch
        if not images_bgr:
            return np.zeros((0, self.dim), dtype=np.float32)
        h, w = self.input_size
        mean = np.array([0.485, 0.456, 0.406], dtype=np.float32)
        std = np.array([0.229, 0.224, 0.225], dtype=np.float32)
        batch = []
        for img in images_bgr:
            rgb = cv2.cvtColor(cv2.resize(img, (w, h)), cv2.COLOR_BGR2RGB)
            arr = (rgb.astype(np.float32) / 255.0 - mean) / std
            batch.append(arr.transpose(2, 0, 1))
        with torch.no_grad():
            out = self._model(torch.from_numpy(np.stack(batch)))
        return out.numpy().astype(np.float32)


EMBEDDERS = {
    StripeHsvEmbedder.name: StripeHsvEmbedder,
    TorchvisionEmbedder.name: TorchvisionEmbedder,
}


def build_embedder(config: ExtractorConfig):
    """Resolve config.model against the registry."""
    try:
        factory = EMBEDDERS[config.model]
    except KeyError:
        raise ModelLoadFailure(
            f"unknown embedder {config.model!r}; "
            f"known: {sorted(EMBEDDERS)}"
        ) from None
    return factory(config)

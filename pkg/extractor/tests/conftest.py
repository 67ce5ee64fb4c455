"""Fixtures for the extractor adapter suite.

This directory is ignored wholesale when reidextract is not installed, so
the engine's own suite stays runnable without the adapter.
"""

from __future__ import annotations

import importlib.util

import pytest

if importlib.util.find_spec("reidextract") is None:
    collect_ignore_glob = ["*"]


@pytest.fixture
def still_corpus(tmp_path):
    """Ten stills: identities 0..4 under cameras 0 and 1, Market-style names."""
    import cv2

    from corpus import person_image

    image_dir = tmp_path / "stills"
    image_dir.mkdir()
    paths = []
    for identity in range(5):
        for camera in (0, 1):
            path = image_dir / f"{identity:04d}_c{camera}_00.png"
            assert cv2.imwrite(str(path), person_image(identity, camera))
            paths.append(path)
    return image_dir, sorted(paths)

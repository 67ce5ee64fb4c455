"""Error taxonomy for the extractor adapter.

Everything raised on bad input or a missing backend derives from
ExtractError so CLI code can map the whole family to one exit code.
"""

from __future__ import annotations


class ExtractError(Exception):
    """Base class for all extractor failures."""


class ModelLoadFailure(ExtractError):
    """An embedder or detector identifier could not be resolved or loaded."""


class UnreadableImage(ExtractError):
    """An image path could not be opened or decoded."""

    def __init__(self, path) -> None:
        super().__init__(f"cannot read image: {path}")
        self.path = str(path)


class UndecodableVideo(ExtractError):
    """A video path could not be opened or yielded no frames."""


class MalformedImageName(ExtractError):
    """An image file name does not carry identity and camera fields."""


class BadConfig(ExtractError):
    """An ExtractorConfig field violates its invariant."""

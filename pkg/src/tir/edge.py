"""Prompt edge detection.

A pixel is an edge pixel when the number k of its 8 neighbours whose absolute
intensity difference exceeds the threshold T satisfies 3 < k < 6, i.e.
k in {4, 5}. Pixels on the image border (any neighbour out of bounds) are
non-edge by definition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import GrayImage


@dataclass(frozen=True)
class EdgeConfig:
    """Detector settings. `threshold` is the intensity difference bound T."""

    threshold: int = 30

    def __post_init__(self):
        if not isinstance(self.threshold, int) or not 0 <= self.threshold <= 255:
            raise ValueError(f"threshold must be an integer in [0, 255], got {self.threshold!r}")


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Edge map; ``pixels`` is a read-only boolean array of shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.dtype != np.bool_:
            raise ValueError(f"expected a 2-D boolean grid, got {arr.dtype} shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image dimensions must be >= 1")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def prompt_edge(image: GrayImage, config: EdgeConfig = EdgeConfig()) -> BinaryImage:
    """Classify each pixel by its 8-neighbourhood difference count."""
    pix = image.pixels.astype(np.int16)
    h, w = pix.shape
    out = np.zeros((h, w), dtype=bool)
    if h >= 3 and w >= 3:
        center = pix[1 : h - 1, 1 : w - 1]
        k = np.zeros(center.shape, dtype=np.int16)
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                if dy == 0 and dx == 0:
                    continue
                neighbour = pix[1 + dy : h - 1 + dy, 1 + dx : w - 1 + dx]
                k += np.abs(center - neighbour) > config.threshold
        out[1 : h - 1, 1 : w - 1] = (k == 4) | (k == 5)
    return BinaryImage(out)

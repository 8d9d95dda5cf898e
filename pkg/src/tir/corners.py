"""Harris corner response, peak extraction and corner counting.

The response is R = det(M) - kappa * trace(M)^2 where M is the structure
tensor of Gaussian-weighted Sobel gradient products accumulated over a
square window. In the retrieval pipeline the metric runs on the edge map
(mapped to intensities {0, 255}), not on the raw grayscale image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .edge import BinaryImage, EdgeConfig, prompt_edge
from .imaging import GrayImage

SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T


@dataclass(frozen=True)
class CornerConfig:
    """Detector parameters.

    kappa: Harris sensitivity, dimensionless, in (0, 0.25).
    window_sigma: Gaussian weighting sigma of the accumulation window, pixels.
    window_radius: half-width of the accumulation window, pixels.
    peak_rel_threshold: keep peaks with response >= this fraction of the global max.
    nms_radius: Chebyshev radius of the non-maximum-suppression neighbourhood.
    """

    kappa: float = 0.04
    window_sigma: float = 1.5
    window_radius: int = 2
    peak_rel_threshold: float = 0.01
    nms_radius: int = 2

    def __post_init__(self):
        if not 0.0 < self.kappa < 0.25:
            raise ValueError(f"kappa must lie in (0, 0.25), got {self.kappa}")
        if not self.window_sigma > 0.0:
            raise ValueError(f"window_sigma must be positive, got {self.window_sigma}")
        if not (isinstance(self.window_radius, int) and self.window_radius >= 1):
            raise ValueError(f"window_radius must be an integer >= 1, got {self.window_radius!r}")
        if not 0.0 < self.peak_rel_threshold <= 1.0:
            raise ValueError(f"peak_rel_threshold must lie in (0, 1], got {self.peak_rel_threshold}")
        if not (isinstance(self.nms_radius, int) and self.nms_radius >= 1):
            raise ValueError(f"nms_radius must be an integer >= 1, got {self.nms_radius!r}")


@dataclass(frozen=True)
class CornerSet:
    """Detected corner coordinates as (x, y) pairs in row-major discovery order."""

    points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("corner points must be pairwise distinct")

    @property
    def count(self) -> int:
        return len(self.points)


def _correlate_replicate(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Cross-correlate with replicate (edge) padding; kernel must be odd-sized."""
    kh, kw = kernel.shape
    ry, rx = kh // 2, kw // 2
    padded = np.pad(values, ((ry, ry), (rx, rx)), mode="edge")
    h, w = values.shape
    out = np.zeros((h, w), dtype=np.float64)
    for dy in range(kh):
        for dx in range(kw):
            weight = kernel[dy, dx]
            if weight != 0.0:
                out += weight * padded[dy : dy + h, dx : dx + w]
    return out


def gaussian_kernel(radius: int, sigma: float) -> np.ndarray:
    """Normalized 2-D Gaussian kernel of size (2*radius+1)^2."""
    d = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-(d * d) / (2.0 * sigma * sigma))
    g /= g.sum()
    return np.outer(g, g)


def corner_metric(image: BinaryImage | GrayImage, config: CornerConfig = CornerConfig()) -> np.ndarray:
    """Per-pixel Harris response matrix with the same shape as the input.

    Binary inputs are treated as intensities {0, 255}. Gradients and the window
    accumulation both use replicate padding at the borders.
    """
    if isinstance(image, BinaryImage):
        values = image.pixels.astype(np.float64) * 255.0
    else:
        values = image.pixels.astype(np.float64)
    ix = _correlate_replicate(values, SOBEL_X)
    iy = _correlate_replicate(values, SOBEL_Y)
    window = gaussian_kernel(config.window_radius, config.window_sigma)
    a = _correlate_replicate(ix * ix, window)
    b = _correlate_replicate(iy * iy, window)
    c = _correlate_replicate(ix * iy, window)
    return (a * b - c * c) - config.kappa * (a + b) ** 2


def corner_peaks(metric: np.ndarray, config: CornerConfig = CornerConfig()) -> CornerSet:
    """Extract corner peaks from a response matrix.

    A pixel survives when its response is positive, reaches
    peak_rel_threshold * max(metric), and is the strict maximum of its
    Chebyshev nms_radius neighbourhood; exact ties are resolved in favour of
    the first pixel in row-major order.
    """
    m = np.asarray(metric, dtype=np.float64)
    global_max = float(m.max())
    if global_max <= 0.0:
        return CornerSet(())
    keep = (m > 0.0) & (m >= config.peak_rel_threshold * global_max)
    h, w = m.shape
    r = config.nms_radius
    padded = np.pad(m, r, mode="constant", constant_values=-np.inf)
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            if dy == 0 and dx == 0:
                continue
            neighbour = padded[r + dy : r + dy + h, r + dx : r + dx + w]
            if dy < 0 or (dy == 0 and dx < 0):
                keep &= neighbour < m  # earlier pixel wins ties
            else:
                keep &= neighbour <= m
    ys, xs = np.nonzero(keep)
    return CornerSet(tuple((int(x), int(y)) for x, y in zip(xs, ys)))


def corner_count(image: GrayImage, edge_cfg: EdgeConfig = EdgeConfig(), corner_cfg: CornerConfig = CornerConfig()) -> int:
    """Number of corner peaks on the Prompt edge map of `image`."""
    edges = prompt_edge(image, edge_cfg)
    return corner_peaks(corner_metric(edges, corner_cfg), corner_cfg).count

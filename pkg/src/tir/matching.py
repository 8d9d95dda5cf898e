"""Similarity measurement: Euclidean distance, the adaptive corner-count
window, corner-band candidate filtering and moment-based ranking.

The window around a query's corner count widens multiplicatively with the
count band: Threshold = base_threshold * multiplier^floor(count / band_width),
a step function that keeps the acceptance window proportional to the count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .moments import HuVector

if TYPE_CHECKING:  # pragma: no cover
    from .index import FeatureRecord

# Added inside the log before scaling; keeps zero invariants finite.
LOG_EPSILON = 1e-30


@dataclass(frozen=True)
class ThresholdConfig:
    """Adaptive window settings: band width R, base threshold T0, per-band growth."""

    band_width: int = 20
    base_threshold: float = 5.0
    multiplier: float = 1.5

    def __post_init__(self):
        if not (isinstance(self.band_width, int) and self.band_width >= 1):
            raise ValueError(f"band_width must be an integer >= 1, got {self.band_width!r}")
        if not self.base_threshold > 0.0:
            raise ValueError(f"base_threshold must be positive, got {self.base_threshold}")
        if not self.multiplier > 1.0:
            raise ValueError(f"multiplier must exceed 1, got {self.multiplier}")


@dataclass(frozen=True)
class ThresholdWindow:
    """Inclusive corner-count acceptance interval [min_t, max_t]."""

    min_t: float
    max_t: float

    def __post_init__(self):
        if self.min_t > self.max_t:
            raise ValueError(f"window is inverted: ({self.min_t}, {self.max_t})")

    def contains(self, count: int) -> bool:
        return self.min_t <= count <= self.max_t


@dataclass(frozen=True)
class RankedMatch:
    """One retrieval result: database record id, corner-count difference, moment distance."""

    record_id: int
    corner_difference: int
    moment_distance: float

    def __post_init__(self):
        if self.corner_difference < 0:
            raise ValueError("corner_difference must be >= 0")
        if not math.isfinite(self.moment_distance) or self.moment_distance < 0.0:
            raise ValueError("moment_distance must be finite and >= 0")


def euclidean_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """sqrt of the summed squared component differences."""
    if len(a) != len(b):
        raise ValueError(f"vector lengths differ: {len(a)} vs {len(b)}")
    if len(a) < 1:
        raise ValueError("vectors must have at least one component")
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def adaptive_threshold(count: int, config: ThresholdConfig = ThresholdConfig()) -> ThresholdWindow:
    """Window for a query corner count; min_t is clamped at 0."""
    if count < 0:
        raise ValueError(f"corner count must be >= 0, got {count}")
    band = count // config.band_width
    threshold = config.base_threshold * config.multiplier**band
    return ThresholdWindow(max(0.0, count - threshold), count + threshold)


def corner_filter(
    query_count: int,
    records: Iterable["FeatureRecord"],
    config: ThresholdConfig = ThresholdConfig(),
) -> list["FeatureRecord"]:
    """Records whose corner count falls in the query's window, input order preserved."""
    window = adaptive_threshold(query_count, config)
    return [record for record in records if window.contains(record.corner_count)]


def log_magnitude(values: Iterable[float]) -> tuple[float, ...]:
    """Per-component sign(v) * log10(|v| + eps).

    Hu invariants span many orders of magnitude (phi1 ~ 1e-1, phi7 ~ 1e-15 for
    typical shapes); without this rescaling a Euclidean distance is dominated
    by phi1 alone.
    """
    return tuple(math.copysign(1.0, v) * math.log10(abs(v) + LOG_EPSILON) if v != 0.0 else 0.0 for v in values)


def rank_by_moments(
    query_hu: HuVector,
    candidates: Sequence["FeatureRecord"],
    k: int,
    *,
    query_corner_count: int | None = None,
    log_scale: bool = True,
) -> list[RankedMatch]:
    """Top-k candidates by ascending moment distance; ties break on record_id.

    Distances are Euclidean over log-scaled invariants unless `log_scale` is
    off. `query_corner_count`, when given, fills each match's
    corner_difference for inspection.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    query_vec = log_magnitude(query_hu) if log_scale else tuple(query_hu)
    scored = []
    for record in candidates:
        rec_vec = log_magnitude(record.hu) if log_scale else tuple(record.hu)
        distance = euclidean_distance(query_vec, rec_vec)
        difference = abs(query_corner_count - record.corner_count) if query_corner_count is not None else 0
        scored.append(RankedMatch(record.record_id, difference, distance))
    scored.sort(key=lambda match: (match.moment_distance, match.record_id))
    return scored[:k]

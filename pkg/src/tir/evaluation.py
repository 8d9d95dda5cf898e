"""Precision/recall computation, rotated-dataset generation and the
three-mode evaluation harness (corner-only, moments-only, hybrid).

Per query, the relevant set is every database record sharing the query's
class label; under the default leave-in protocol that includes the query's
own record (matched by path). Results are reported per query plus an
unweighted arithmetic mean.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

from .imaging import GrayImage, RgbImage, load_image, rgb_to_gray, rotate, save_pgm
from .index import FeatureDatabase, Manifest, extract_features
from .matching import ThresholdConfig, corner_filter, rank_by_moments
from .parallel import map_ordered


class MetricUndefinedError(ValueError):
    """Precision with an empty retrieved list or recall with an empty relevant set."""


class EvalMode(enum.Enum):
    CORNER_ONLY = "corner"
    MOMENTS_ONLY = "moments"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class PRPoint:
    precision: float
    recall: float

    def __post_init__(self):
        for name, value in (("precision", self.precision), ("recall", self.recall)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class QueryResult:
    """Outcome of one evaluated query."""

    path: str
    class_label: str
    point: PRPoint


@dataclass(frozen=True)
class EvalReport:
    """All per-query points of one mode plus their arithmetic mean."""

    mode: EvalMode
    per_query: tuple[QueryResult, ...]
    mean: PRPoint


def precision(retrieved, relevant) -> float:
    """N_r / T_r: fraction of retrieved records that are relevant."""
    retrieved = list(retrieved)
    if not retrieved:
        raise MetricUndefinedError("precision is undefined for an empty retrieved list")
    hits = len(set(retrieved) & set(relevant))
    return hits / len(retrieved)


def recall(retrieved, relevant) -> float:
    """N_r / T_s: fraction of relevant records that were retrieved."""
    relevant = set(relevant)
    if not relevant:
        raise MetricUndefinedError("recall is undefined for an empty relevant set")
    hits = len(set(retrieved) & relevant)
    return hits / len(relevant)


def generate_rotated_dataset(base_manifest: Manifest, root, angles, out_dir) -> Manifest:
    """Rotate every base image by every angle and write binary P5 files.

    Output names are `<stem>_rot<angle-in-integer-degrees>.pgm`; class labels
    are inherited from the base entry. Returns the combined manifest with
    len(base) * len(angles) entries, base-major order.
    """
    angles = list(angles)
    if not angles:
        raise ValueError("angles must be non-empty")
    root = Path(root)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries: list[tuple[str, str]] = []
    seen: set[str] = set()
    for rel_path, label in base_manifest.entries:
        try:
            image = load_image(root / rel_path)
        except Exception as exc:
            raise RuntimeError(f"base image {rel_path!r}: {exc}") from exc
        if isinstance(image, RgbImage):
            image = rgb_to_gray(image)
        stem = Path(rel_path).stem
        for angle in angles:
            name = f"{stem}_rot{int(round(angle))}.pgm"
            if name in seen:
                raise RuntimeError(f"output name collision: {name!r}")
            seen.add(name)
            try:
                save_pgm(rotate(image, angle), out_dir / name)
            except OSError as exc:
                raise RuntimeError(f"writing {name!r}: {exc}") from exc
            entries.append((name, label))
    return Manifest(tuple(entries))


def _retrieved_ids(
    db: FeatureDatabase,
    query_count: int,
    query_hu,
    mode: EvalMode,
    threshold_cfg: ThresholdConfig,
    k: int,
    exclude_path: str | None,
) -> list[int]:
    records = [r for r in db.records if r.path != exclude_path] if exclude_path else list(db.records)
    if mode is EvalMode.CORNER_ONLY:
        passing = corner_filter(query_count, records, threshold_cfg)
        passing.sort(key=lambda r: (abs(r.corner_count - query_count), r.record_id))
        return [r.record_id for r in passing[:k]]
    if mode is EvalMode.MOMENTS_ONLY:
        return [m.record_id for m in rank_by_moments(query_hu, records, k)]
    candidates = corner_filter(query_count, records, threshold_cfg)
    return [m.record_id for m in rank_by_moments(query_hu, candidates, k)]


def evaluate(
    db: FeatureDatabase,
    query_manifest: Manifest,
    root,
    mode: EvalMode,
    threshold_cfg: ThresholdConfig = ThresholdConfig(),
    k: int = 6,
    *,
    exclude_self: bool = False,
    jobs: int = 1,
) -> EvalReport:
    """Evaluate every manifest query against the database in one mode.

    With `exclude_self` the query's own record (same path) is dropped from
    both the candidate pool and the relevant set. Any failing query aborts
    the evaluation with its path named.
    """
    root = Path(root)
    cfg = db.extraction_config
    by_class: dict[str, set[int]] = {}
    for record in db.records:
        by_class.setdefault(record.class_label, set()).add(record.record_id)
    by_path = {record.path: record.record_id for record in db.records}

    def one(entry: tuple[str, str]) -> QueryResult:
        rel_path, label = entry
        try:
            image = load_image(root / rel_path)
            if isinstance(image, RgbImage):
                image = rgb_to_gray(image)
            count, hu = extract_features(image, cfg.edge, cfg.corners)
            relevant = set(by_class.get(label, set()))
            exclude_path = rel_path if exclude_self else None
            if exclude_self and rel_path in by_path:
                relevant.discard(by_path[rel_path])
            retrieved = _retrieved_ids(db, count, hu, mode, threshold_cfg, k, exclude_path)
            point = PRPoint(precision(retrieved, relevant), recall(retrieved, relevant))
        except Exception as exc:
            raise RuntimeError(f"query {rel_path!r}: {exc}") from exc
        return QueryResult(rel_path, label, point)

    results = map_ordered(one, query_manifest.entries, jobs)
    mean_p = sum(r.point.precision for r in results) / len(results)
    mean_r = sum(r.point.recall for r in results) / len(results)
    return EvalReport(mode, tuple(results), PRPoint(mean_p, mean_r))


def emit_pr_csv(report: EvalReport, path) -> None:
    """Write per-query precision/recall rows plus a final MEAN row.

    Header `query_path,class,mode,precision,recall`; reals carry 6 decimal
    places; LF line endings. Reruns on identical results are byte-identical.
    """
    if not report.per_query:
        raise ValueError("cannot emit an empty evaluation report")
    lines = ["query_path,class,mode,precision,recall"]
    for result in report.per_query:
        lines.append(
            f"{result.path},{result.class_label},{report.mode.value},"
            f"{result.point.precision:.6f},{result.point.recall:.6f}"
        )
    lines.append(f"MEAN,,{report.mode.value},{report.mean.precision:.6f},{report.mean.recall:.6f}")
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))

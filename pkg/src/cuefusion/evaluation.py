"""CorLoc evaluation: per-image best-box Jaccard against ground truth,
per-category aggregation and table rendering.

An image counts as correctly localized when its best predicted box has
Jaccard strictly greater than 0.5 against some ground-truth box.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Mapping, Sequence

from .geometry import BoundingBox, jaccard
from .fusion import LocalizationResult

CORLOC_JACCARD_THRESHOLD = 0.5


@dataclass(frozen=True)
class GroundTruth:
    image_id: str
    category: str
    boxes: tuple[BoundingBox, ...]

    def __post_init__(self):
        if not self.boxes:
            raise ValueError(f"{self.image_id}: ground truth needs at least one box")


@dataclass(frozen=True)
class EvalRecord:
    image_id: str
    best_jaccard: float
    localized: bool


@dataclass(frozen=True)
class CategoryStats:
    corloc: float  # percentage, unrounded
    image_count: int


@dataclass(frozen=True)
class EvalReport:
    categories: dict[str, CategoryStats]
    average: float  # unweighted mean of category CorLoc values
    label: str = "Ours"


def round_half_up(value: float, decimals: int = 1) -> float:
    """Round with ties away from zero, matching conventional table precision."""
    q = Decimal(10) ** -decimals
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def score_image(result: LocalizationResult, truth: GroundTruth) -> EvalRecord:
    """Best Jaccard over all (prediction, truth) box pairs for one image."""
    best = 0.0
    for pred in result.boxes:
        for gt in truth.boxes:
            best = max(best, jaccard(pred, gt))
    return EvalRecord(
        image_id=truth.image_id,
        best_jaccard=best,
        localized=best > CORLOC_JACCARD_THRESHOLD,
    )


def category_average(values: Sequence[float]) -> float:
    """Unweighted mean of per-category CorLoc percentages."""
    if not values:
        raise ValueError("no categories to average")
    return sum(values) / len(values)


def corloc(
    records_by_category: Mapping[str, Sequence[EvalRecord]], label: str = "Ours"
) -> EvalReport:
    """Per-category CorLoc percentages plus their unweighted mean."""
    categories: dict[str, CategoryStats] = {}
    for category in sorted(records_by_category):
        records = records_by_category[category]
        if not records:
            raise ValueError(f"category {category!r} has no records")
        hit = sum(1 for r in records if r.localized)
        categories[category] = CategoryStats(
            corloc=100.0 * hit / len(records), image_count=len(records)
        )
    average = category_average([s.corloc for s in categories.values()])
    return EvalReport(categories=categories, average=average, label=label)


def _fmt(value: float) -> str:
    return f"{round_half_up(value, 1):.1f}"


def _is_grouped(report: EvalReport) -> bool:
    return bool(report.categories) and all(
        name.count("/") == 2 for name in report.categories
    )


def _grouped_cells(report: EvalReport):
    """Rows (camera, illumination) x columns (object category) for the
    camera/illumination/category naming convention."""
    rows: dict[tuple[str, str], dict[str, float]] = {}
    columns: list[str] = []
    for name, stats in report.categories.items():
        camera, illumination, category = name.split("/")
        rows.setdefault((camera, illumination), {})[category] = stats.corloc
        if category not in columns:
            columns.append(category)
    return sorted(rows.items()), sorted(columns)


def render_report(report: EvalReport, format: str = "markdown") -> str:
    """Render a report as markdown or CSV, one decimal place, half-up.

    Flat reports produce one data row plus an average. Reports whose
    category names follow ``camera/illumination/category`` produce a grid
    with one row per (camera, illumination) pair.
    """
    if format not in ("markdown", "csv"):
        raise ValueError(f"unknown report format {format!r}")
    if _is_grouped(report):
        rows, columns = _grouped_cells(report)
        header = ["Camera", "Illumination", *columns]
        body = [
            [camera, illumination, *[_fmt(cells.get(c, 0.0)) for c in columns]]
            for (camera, illumination), cells in rows
        ]
        footer = ["Average", "", *[""] * (len(columns) - 1), _fmt(report.average)]
    else:
        names = list(report.categories)
        header = ["Method", *names, "Average"]
        body = [
            [
                report.label,
                *[_fmt(report.categories[n].corloc) for n in names],
                _fmt(report.average),
            ]
        ]
        footer = None

    table = [header, *body]
    if footer is not None:
        table.append(footer)

    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerows(table)
        return out.getvalue()

    lines = ["| " + " | ".join(table[0]) + " |"]
    lines.append("| " + " | ".join("---" for _ in table[0]) + " |")
    for row in table[1:]:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def load_ground_truth(path: str | Path) -> dict[str, GroundTruth]:
    """Read ground truth CSV: ``image_id,category,x1,y1,x2,y2`` per row;
    multiple rows per image accumulate boxes."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"ground truth file not found: {path}")
    collected: dict[str, tuple[str, list[BoundingBox]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 6 fields, got {len(parts)}")
            image_id, category = parts[0], parts[1]
            try:
                box = BoundingBox(*(int(v) for v in parts[2:6]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            if image_id in collected and collected[image_id][0] != category:
                raise ValueError(
                    f"{path}:{lineno}: image {image_id!r} listed under two categories"
                )
            collected.setdefault(image_id, (category, []))[1].append(box)
    return {
        image_id: GroundTruth(image_id=image_id, category=cat, boxes=tuple(boxes))
        for image_id, (cat, boxes) in collected.items()
    }

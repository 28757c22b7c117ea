"""Axis-aligned box arithmetic: IoU, union, containment and greedy NMS.

Boxes use inclusive integer pixel coordinates: a 1x1 box has x1 == x2,
so area is (x2 - x1 + 1) * (y2 - y1 + 1) and all areas are exact integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

# Proposals without an objectness score sort as if they scored this, so
# score-free backends still get a deterministic NMS ordering via the
# (area, coordinates) tie-break.
DEFAULT_SCORE = 0.5


@dataclass(frozen=True, order=True)
class BoundingBox:
    x1: int
    y1: int
    x2: int
    y2: int

    def __post_init__(self):
        if self.x1 < 0 or self.y1 < 0:
            raise ValueError(f"negative coordinates in box {self.as_tuple()}")
        if self.x2 < self.x1 or self.y2 < self.y1:
            raise ValueError(f"degenerate box {self.as_tuple()}: need x1 <= x2 and y1 <= y2")

    @property
    def width(self) -> int:
        return self.x2 - self.x1 + 1

    @property
    def height(self) -> int:
        return self.y2 - self.y1 + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x1, self.y1, self.x2, self.y2)

    def contains_point(self, x: float, y: float) -> bool:
        return self.x1 <= x <= self.x2 and self.y1 <= y <= self.y2

    def within(self, width: int, height: int) -> bool:
        return self.x2 < width and self.y2 < height

    def clipped(self, width: int, height: int) -> "BoundingBox":
        return BoundingBox(
            min(self.x1, width - 1),
            min(self.y1, height - 1),
            min(self.x2, width - 1),
            min(self.y2, height - 1),
        )


@dataclass(frozen=True)
class RegionProposal:
    box: BoundingBox
    score: Optional[float] = None

    def __post_init__(self):
        if self.score is not None and not 0.0 <= self.score <= 1.0:
            raise ValueError(f"proposal score {self.score} outside [0, 1]")

    @property
    def effective_score(self) -> float:
        return DEFAULT_SCORE if self.score is None else self.score


def intersection_area(a: BoundingBox, b: BoundingBox) -> int:
    iw = min(a.x2, b.x2) - max(a.x1, b.x1) + 1
    ih = min(a.y2, b.y2) - max(a.y1, b.y1) + 1
    if iw <= 0 or ih <= 0:
        return 0
    return iw * ih


def jaccard(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes, exact in integer arithmetic."""
    inter = intersection_area(a, b)
    if inter == 0:
        return 0.0
    union = a.area + b.area - inter
    return inter / union


def union_box(a: BoundingBox, b: BoundingBox) -> BoundingBox:
    """Smallest box containing both inputs."""
    return BoundingBox(
        min(a.x1, b.x1), min(a.y1, b.y1), max(a.x2, b.x2), max(a.y2, b.y2)
    )


def _nms_order(proposals: Sequence[RegionProposal]) -> np.ndarray:
    """Indices sorted by descending score, then descending area, then
    lexicographic (x1, y1, x2, y2)."""
    scores = np.array([p.effective_score for p in proposals])
    areas = np.array([p.box.area for p in proposals])
    coords = np.array([p.box.as_tuple() for p in proposals])
    # lexsort: last key is primary
    return np.lexsort(
        (coords[:, 3], coords[:, 2], coords[:, 1], coords[:, 0], -areas, -scores)
    )


def nms_indices(proposals: Sequence[RegionProposal], t_nms: float) -> list[int]:
    """Indices of the proposals kept by greedy NMS, in selection order."""
    if not 0.0 <= t_nms <= 1.0:
        raise ValueError(f"t_nms {t_nms} outside [0, 1]")
    if not proposals:
        return []

    order = _nms_order(proposals)
    coords = np.array([p.box.as_tuple() for p in proposals])[order]
    x1, y1, x2, y2 = coords[:, 0], coords[:, 1], coords[:, 2], coords[:, 3]
    areas = (x2 - x1 + 1) * (y2 - y1 + 1)

    keep: list[int] = []
    remaining = np.arange(len(order))
    while remaining.size:
        best = remaining[0]
        keep.append(best)
        rest = remaining[1:]
        iw = np.minimum(x2[best], x2[rest]) - np.maximum(x1[best], x1[rest]) + 1
        ih = np.minimum(y2[best], y2[rest]) - np.maximum(y1[best], y1[rest]) + 1
        inter = np.clip(iw, 0, None) * np.clip(ih, 0, None)
        iou = inter / (areas[best] + areas[rest] - inter)
        remaining = rest[iou <= t_nms]

    return [int(order[i]) for i in keep]


def nms(proposals: Sequence[RegionProposal], t_nms: float) -> list[RegionProposal]:
    """Greedy non-maximum suppression.

    Keeps the best-scoring remaining proposal and discards every other
    proposal whose IoU with it exceeds ``t_nms``. Output is ordered by the
    same descending-score ranking used for selection: score descending,
    ties by larger area, then lexicographic (x1, y1, x2, y2).
    """
    return [proposals[i] for i in nms_indices(proposals, t_nms)]

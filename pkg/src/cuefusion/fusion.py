"""Cue fusion: combine one saliency map with one proposal list.

Pipeline: binarize the saliency map, drop small salient regions, take the
remaining centroids as fixation points, discard proposals containing no
fixation, apply NMS, then merge low-overlapping survivors whose color
histograms are similar enough.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import raster
from .geometry import BoundingBox, RegionProposal, nms_indices, union_box
from .raster import ColorHistogram, SaliencyMap


@dataclass(frozen=True)
class FusionConfig:
    t_ps: int = 127
    t_a: int = 300
    t_nms: float = 0.15
    t_hist: float = 1.0
    merge_low_overlap: bool = True
    low_overlap_min: float = 0.0

    def __post_init__(self):
        if not 0 <= self.t_ps <= 255:
            raise ValueError(f"t_ps {self.t_ps} outside 0-255")
        if self.t_a < 0:
            raise ValueError(f"t_a {self.t_a} must be >= 0")
        for name in ("t_nms", "t_hist", "low_overlap_min"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} {v} outside [0, 1]")
        if self.low_overlap_min > self.t_nms:
            raise ValueError(
                f"low_overlap_min {self.low_overlap_min} exceeds t_nms {self.t_nms}: "
                "merge band (low_overlap_min, t_nms] is empty"
            )

    def as_dict(self) -> dict:
        return {
            "t_ps": self.t_ps,
            "t_a": self.t_a,
            "t_nms": self.t_nms,
            "t_hist": self.t_hist,
            "merge_low_overlap": self.merge_low_overlap,
            "low_overlap_min": self.low_overlap_min,
        }


# Threshold sets the method was published with, per evaluation dataset.
PROFILES: dict[str, FusionConfig] = {
    "object-discovery": FusionConfig(t_ps=127, t_a=300, t_nms=0.15, t_hist=1.0),
    "kth-handtool": FusionConfig(t_ps=127, t_a=300, t_nms=0.05, t_hist=1.0),
}


@dataclass(frozen=True)
class LocalizationResult:
    boxes: tuple[BoundingBox, ...]
    provenance: tuple[tuple[int, ...], ...]  # proposal indices merged per box
    fixations: tuple[tuple[float, float], ...]

    def to_json(self, image: str = "", config: Optional[FusionConfig] = None) -> str:
        payload = {
            "image": image,
            "boxes": [list(b.as_tuple()) for b in self.boxes],
            "fixations": [[x, y] for x, y in self.fixations],
            "provenance": [list(ids) for ids in self.provenance],
            "config": config.as_dict() if config else None,
        }
        return json.dumps(payload, indent=2) + "\n"


def fixation_points(
    saliency: SaliencyMap, config: FusionConfig
) -> list[tuple[float, float]]:
    """Centroids of the salient regions that survive the area filter."""
    mask = raster.binarize(saliency, config.t_ps)
    regions = raster.connected_components(mask)
    regions = raster.area_filter(regions, config.t_a)
    return [(r.centroid_x, r.centroid_y) for r in regions]


def _fixation_mask(
    proposals: Sequence[RegionProposal], fixations: Sequence[tuple[float, float]]
) -> np.ndarray:
    if not proposals or not fixations:
        return np.zeros(len(proposals), dtype=bool)
    coords = np.array([p.box.as_tuple() for p in proposals], dtype=np.float64)
    pts = np.asarray(fixations, dtype=np.float64)
    fx, fy = pts[:, 0], pts[:, 1]
    return (
        (coords[:, 0:1] <= fx)
        & (fx <= coords[:, 2:3])
        & (coords[:, 1:2] <= fy)
        & (fy <= coords[:, 3:4])
    ).any(axis=1)


def filter_by_fixation(
    proposals: Sequence[RegionProposal], fixations: Sequence[tuple[float, float]]
) -> list[RegionProposal]:
    """Keep proposals whose inclusive box contains at least one fixation."""
    mask = _fixation_mask(proposals, fixations)
    return [p for p, keep in zip(proposals, mask) if keep]


@dataclass
class _MergeNode:
    box: BoundingBox
    ids: tuple[int, ...]
    hist: Optional[ColorHistogram] = None


def _histogram(image: np.ndarray, node: _MergeNode) -> ColorHistogram:
    if node.hist is None:
        node.hist = raster.region_histogram(image, node.box)
    return node.hist


def merge_similar(
    image: np.ndarray,
    survivors: Sequence[RegionProposal],
    config: FusionConfig,
    provenance: Optional[Sequence[tuple[int, ...]]] = None,
) -> tuple[list[BoundingBox], list[tuple[int, ...]]]:
    """Merge low-overlapping survivor pairs with near-identical color content.

    A pair is eligible when its IoU falls in (low_overlap_min, t_nms] and the
    histogram intersection of the two image regions reaches t_hist. The
    highest-similarity eligible pair merges first (ties by combined area
    descending, then box coordinates), repeating until no pair qualifies.
    """
    if provenance is None:
        provenance = [(i,) for i in range(len(survivors))]
    nodes = [
        _MergeNode(box=p.box, ids=tuple(ids))
        for p, ids in zip(survivors, provenance)
    ]
    if not config.merge_low_overlap:
        return [n.box for n in nodes], [n.ids for n in nodes]

    while len(nodes) > 1:
        coords = np.array([n.box.as_tuple() for n in nodes], dtype=np.int64)
        x1, y1, x2, y2 = coords[:, 0], coords[:, 1], coords[:, 2], coords[:, 3]
        areas = (x2 - x1 + 1) * (y2 - y1 + 1)
        iw = np.minimum(x2[:, None], x2) - np.maximum(x1[:, None], x1) + 1
        ih = np.minimum(y2[:, None], y2) - np.maximum(y1[:, None], y1) + 1
        inter = np.clip(iw, 0, None) * np.clip(ih, 0, None)
        iou = inter / (areas[:, None] + areas - inter)
        in_band = (config.low_overlap_min < iou) & (iou <= config.t_nms)
        in_band &= np.tri(len(nodes), k=-1, dtype=bool).T  # upper triangle only

        best = None
        for i, j in zip(*np.nonzero(in_band)):
            sim = raster.histogram_similarity(
                _histogram(image, nodes[i]), _histogram(image, nodes[j])
            )
            if sim < config.t_hist:
                continue
            combined = nodes[i].box.area + nodes[j].box.area
            pair = sorted((nodes[i].box.as_tuple(), nodes[j].box.as_tuple()))
            key = (-sim, -combined, pair[0], pair[1])
            if best is None or key < best[0]:
                best = (key, i, j)
        if best is None:
            break
        _, i, j = best
        merged = _MergeNode(
            box=union_box(nodes[i].box, nodes[j].box),
            ids=tuple(sorted(set(nodes[i].ids) | set(nodes[j].ids))),
        )
        nodes = [n for k, n in enumerate(nodes) if k not in (i, j)]
        nodes.append(merged)

    return [n.box for n in nodes], [n.ids for n in nodes]


def localize(
    image: np.ndarray,
    saliency: SaliencyMap,
    proposals: Sequence[RegionProposal],
    config: FusionConfig,
) -> LocalizationResult:
    """Run the full fusion pipeline for one image."""
    h, w = image.shape[:2]
    if (saliency.width, saliency.height) != (w, h):
        raise ValueError(
            f"saliency is {saliency.width}x{saliency.height}, image is {w}x{h}"
        )
    fixations = fixation_points(saliency, config)

    mask = _fixation_mask(proposals, fixations)
    surviving = [(i, p) for i, (p, keep) in enumerate(zip(proposals, mask)) if keep]

    keep = nms_indices([p for _, p in surviving], config.t_nms)
    pruned = [surviving[k][1] for k in keep]
    pruned_ids = [surviving[k][0] for k in keep]

    boxes, provenance = merge_similar(
        image, pruned, config, provenance=[(i,) for i in pruned_ids]
    )
    return LocalizationResult(
        boxes=tuple(boxes),
        provenance=tuple(provenance),
        fixations=tuple(fixations),
    )

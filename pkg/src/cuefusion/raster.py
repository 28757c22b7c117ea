"""Raster containers and pixel algorithms.

Saliency binarization, 8-connected component labeling with areas/centroids,
and quantized RGB region histograms. Arrays are row-major (height, width)
uint8; a pixel's saliency probability is intensity / 255.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .geometry import BoundingBox

HIST_LEVELS = 8          # quantization levels per RGB channel
HIST_BINS = HIST_LEVELS ** 3

_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass(frozen=True)
class SaliencyMap:
    values: np.ndarray  # (height, width) uint8

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.size == 0:
            raise ValueError("saliency map must be a non-empty 2-D array")
        if v.dtype != np.uint8:
            raise ValueError(f"saliency map must be uint8, got {v.dtype}")
        v.setflags(write=False)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class BinaryMask:
    bits: np.ndarray  # (height, width) bool

    def __post_init__(self):
        b = self.bits
        if b.ndim != 2 or b.size == 0:
            raise ValueError("mask must be a non-empty 2-D array")
        if b.dtype != np.bool_:
            raise ValueError(f"mask must be boolean, got {b.dtype}")
        b.setflags(write=False)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]


@dataclass(frozen=True)
class SalientRegion:
    pixel_count: int
    centroid_x: float
    centroid_y: float
    bbox: BoundingBox


@dataclass(frozen=True)
class ColorHistogram:
    bins: np.ndarray  # (HIST_BINS,) int64 counts
    total: int

    def __post_init__(self):
        if self.bins.shape != (HIST_BINS,):
            raise ValueError(f"histogram must have {HIST_BINS} bins")
        if int(self.bins.sum()) != self.total:
            raise ValueError("histogram bins do not sum to total")
        self.bins.setflags(write=False)

    def normalized(self) -> np.ndarray:
        if self.total == 0:
            raise ValueError("cannot normalize an empty histogram")
        return self.bins / self.total


def binarize(saliency: SaliencyMap, t_ps: int) -> BinaryMask:
    """Mark a pixel salient iff its intensity is strictly above ``t_ps``."""
    if not 0 <= t_ps <= 255:
        raise ValueError(f"t_ps {t_ps} outside 0-255")
    return BinaryMask(saliency.values > t_ps)


def connected_components(mask: BinaryMask) -> list[SalientRegion]:
    """8-connected components of the salient pixels.

    Each region reports its exact pixel count, the arithmetic-mean centroid
    of its member pixels and a tight bounding box. Regions come back sorted
    by descending pixel count, ties by bbox coordinates.
    """
    labels, n = ndimage.label(mask.bits, structure=_EIGHT_CONNECTED)
    if n == 0:
        return []
    flat = labels.ravel()
    counts = np.bincount(flat, minlength=n + 1)[1:]
    cols = np.tile(np.arange(mask.width), mask.height)
    rows = np.repeat(np.arange(mask.height), mask.width)
    sum_x = np.bincount(flat, weights=cols, minlength=n + 1)[1:]
    sum_y = np.bincount(flat, weights=rows, minlength=n + 1)[1:]
    slices = ndimage.find_objects(labels)

    regions = []
    for i in range(n):
        ys, xs = slices[i]
        regions.append(
            SalientRegion(
                pixel_count=int(counts[i]),
                centroid_x=float(sum_x[i] / counts[i]),
                centroid_y=float(sum_y[i] / counts[i]),
                bbox=BoundingBox(xs.start, ys.start, xs.stop - 1, ys.stop - 1),
            )
        )
    regions.sort(key=lambda r: (-r.pixel_count, r.bbox.as_tuple()))
    return regions


def area_filter(regions: list[SalientRegion], t_a: int) -> list[SalientRegion]:
    """Keep regions with pixel_count >= t_a, preserving order."""
    if t_a < 0:
        raise ValueError(f"t_a {t_a} must be >= 0")
    return [r for r in regions if r.pixel_count >= t_a]


def region_histogram(image: np.ndarray, box: BoundingBox) -> ColorHistogram:
    """Quantized RGB histogram of the pixels inside an inclusive box.

    Each channel is quantized to HIST_LEVELS levels (intensity // 32),
    giving 512 bins.
    """
    if image.ndim != 3 or image.shape[2] != 3 or image.dtype != np.uint8:
        raise ValueError("image must be an (h, w, 3) uint8 array")
    h, w = image.shape[:2]
    if not box.within(w, h):
        raise ValueError(f"box {box.as_tuple()} outside {w}x{h} image")
    patch = image[box.y1 : box.y2 + 1, box.x1 : box.x2 + 1]
    q = (patch >> 5).astype(np.int64)
    idx = (q[..., 0] * HIST_LEVELS + q[..., 1]) * HIST_LEVELS + q[..., 2]
    bins = np.bincount(idx.ravel(), minlength=HIST_BINS)
    return ColorHistogram(bins=bins, total=box.area)


def histogram_similarity(h1: ColorHistogram, h2: ColorHistogram) -> float:
    """Histogram intersection of the normalized histograms, in [0, 1].

    1.0 for identical color distributions, 0.0 for disjoint support.
    """
    if h1.total == 0 or h2.total == 0:
        raise ValueError("histogram similarity undefined for empty histograms")
    return float(np.minimum(h1.normalized(), h2.normalized()).sum())

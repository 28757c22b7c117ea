"""Pluggable cue sources.

The saliency network and the region proposal network stay outside this
package; their outputs enter through files (grayscale raster, proposal CSV).
Classical fallbacks (color-contrast saliency, grid anchors) keep the
pipeline runnable with no model at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .geometry import BoundingBox, RegionProposal
from .imageio import read_saliency
from .raster import SaliencyMap

DEFAULT_SALIENCY_SUFFIX = "_saliency"


class ProposalParseError(ValueError):
    """Malformed or invalid row in a proposal CSV; message names the line."""


@dataclass(frozen=True)
class SaliencySource:
    kind: str = "file"  # "file" or "contrast-fallback"
    suffix: str = DEFAULT_SALIENCY_SUFFIX
    blur_radius: int = 3

    def __post_init__(self):
        if self.kind not in ("file", "contrast-fallback"):
            raise ValueError(f"unknown saliency source kind {self.kind!r}")
        if self.blur_radius < 0:
            raise ValueError("blur_radius must be >= 0")


@dataclass(frozen=True)
class ProposalSource:
    kind: str = "file"  # "file" or "anchor-fallback"
    scales: tuple[int, ...] = (32, 64, 128, 256)
    aspects: tuple[float, ...] = (0.5, 1.0, 2.0)
    stride: int = 16
    max_proposals: int = 2000

    def __post_init__(self):
        if self.kind not in ("file", "anchor-fallback"):
            raise ValueError(f"unknown proposal source kind {self.kind!r}")
        if not self.scales or any(s <= 0 for s in self.scales):
            raise ValueError("anchor scales must be positive")
        if not self.aspects or any(a <= 0 for a in self.aspects):
            raise ValueError("anchor aspect ratios must be positive")
        if self.stride <= 0:
            raise ValueError("anchor stride must be positive")
        if self.max_proposals < 1:
            raise ValueError("max_proposals must be >= 1")


def load_saliency(
    path: str | Path, expected_width: int, expected_height: int
) -> SaliencyMap:
    """Load a precomputed saliency raster, checking dimensions."""
    return read_saliency(path, expected_width, expected_height)


def _box_blur(channel: np.ndarray, radius: int) -> np.ndarray:
    """Mean over the (2r+1)^2 window clipped to the image bounds.

    Exact via integral images; border windows are normalized by the number
    of pixels actually inside the image.
    """
    if radius == 0:
        return channel.astype(np.float64)
    h, w = channel.shape
    integral = np.zeros((h + 1, w + 1), dtype=np.float64)
    integral[1:, 1:] = np.cumsum(np.cumsum(channel, axis=0), axis=1)

    ys = np.arange(h)
    xs = np.arange(w)
    y0 = np.clip(ys - radius, 0, h)[:, None]
    y1 = np.clip(ys + radius + 1, 0, h)[:, None]
    x0 = np.clip(xs - radius, 0, w)[None, :]
    x1 = np.clip(xs + radius + 1, 0, w)[None, :]

    sums = (
        integral[y1, x1] - integral[y0, x1] - integral[y1, x0] + integral[y0, x0]
    )
    counts = (y1 - y0) * (x1 - x0)
    return sums / counts


def contrast_saliency(image: np.ndarray, blur_radius: int = 3) -> SaliencyMap:
    """Frequency-tuned-style fallback saliency.

    Per pixel: Euclidean distance between the image's mean color and the
    box-blurred pixel color, then min-max normalized to 0-255. A
    constant-color image yields an all-zero map.
    """
    if image.ndim != 3 or image.shape[2] != 3 or image.dtype != np.uint8:
        raise ValueError("image must be an (h, w, 3) uint8 array")
    if blur_radius < 0:
        raise ValueError("blur_radius must be >= 0")
    mean_color = image.reshape(-1, 3).mean(axis=0)
    blurred = np.stack(
        [_box_blur(image[..., c], blur_radius) for c in range(3)], axis=-1
    )
    dist = np.sqrt(((blurred - mean_color) ** 2).sum(axis=-1))
    peak = dist.max()
    if peak == 0.0:
        return SaliencyMap(np.zeros(image.shape[:2], dtype=np.uint8))
    lo = dist.min()
    if peak == lo:
        return SaliencyMap(np.zeros(image.shape[:2], dtype=np.uint8))
    scaled = np.round((dist - lo) / (peak - lo) * 255.0)
    return SaliencyMap(scaled.astype(np.uint8))


def load_proposals(
    path: str | Path, image_width: int, image_height: int, max_n: int
) -> list[RegionProposal]:
    """Parse a proposal CSV: ``x1,y1,x2,y2[,score]`` per line, ``#`` comments.

    Keeps file order, validates every box against the image bounds, and
    truncates to the first ``max_n`` proposals.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"proposal file not found: {path}")
    proposals: list[RegionProposal] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) not in (4, 5):
                raise ProposalParseError(
                    f"{path}:{lineno}: expected 4 or 5 fields, got {len(parts)}"
                )
            try:
                coords = [int(p) for p in parts[:4]]
                score = float(parts[4]) if len(parts) == 5 else None
            except ValueError as exc:
                raise ProposalParseError(f"{path}:{lineno}: {exc}") from exc
            try:
                box = BoundingBox(*coords).clipped(image_width, image_height)
                proposal = RegionProposal(box=box, score=score)
            except ValueError as exc:
                raise ProposalParseError(f"{path}:{lineno}: {exc}") from exc
            proposals.append(proposal)
            if len(proposals) >= max_n:
                break
    return proposals


def anchor_proposals(
    image_width: int,
    image_height: int,
    source: ProposalSource,
    saliency: Optional[SaliencyMap] = None,
) -> list[RegionProposal]:
    """Deterministic multi-scale grid anchors.

    One box per (scale, aspect) pair at each stride-spaced center, clipped
    to the image and deduplicated. Scored by mean saliency inside the box
    when a map is supplied, otherwise left unscored.
    """
    if image_width <= 0 or image_height <= 0:
        raise ValueError("image dimensions must be positive")

    def centers(dim: int) -> list[int]:
        pts = list(range(source.stride // 2, dim, source.stride))
        return pts if pts else [dim // 2]

    integral = None
    if saliency is not None:
        integral = np.zeros((image_height + 1, image_width + 1), dtype=np.float64)
        integral[1:, 1:] = np.cumsum(
            np.cumsum(saliency.values.astype(np.float64), axis=0), axis=1
        )

    seen: set[tuple[int, int, int, int]] = set()
    proposals: list[RegionProposal] = []
    for cy in centers(image_height):
        for cx in centers(image_width):
            for scale in source.scales:
                for aspect in source.aspects:
                    w = max(1, int(round(scale * aspect**0.5)))
                    h = max(1, int(round(scale / aspect**0.5)))
                    box = BoundingBox(
                        max(0, cx - w // 2),
                        max(0, cy - h // 2),
                        min(image_width - 1, cx - w // 2 + w - 1),
                        min(image_height - 1, cy - h // 2 + h - 1),
                    )
                    key = box.as_tuple()
                    if key in seen:
                        continue
                    seen.add(key)
                    score = None
                    if integral is not None:
                        total = (
                            integral[box.y2 + 1, box.x2 + 1]
                            - integral[box.y1, box.x2 + 1]
                            - integral[box.y2 + 1, box.x1]
                            + integral[box.y1, box.x1]
                        )
                        score = float(total / (box.area * 255.0))
                    proposals.append(RegionProposal(box=box, score=score))
                    if len(proposals) >= source.max_proposals:
                        return proposals
    return proposals

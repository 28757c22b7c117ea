"""Independent reference implementations used to check the fast paths.

These deliberately stay brute-force: pixel sets for box arithmetic and
recursive flood fill for labeling. They share no code with the package.
"""
from __future__ import annotations

import sys

import numpy as np


def box_pixels(box) -> set[tuple[int, int]]:
    x1, y1, x2, y2 = box
    return {(x, y) for x in range(x1, x2 + 1) for y in range(y1, y2 + 1)}


def jaccard_by_rasterization(a, b) -> tuple[int, int]:
    """(intersection, union) pixel counts from explicit pixel sets."""
    pa, pb = box_pixels(a), box_pixels(b)
    return len(pa & pb), len(pa | pb)


def union_box_by_rasterization(a, b) -> tuple[int, int, int, int]:
    pixels = box_pixels(a) | box_pixels(b)
    xs = [p[0] for p in pixels]
    ys = [p[1] for p in pixels]
    return (min(xs), min(ys), max(xs), max(ys))


def flood_fill_components(mask: np.ndarray) -> list[set[tuple[int, int]]]:
    """8-connected components by recursive flood fill; returns pixel sets."""
    h, w = mask.shape
    sys.setrecursionlimit(max(sys.getrecursionlimit(), h * w + 100))
    visited = np.zeros_like(mask, dtype=bool)
    components = []

    def fill(y: int, x: int, out: set):
        if y < 0 or y >= h or x < 0 or x >= w:
            return
        if visited[y, x] or not mask[y, x]:
            return
        visited[y, x] = True
        out.add((x, y))
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                if dy or dx:
                    fill(y + dy, x + dx, out)

    for y in range(h):
        for x in range(w):
            if mask[y, x] and not visited[y, x]:
                out: set[tuple[int, int]] = set()
                fill(y, x, out)
                components.append(out)
    return components


def component_summary(pixels: set[tuple[int, int]]):
    """(count, centroid_x, centroid_y, bbox) for a flood-filled pixel set."""
    xs = [p[0] for p in pixels]
    ys = [p[1] for p in pixels]
    n = len(pixels)
    return (
        n,
        sum(xs) / n,
        sum(ys) / n,
        (min(xs), min(ys), max(xs), max(ys)),
    )


def greedy_nms_reference(items, t_nms):
    """items: list of (box_tuple, score). Returns surviving indices."""

    def key(i):
        box, score = items[i]
        area = (box[2] - box[0] + 1) * (box[3] - box[1] + 1)
        return (-score, -area, box)

    order = sorted(range(len(items)), key=key)
    kept = []
    for i in order:
        inter, union = None, None
        suppressed = False
        for j in kept:
            inter, union = jaccard_by_rasterization(items[i][0], items[j][0])
            if inter / union > t_nms:
                suppressed = True
                break
        if not suppressed:
            kept.append(i)
    return kept

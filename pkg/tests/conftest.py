from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cuefusion.geometry import BoundingBox
from cuefusion.imageio import write_image


def random_box(rng: np.random.Generator, grid: int = 64) -> BoundingBox:
    x1, x2 = sorted(rng.integers(0, grid, size=2).tolist())
    y1, y2 = sorted(rng.integers(0, grid, size=2).tolist())
    return BoundingBox(x1, y1, x2, y2)


def build_synthetic_dataset(root: Path, rng: np.random.Generator,
                            images_per_category: int = 20,
                            size: int = 96, n_distractors: int = 100):
    """Flat-layout dataset: one uniform-color object on a uniform background
    per image, oracle saliency sidecar (object mask), and a proposal sidecar
    holding the truth box plus random distractors."""
    categories = ["airplane", "car", "horse"]
    gt_lines = []
    for ci, category in enumerate(categories):
        for k in range(images_per_category):
            name = f"{category}_{k:03d}"
            bg = np.array([40 + 20 * ci, 60, 90], dtype=np.uint8)
            fg = np.array([220, 140 - 30 * ci, 30 + 40 * ci], dtype=np.uint8)
            w = int(rng.integers(28, 40))
            h = int(rng.integers(28, 40))
            x1 = int(rng.integers(4, size - w - 4))
            y1 = int(rng.integers(4, size - h - 4))
            x2, y2 = x1 + w - 1, y1 + h - 1

            image = np.tile(bg, (size, size, 1))
            image[y1 : y2 + 1, x1 : x2 + 1] = fg
            saliency = np.zeros((size, size), dtype=np.uint8)
            saliency[y1 : y2 + 1, x1 : x2 + 1] = 255

            write_image(root / f"{name}.png", image)
            write_image(root / f"{name}_saliency.png", saliency)

            lines = [f"{x1},{y1},{x2},{y2},0.95"]
            for _ in range(n_distractors):
                dx1, dx2 = sorted(rng.integers(0, size, size=2).tolist())
                dy1, dy2 = sorted(rng.integers(0, size, size=2).tolist())
                score = float(rng.uniform(0.0, 0.9))
                lines.append(f"{dx1},{dy1},{dx2},{dy2},{score:.4f}")
            (root / f"{name}_proposals.csv").write_text(
                "\n".join(lines) + "\n", encoding="utf-8"
            )
            gt_lines.append(f"{name},{category},{x1},{y1},{x2},{y2}")
    (root / "ground_truth.csv").write_text("\n".join(gt_lines) + "\n", encoding="utf-8")
    return categories


@pytest.fixture(scope="session")
def synthetic_dataset(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("synthetic_dataset")
    build_synthetic_dataset(root, np.random.default_rng(7))
    return root

"""Image reading and writing.

Accepts 8-bit grayscale and 24-bit color images in PNG and binary PGM/PPM
(P5/P6). Anything else is rejected with a descriptive error.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .raster import SaliencyMap


class UnsupportedFormatError(ValueError):
    """Image file exists but is not an accepted format/bit depth."""


class DimensionMismatchError(ValueError):
    """Image dimensions differ from what the caller expects."""


def _open(path: str | Path) -> Image.Image:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"image file not found: {path}")
    try:
        img = Image.open(path)
        img.load()
    except UnidentifiedImageError as exc:
        raise UnsupportedFormatError(f"{path}: not a recognized image file") from exc
    if img.format not in ("PNG", "PPM"):  # Pillow reports PGM/PPM as "PPM"
        raise UnsupportedFormatError(
            f"{path}: format {img.format} not supported (need PNG or binary PGM/PPM)"
        )
    return img


def read_color(path: str | Path) -> np.ndarray:
    """Read a 24-bit color image as an (h, w, 3) uint8 array."""
    img = _open(path)
    if img.mode != "RGB":
        raise UnsupportedFormatError(
            f"{path}: mode {img.mode} not supported, need 24-bit RGB"
        )
    return np.asarray(img, dtype=np.uint8)


def read_grayscale(path: str | Path) -> np.ndarray:
    """Read an 8-bit grayscale image as an (h, w) uint8 array."""
    img = _open(path)
    if img.mode != "L":
        raise UnsupportedFormatError(
            f"{path}: mode {img.mode} not supported, need 8-bit grayscale"
        )
    return np.asarray(img, dtype=np.uint8)


def read_saliency(
    path: str | Path, expected_width: int, expected_height: int
) -> SaliencyMap:
    """Read a grayscale raster as a saliency map with exact dimensions."""
    values = read_grayscale(path)
    h, w = values.shape
    if (w, h) != (expected_width, expected_height):
        raise DimensionMismatchError(
            f"{path}: saliency is {w}x{h}, expected {expected_width}x{expected_height}"
        )
    return SaliencyMap(values)


def write_image(path: str | Path, array: np.ndarray) -> None:
    """Write a uint8 array (grayscale 2-D or RGB 3-D) as PNG or PGM/PPM."""
    Image.fromarray(array).save(path)

"""Filesystem ingestion: turn a dataset directory into a manifest.

Supported layouts:
  flat             — images directly under the root.
  object-discovery — one directory per category, images inside.
  kth-handtool     — <camera>/<illumination>/<category>/<instance>/<image>,
                     camera in {Camera1, Camera2}, illumination in
                     {artificial, natural, directional}.

Optional sidecars are discovered by filename suffix next to each image:
``<stem>_saliency.{png,pgm}`` and ``<stem>_proposals.csv``. Ground truth, if
present, lives in ``ground_truth.csv`` at the root; image ids are paths
relative to the root, without extension, using ``/`` separators.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .evaluation import GroundTruth, load_ground_truth

LAYOUTS = ("flat", "object-discovery", "kth-handtool")
KTH_CAMERAS = ("Camera1", "Camera2")
KTH_ILLUMINATIONS = ("artificial", "natural", "directional")
IMAGE_EXTENSIONS = (".png", ".ppm", ".pgm")
SALIENCY_SUFFIX = "_saliency"
PROPOSAL_SUFFIX = "_proposals"
GROUND_TRUTH_FILENAME = "ground_truth.csv"


@dataclass(frozen=True)
class ManifestEntry:
    image_id: str
    image_path: Path
    saliency_path: Optional[Path]
    proposal_path: Optional[Path]
    category: str
    camera: Optional[str] = None
    illumination: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "image_id": self.image_id,
            "image_path": str(self.image_path),
            "saliency_path": None if self.saliency_path is None else str(self.saliency_path),
            "proposal_path": None if self.proposal_path is None else str(self.proposal_path),
            "category": self.category,
            "camera": self.camera,
            "illumination": self.illumination,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ManifestEntry":
        return cls(
            image_id=d["image_id"],
            image_path=Path(d["image_path"]),
            saliency_path=None if d["saliency_path"] is None else Path(d["saliency_path"]),
            proposal_path=None if d["proposal_path"] is None else Path(d["proposal_path"]),
            category=d["category"],
            camera=d["camera"],
            illumination=d["illumination"],
        )


@dataclass(frozen=True)
class DatasetManifest:
    root: Path
    layout: str
    entries: tuple[ManifestEntry, ...]
    ground_truth: dict[str, GroundTruth]

    def to_json(self) -> str:
        payload = {
            "root": str(self.root),
            "layout": self.layout,
            "entries": [e.as_dict() for e in self.entries],
        }
        return json.dumps(payload, indent=2) + "\n"


def _is_sidecar(path: Path) -> bool:
    return path.stem.endswith(SALIENCY_SUFFIX) or path.stem.endswith(PROPOSAL_SUFFIX)


def _find_sidecar(image: Path, suffix: str, extensions: tuple[str, ...]) -> Optional[Path]:
    for ext in extensions:
        candidate = image.with_name(image.stem + suffix + ext)
        if candidate.is_file():
            return candidate
    return None


def _grouping(root: Path, image: Path, layout: str) -> tuple[str, Optional[str], Optional[str]]:
    rel = image.relative_to(root)
    parts = rel.parts[:-1]
    if layout == "flat":
        return ("all", None, None)
    if layout == "object-discovery":
        if not parts:
            raise ValueError(f"{image}: object-discovery layout needs <category>/<image>")
        return (parts[0], None, None)
    # kth-handtool
    if len(parts) < 3:
        raise ValueError(
            f"{image}: kth-handtool layout needs <camera>/<illumination>/<category>/..."
        )
    camera, illumination, category = parts[0], parts[1], parts[2]
    if camera not in KTH_CAMERAS:
        raise ValueError(f"{image}: unknown camera {camera!r}, expected one of {KTH_CAMERAS}")
    if illumination not in KTH_ILLUMINATIONS:
        raise ValueError(
            f"{image}: unknown illumination {illumination!r}, expected one of {KTH_ILLUMINATIONS}"
        )
    return (category, camera, illumination)


def scan(root: str | Path, layout: str = "flat") -> DatasetManifest:
    """Build a deterministic manifest of a dataset directory.

    Entries are sorted by path; missing sidecars are recorded as absent.
    """
    root = Path(root)
    if layout not in LAYOUTS:
        raise ValueError(f"unknown layout {layout!r}, expected one of {LAYOUTS}")
    if not root.is_dir():
        raise NotADirectoryError(f"dataset root not found: {root}")

    images = sorted(
        p
        for p in root.rglob("*")
        if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS and not _is_sidecar(p)
    )

    entries = []
    for image in images:
        category, camera, illumination = _grouping(root, image, layout)
        image_id = image.relative_to(root).with_suffix("").as_posix()
        entries.append(
            ManifestEntry(
                image_id=image_id,
                image_path=image,
                saliency_path=_find_sidecar(image, SALIENCY_SUFFIX, (".png", ".pgm")),
                proposal_path=_find_sidecar(image, PROPOSAL_SUFFIX, (".csv",)),
                category=category,
                camera=camera,
                illumination=illumination,
            )
        )

    gt_path = root / GROUND_TRUTH_FILENAME
    ground_truth = load_ground_truth(gt_path) if gt_path.is_file() else {}
    return DatasetManifest(
        root=root, layout=layout, entries=tuple(entries), ground_truth=ground_truth
    )

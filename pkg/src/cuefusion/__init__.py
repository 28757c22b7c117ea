"""Unsupervised single-image object localization by fusing saliency maps
with class-agnostic region proposals, plus a CorLoc evaluation harness."""

from .geometry import BoundingBox, RegionProposal, jaccard, nms, union_box
from .raster import (
    BinaryMask,
    ColorHistogram,
    SaliencyMap,
    SalientRegion,
    area_filter,
    binarize,
    connected_components,
    histogram_similarity,
    region_histogram,
)
from .backends import (
    ProposalSource,
    SaliencySource,
    anchor_proposals,
    contrast_saliency,
    load_proposals,
    load_saliency,
)
from .fusion import (
    PROFILES,
    FusionConfig,
    LocalizationResult,
    filter_by_fixation,
    fixation_points,
    localize,
    merge_similar,
)
from .evaluation import (
    EvalRecord,
    EvalReport,
    GroundTruth,
    corloc,
    render_report,
    score_image,
)
from .dataset import DatasetManifest, ManifestEntry, scan
from .estimator import CueFusionLocalizer

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "RegionProposal",
    "jaccard",
    "nms",
    "union_box",
    "BinaryMask",
    "ColorHistogram",
    "SaliencyMap",
    "SalientRegion",
    "area_filter",
    "binarize",
    "connected_components",
    "histogram_similarity",
    "region_histogram",
    "ProposalSource",
    "SaliencySource",
    "anchor_proposals",
    "contrast_saliency",
    "load_proposals",
    "load_saliency",
    "PROFILES",
    "FusionConfig",
    "LocalizationResult",
    "filter_by_fixation",
    "fixation_points",
    "localize",
    "merge_similar",
    "EvalRecord",
    "EvalReport",
    "GroundTruth",
    "corloc",
    "render_report",
    "score_image",
    "DatasetManifest",
    "ManifestEntry",
    "scan",
    "CueFusionLocalizer",
]

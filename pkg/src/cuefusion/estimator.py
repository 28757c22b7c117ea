"""Estimator-style front end for the fusion pipeline.

Wraps the pure ``localize`` function in a scikit-learn compatible class so
the thresholds can be tuned through ``get_params``/``set_params`` and the
localizer composes with sklearn model-selection utilities.
"""
from __future__ import annotations

from typing import Sequence

from sklearn.base import BaseEstimator

from .fusion import FusionConfig, LocalizationResult, PROFILES, localize


class CueFusionLocalizer(BaseEstimator):
    """Unsupervised single-image object localizer.

    Stateless: ``fit`` only validates parameters. ``predict`` takes a
    sequence of ``(image, saliency, proposals)`` triples and returns one
    :class:`LocalizationResult` per sample.

    Parameters mirror :class:`FusionConfig`; see ``PROFILES`` for the two
    published per-dataset threshold sets.
    """

    def __init__(
        self,
        t_ps: int = 127,
        t_a: int = 300,
        t_nms: float = 0.15,
        t_hist: float = 1.0,
        merge_low_overlap: bool = True,
        low_overlap_min: float = 0.0,
    ):
        self.t_ps = t_ps
        self.t_a = t_a
        self.t_nms = t_nms
        self.t_hist = t_hist
        self.merge_low_overlap = merge_low_overlap
        self.low_overlap_min = low_overlap_min

    @classmethod
    def from_profile(cls, name: str) -> "CueFusionLocalizer":
        if name not in PROFILES:
            raise ValueError(f"unknown profile {name!r}, expected one of {sorted(PROFILES)}")
        return cls(**PROFILES[name].as_dict())

    def _config(self) -> FusionConfig:
        return FusionConfig(**self.get_params())

    def fit(self, X=None, y=None):
        self._config()  # validates thresholds
        return self

    def predict(self, X: Sequence[tuple]) -> list[LocalizationResult]:
        config = self._config()
        return [
            localize(image, saliency, proposals, config)
            for image, saliency, proposals in X
        ]

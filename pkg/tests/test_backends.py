from __future__ import annotations

import numpy as np
import pytest

from cuefusion.backends import (
    ProposalParseError,
    ProposalSource,
    SaliencySource,
    anchor_proposals,
    contrast_saliency,
    load_proposals,
    load_saliency,
)
from cuefusion.geometry import BoundingBox
from cuefusion.imageio import DimensionMismatchError, UnsupportedFormatError, write_image
from cuefusion.raster import SaliencyMap


class TestLoadSaliency:
    def test_valid_pgm(self, tmp_path):
        path = tmp_path / "map.pgm"
        write_image(path, np.zeros((480, 640), dtype=np.uint8))
        sal = load_saliency(path, 640, 480)
        assert (sal.width, sal.height) == (640, 480)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_saliency(tmp_path / "nope.pgm", 10, 10)

    def test_dimension_mismatch(self, tmp_path):
        path = tmp_path / "map.pgm"
        write_image(path, np.zeros((240, 320), dtype=np.uint8))
        with pytest.raises(DimensionMismatchError):
            load_saliency(path, 640, 480)

    def test_color_file_rejected(self, tmp_path):
        path = tmp_path / "map.ppm"
        write_image(path, np.zeros((10, 10, 3), dtype=np.uint8))
        with pytest.raises(UnsupportedFormatError):
            load_saliency(path, 10, 10)


def scalar_contrast_reference(image: np.ndarray, radius: int) -> np.ndarray:
    """Direct per-pixel evaluation of the fallback formula."""
    h, w = image.shape[:2]
    mean = image.reshape(-1, 3).astype(np.float64).mean(axis=0)
    dist = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            y0, y1 = max(0, y - radius), min(h, y + radius + 1)
            x0, x1 = max(0, x - radius), min(w, x + radius + 1)
            window = image[y0:y1, x0:x1].reshape(-1, 3).astype(np.float64)
            blurred = window.mean(axis=0)
            dist[y, x] = np.sqrt(((blurred - mean) ** 2).sum())
    lo, hi = dist.min(), dist.max()
    if hi == lo:
        return np.zeros((h, w), dtype=np.uint8)
    return np.round((dist - lo) / (hi - lo) * 255).astype(np.uint8)


class TestContrastSaliency:
    def test_uniform_image_is_zero(self):
        img = np.full((8, 8, 3), 128, dtype=np.uint8)
        assert contrast_saliency(img, 2).values.sum() == 0

    def test_single_white_pixel_peaks_there(self):
        img = np.zeros((9, 9, 3), dtype=np.uint8)
        img[4, 4] = 255
        sal = contrast_saliency(img, 0)
        assert sal.values[4, 4] == 255
        assert sal.values[4, 4] == sal.values.max()

    def test_matches_scalar_reference(self):
        img = np.zeros((16, 16, 3), dtype=np.uint8)
        img[:, 8:] = 255
        for radius in (0, 1, 3):
            got = contrast_saliency(img, radius).values
            want = scalar_contrast_reference(img, radius)
            assert np.array_equal(got, want)

    def test_translation_consistent_on_interior(self):
        # both frames have the same mean color by construction
        base = np.zeros((24, 24, 3), dtype=np.uint8)
        base[4:8, 4:8] = 200
        shifted = np.zeros((24, 24, 3), dtype=np.uint8)
        shifted[9:13, 9:13] = 200
        r = 2
        a = contrast_saliency(base, r).values
        b = contrast_saliency(shifted, r).values
        assert np.array_equal(a[r + 2 : 14 - r, r + 2 : 14 - r],
                              b[r + 7 : 19 - r, r + 7 : 19 - r])


class TestLoadProposals:
    def test_valid_rows(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("# comment\n0,0,9,9,0.9\n5,5,20,20\n1,1,2,2,0.5\n")
        props = load_proposals(path, 64, 64, 2000)
        assert len(props) == 3
        assert props[0].box == BoundingBox(0, 0, 9, 9)
        assert props[1].score is None

    def test_invalid_box_names_line(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("0,0,9,9,0.9\n10,10,5,20,0.9\n")
        with pytest.raises(ProposalParseError, match=r":2:"):
            load_proposals(path, 64, 64, 2000)

    def test_parse_error_names_line(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("0,0,nine,9\n")
        with pytest.raises(ProposalParseError, match=r":1:"):
            load_proposals(path, 64, 64, 2000)

    def test_truncation_keeps_file_order(self, tmp_path):
        path = tmp_path / "p.csv"
        rows = [f"{i},0,{i + 1},1,0.5" for i in range(50)]
        path.write_text("\n".join(rows) + "\n")
        props = load_proposals(path, 100, 100, 20)
        assert len(props) == 20
        assert props[0].box.x1 == 0 and props[19].box.x1 == 19

    def test_boxes_clipped_to_image(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("0,0,99,99,0.9\n")
        props = load_proposals(path, 64, 48, 10)
        assert props[0].box == BoundingBox(0, 0, 63, 47)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_proposals(tmp_path / "none.csv", 10, 10, 10)


class TestAnchorProposals:
    def test_single_scale_grid(self):
        source = ProposalSource(kind="anchor-fallback", scales=(32,), aspects=(1.0,),
                                stride=32, max_proposals=2000)
        props = anchor_proposals(64, 64, source)
        boxes = {p.box.as_tuple() for p in props}
        assert boxes == {(0, 0, 31, 31), (32, 0, 63, 31), (0, 32, 31, 63), (32, 32, 63, 63)}

    def test_stride_beyond_image_single_center(self):
        source = ProposalSource(kind="anchor-fallback", scales=(16, 32), aspects=(1.0, 2.0),
                                stride=500, max_proposals=2000)
        props = anchor_proposals(64, 64, source)
        assert len(props) == 4  # |scales| x |aspects|, all around one center

    def test_clipping_dedups(self):
        source = ProposalSource(kind="anchor-fallback", scales=(64, 128), aspects=(1.0,),
                                stride=16, max_proposals=10000)
        props = anchor_proposals(32, 32, source)
        boxes = [p.box.as_tuple() for p in props]
        assert len(boxes) == len(set(boxes))

    def test_within_bounds(self):
        source = ProposalSource(kind="anchor-fallback", max_proposals=500)
        for p in anchor_proposals(100, 70, source):
            assert p.box.within(100, 70)

    def test_deterministic(self):
        source = ProposalSource(kind="anchor-fallback")
        a = anchor_proposals(96, 96, source)
        b = anchor_proposals(96, 96, source)
        assert a == b

    def test_saliency_scores(self):
        sal = SaliencyMap(np.full((64, 64), 255, dtype=np.uint8))
        source = ProposalSource(kind="anchor-fallback", scales=(32,), aspects=(1.0,),
                                stride=32)
        props = anchor_proposals(64, 64, source, saliency=sal)
        assert all(p.score == 1.0 for p in props)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            ProposalSource(stride=0)
        with pytest.raises(ValueError):
            ProposalSource(max_proposals=0)
        with pytest.raises(ValueError):
            SaliencySource(kind="magic")

"""
Testing classes for the reconstruction metrics.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from depth2face.metrics.recon_metrics import ReconMetrics, recon_metrics
from depth2face.tensor_core.tensor import ShapeException

image_sets = arrays(np.float64, (2, 4, 4), elements=st.floats(0, 255))


class TestReconMetrics:
    """Testing class for recon_metrics."""

    def test_identity(self):
        """Tests that an image set compared with itself has no error."""
        images = np.random.default_rng(0).integers(0, 256, (3, 8, 8, 3))
        metrics = recon_metrics(images, images)
        for name in ("l1_norm", "l2_norm", "abs_rel", "sq_rel", "rmse_linear", "rmse_log"):
            assert getattr(metrics, name) == 0
        assert metrics.rmse_scale_inv == 0
        assert (metrics.thr_1, metrics.thr_2, metrics.thr_3) == (1.0, 1.0, 1.0)

    def test_hand_values(self):
        """Tests prediction 2 against ground truth 1 on a 2x2 image."""
        metrics = recon_metrics(np.full((1, 2, 2), 2.0), np.full((1, 2, 2), 1.0))
        assert metrics.l1_norm == pytest.approx(1.0)
        assert metrics.l2_norm == pytest.approx(2.0)
        assert metrics.abs_rel == pytest.approx(1.0)
        assert metrics.sq_rel == pytest.approx(1.0)
        assert metrics.rmse_linear == pytest.approx(1.0)
        assert metrics.rmse_log == pytest.approx(math.log(2))
        assert metrics.rmse_scale_inv == pytest.approx(0.0, abs=1e-12)
        assert (metrics.thr_1, metrics.thr_2, metrics.thr_3) == (0.0, 1.0, 1.0)

    def test_scale_invariance(self):
        """Tests that a global scale leaves the scale-invariant error at zero."""
        truth = np.random.default_rng(1).uniform(10, 100, (2, 6, 6))
        assert recon_metrics(2.0 * truth, truth).rmse_scale_inv < 1e-9

    def test_clamping(self):
        """Tests that zeros are clamped to 1 before the logarithm."""
        metrics = recon_metrics(np.zeros((1, 2, 2)), np.ones((1, 2, 2)))
        assert metrics.rmse_log == 0 and metrics.thr_1 == 1.0

    def test_list_input(self):
        """Tests that a list of images equals the stacked array."""
        images = [np.full((4, 4, 3), 100), np.full((4, 4, 3), 120)]
        assert recon_metrics(images, images[::-1]) == recon_metrics(
            np.stack(images), np.stack(images[::-1])
        )

    def test_shape_mismatch(self):
        """Tests that image sets of different shape are rejected."""
        with pytest.raises(ShapeException):
            recon_metrics(np.zeros((2, 4, 4)), np.zeros((2, 4, 5)))

    def test_naive_oracle(self, naive_recon):
        """Tests agreement with a loop-based oracle on random 8x8 image sets."""
        rng = np.random.default_rng(2)
        for _ in range(50):
            pred = rng.integers(0, 256, (3, 8, 8)).astype(np.float64)
            gt = rng.integers(0, 256, (3, 8, 8)).astype(np.float64)
            expected = naive_recon(pred, gt)
            actual = recon_metrics(pred, gt).to_dict()
            for name, value in expected.items():
                assert actual[name] == pytest.approx(value, rel=1e-6, abs=1e-6), name

    def test_dict_round_trip(self):
        """Tests from_dict on the output of to_dict."""
        metrics = recon_metrics(np.full((1, 2, 2), 3.0), np.full((1, 2, 2), 5.0))
        assert ReconMetrics.from_dict(metrics.to_dict()) == metrics

    @settings(max_examples=50, deadline=None)
    @given(image_sets, image_sets)
    def test_symmetric_metrics(self, pred, gt):
        """Tests the metrics that do not depend on argument order."""
        forward, backward = recon_metrics(pred, gt), recon_metrics(gt, pred)
        for name in ("l1_norm", "l2_norm", "rmse_linear", "rmse_log", "thr_1", "thr_2", "thr_3"):
            assert getattr(forward, name) == pytest.approx(getattr(backward, name), abs=1e-9)

    @settings(max_examples=50, deadline=None)
    @given(image_sets, image_sets)
    def test_ranges(self, pred, gt):
        """Tests non-negative errors and monotone threshold accuracies."""
        metrics = recon_metrics(pred, gt)
        assert 0 <= metrics.thr_1 <= metrics.thr_2 <= metrics.thr_3 <= 1
        assert min(metrics.l1_norm, metrics.rmse_log, metrics.rmse_scale_inv) >= 0
        assert metrics.rmse_linear >= metrics.l1_norm - 1e-9

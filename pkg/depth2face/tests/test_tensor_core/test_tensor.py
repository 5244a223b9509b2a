"""
Testing classes for the Tensor and Rng objects.
"""
import numpy as np
import pytest

from depth2face.tensor_core.tensor import Depth2FaceException, Rng, ShapeException, Tensor


class TestTensor:
    """Testing class for the Tensor object."""

    def test_tensor_create(self):
        """Tests that data is stored as contiguous float32."""
        tensor = Tensor(np.arange(16, dtype=np.float64).reshape(1, 1, 4, 4))
        assert tensor.data.dtype == np.float32
        assert tensor.data.flags["C_CONTIGUOUS"]
        assert tensor.shape == (1, 1, 4, 4)
        assert tensor.grad is None

    def test_tensor_rank(self):
        """Tests that only vectors, matrices and image batches are accepted."""
        Tensor(np.zeros(3))
        Tensor(np.zeros((2, 3)))
        with pytest.raises(ShapeException):
            Tensor(np.zeros((2, 3, 4)))

    def test_accumulate_grad(self):
        """Tests that gradients add up and are checked for shape."""
        tensor = Tensor.zeros((2, 2))
        tensor.accumulate_grad(np.ones((2, 2)))
        tensor.accumulate_grad(np.ones((2, 2)))
        assert (tensor.grad == 2).all()
        with pytest.raises(ShapeException):
            tensor.accumulate_grad(np.ones((3, 2)))
        tensor.zero_grad()
        assert tensor.grad is None

    def test_detach_copies(self):
        """Tests that a detached tensor shares no memory."""
        tensor = Tensor.full((1, 1, 2, 2), 3.0)
        detached = tensor.detach()
        detached.data[...] = 0
        assert (tensor.data == 3).all()
        assert not tensor.equals(detached)

    def test_is_finite(self):
        """Tests detection of NaN and Inf."""
        assert Tensor.zeros((2,)).is_finite()
        assert not Tensor(np.array([0.0, np.nan])).is_finite()
        assert not Tensor(np.array([np.inf, 0.0])).is_finite()


class TestRng:
    """Testing class for the seeded random streams."""

    def test_same_seed_same_stream(self):
        """Tests reproducibility of a seed."""
        assert np.array_equal(Rng(7).normal((4, 4)), Rng(7).normal((4, 4)))

    def test_different_seeds(self):
        """Tests that seeds give different samples."""
        assert not np.array_equal(Rng(7).normal((4, 4)), Rng(8).normal((4, 4)))

    def test_children_independent(self):
        """Tests that child streams differ from each other and are reproducible."""
        first = Rng(3).child("generator").normal((8,))
        second = Rng(3).child("discriminator").normal((8,))
        assert not np.array_equal(first, second)
        assert np.array_equal(first, Rng(3).child("generator").normal((8,)))

    def test_normal_dtype(self):
        """Tests that normal draws are float32 with the requested spread."""
        draws = Rng(0).normal((10000,), std=0.02)
        assert draws.dtype == np.float32
        assert abs(float(draws.std()) - 0.02) < 0.002

    def test_negative_seed(self):
        """Tests that negative seeds are rejected."""
        with pytest.raises(Depth2FaceException):
            Rng(-1)

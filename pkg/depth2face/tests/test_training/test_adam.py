"""
Testing classes for the Adam optimizer.
"""
import numpy as np
import pytest

from depth2face.tensor_core.tensor import NumericException, ShapeException, Tensor
from depth2face.training.adam import AdamState, adam_step


class TestAdam:
    """Testing class for adam_step."""

    def test_first_step(self):
        """Tests that t=1 with gradient 1 moves each parameter by about -lr."""
        params = {"w": Tensor.full((3,), 1.0)}
        state = adam_step(params, {"w": np.ones(3)}, AdamState(lr=0.01))
        assert state.t == 1
        assert np.allclose(params["w"].data, 0.99, atol=1e-6)
        assert np.allclose(state.m["w"], 0.5) and np.allclose(state.v["w"], 0.001)

    def test_zero_gradient(self):
        """Tests that a zero gradient on a fresh state changes nothing."""
        params = {"w": Tensor(np.array([0.3, -0.7]))}
        original = params["w"].data.copy()
        adam_step(params, {"w": np.zeros(2)}, AdamState())
        assert np.array_equal(params["w"].data, original)

    def test_zero_learning_rate(self):
        """Tests that lr 0 keeps parameters but still updates the moments."""
        params = {"w": Tensor(np.array([0.3, -0.7]))}
        original = params["w"].data.copy()
        state = adam_step(params, {"w": np.array([1.0, 2.0])}, AdamState(lr=0.0))
        assert np.array_equal(params["w"].data, original)
        assert state.t == 1
        assert np.allclose(state.m["w"], [0.5, 1.0])

    def test_uses_gradient_buffers(self):
        """Tests that grads=None reads the tensors' gradient buffers."""
        tensor = Tensor.full((2,), 1.0)
        tensor.accumulate_grad(np.ones(2))
        untouched = Tensor.full((2,), 1.0)
        adam_step({"a": tensor, "b": untouched}, None, AdamState(lr=0.1))
        assert np.allclose(tensor.data, 0.9, atol=1e-6)
        assert np.array_equal(untouched.data, [1.0, 1.0])

    @pytest.mark.parametrize("bad", [np.nan, np.inf])
    def test_non_finite(self, bad):
        """Tests that NaN or Inf aborts before any parameter changes."""
        params = {"a": Tensor.full((2,), 1.0), "b": Tensor.full((2,), 1.0)}
        state = AdamState()
        with pytest.raises(NumericException):
            adam_step(params, {"a": np.ones(2), "b": np.array([1.0, bad])}, state)
        assert state.t == 0
        assert (params["a"].data == 1).all() and (params["b"].data == 1).all()

    def test_shape_mismatch(self):
        """Tests that gradients of the wrong shape are rejected."""
        with pytest.raises(ShapeException):
            adam_step({"a": Tensor.zeros((2,))}, {"a": np.zeros(3)}, AdamState())

    def test_state_round_trip(self):
        """Tests that a state restored from its dict continues identically."""
        params = {"w": Tensor(np.array([0.1, 0.2]))}
        state = adam_step(params, {"w": np.array([0.5, -0.5])}, AdamState())
        restored = AdamState.from_dict(state.to_dict())
        copy = {"w": Tensor(params["w"].data.copy())}
        adam_step(params, {"w": np.array([0.2, 0.1])}, state)
        adam_step(copy, {"w": np.array([0.2, 0.1])}, restored)
        assert params["w"].equals(copy["w"])

"""Module for the elementwise activation layer."""
import numpy as np

from depth2face.models.layers.network_layer import NetworkLayer
from depth2face.tensor_core import functional
from depth2face.tensor_core.tensor import Tensor


class ActivationLayer(NetworkLayer):
    """Leaky ReLU, ReLU, Tanh or Sigmoid."""

    def _forward(self, inputs: Tensor, training: bool, track_running_stats: bool) -> Tensor:
        return functional.activation(inputs, self.spec.activation, self.spec.alpha)

    def _backward(self, grad: np.ndarray) -> np.ndarray:
        return functional.activation_backward(
            grad, self.inputs, self.outputs, self.spec.activation, self.spec.alpha
        )

"""Module for the layer turning feature maps into feature rows."""
import numpy as np

from depth2face.models.layers.network_layer import NetworkLayer
from depth2face.tensor_core.tensor import Tensor


class FlattenLayer(NetworkLayer):
    """Reshapes (n, c, h, w) into (n, c*h*w)."""

    def _forward(self, inputs: Tensor, training: bool, track_running_stats: bool) -> Tensor:
        return Tensor(inputs.data.reshape(inputs.shape[0], -1))

    def _backward(self, grad: np.ndarray) -> np.ndarray:
        return grad.reshape(self.inputs.shape)

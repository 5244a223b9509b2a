"""Module for the batch normalization layer."""
from typing import Dict

import numpy as np

from depth2face.models.layers.layer_spec import LayerSpec
from depth2face.models.layers.network_layer import NetworkLayer
from depth2face.tensor_core import functional
from depth2face.tensor_core.tensor import Rng, Tensor


class BatchNormLayer(NetworkLayer):
    """Per-channel batch normalization with learned scale and shift."""

    def __init__(self, spec: LayerSpec) -> None:
        super().__init__(spec)
        self.gamma = Tensor.full((spec.in_channels,), 1.0)
        self.beta = Tensor.zeros((spec.in_channels,))
        self.state = functional.BatchNormState(spec.in_channels)

    def parameters(self) -> Dict[str, Tensor]:
        return {"gamma": self.gamma, "beta": self.beta}

    def init_parameters(self, rng: Rng) -> None:
        self.gamma.data[...] = 1
        self.beta.data[...] = 0

    def _forward(self, inputs: Tensor, training: bool, track_running_stats: bool) -> Tensor:
        return functional.batch_norm2d(
            inputs,
            self.gamma,
            self.beta,
            self.state,
            training,
            track_running_stats=track_running_stats,
        )

    def _backward(self, grad: np.ndarray) -> np.ndarray:
        return functional.batch_norm2d_backward(
            grad, self.inputs, self.gamma, self.beta, self.state, self.training
        )

"""Module for the fully connected layer."""
from typing import Dict

import numpy as np

from depth2face.models import model_options
from depth2face.models.layers.layer_spec import LayerSpec
from depth2face.models.layers.network_layer import NetworkLayer
from depth2face.tensor_core import functional
from depth2face.tensor_core.tensor import Rng, Tensor


class AffineLayer(NetworkLayer):
    """Matrix product with an (in_features, filters) weight plus bias."""

    def __init__(self, spec: LayerSpec) -> None:
        super().__init__(spec)
        self.weight = Tensor.zeros((spec.in_channels, spec.filters))
        self.bias = Tensor.zeros((spec.filters,))

    def parameters(self) -> Dict[str, Tensor]:
        return {"weight": self.weight, "bias": self.bias}

    def init_parameters(self, rng: Rng) -> None:
        self.weight.data[...] = rng.normal(self.weight.shape, model_options.INIT_STD)
        self.bias.data[...] = 0

    def _forward(self, inputs: Tensor, training: bool, track_running_stats: bool) -> Tensor:
        return functional.affine(inputs, self.weight, self.bias)

    def _backward(self, grad: np.ndarray) -> np.ndarray:
        return functional.affine_backward(grad, self.inputs, self.weight, self.bias)

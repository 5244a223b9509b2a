"""Module for the fractionally strided (transposed) convolution layer."""
from typing import Dict

import numpy as np

from depth2face.models import model_options
from depth2face.models.layers.layer_spec import LayerSpec
from depth2face.models.layers.network_layer import NetworkLayer
from depth2face.tensor_core import functional
from depth2face.tensor_core.tensor import Rng, Tensor


class ConvTransposeLayer(NetworkLayer):
    """Transposed convolution with an (in_channels, filters, k, k) kernel and a bias."""

    def __init__(self, spec: LayerSpec) -> None:
        super().__init__(spec)
        self.weight = Tensor.zeros((spec.in_channels, spec.filters, spec.kernel, spec.kernel))
        self.bias = Tensor.zeros((spec.filters,))

    def parameters(self) -> Dict[str, Tensor]:
        return {"weight": self.weight, "bias": self.bias}

    def init_parameters(self, rng: Rng) -> None:
        self.weight.data[...] = rng.normal(self.weight.shape, model_options.INIT_STD)
        self.bias.data[...] = 0

    def _forward(self, inputs: Tensor, training: bool, track_running_stats: bool) -> Tensor:
        return functional.conv_transpose2d(
            inputs,
            self.weight,
            self.bias,
            self.spec.stride,
            self.spec.padding,
            self.spec.output_padding,
        )

    def _backward(self, grad: np.ndarray) -> np.ndarray:
        return functional.conv_transpose2d_backward(
            grad, self.inputs, self.weight, self.bias, self.spec.stride, self.spec.padding
        )

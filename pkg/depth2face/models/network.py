"""Module for representing a feed-forward network in Python."""
from collections import OrderedDict
from typing import Dict, List, Optional

import numpy as np

from depth2face.models.layers import (
    BatchNormLayer,
    LayerSpec,
    NetworkLayer,
    build_layer,
)
from depth2face.tensor_core.functional import BatchNormState
from depth2face.tensor_core.tensor import Rng, ShapeException, Tensor


class Network:
    """Object representing a network as an ordered list of layers.
    Functions as the head of the chain: forward runs the layers in order,
    backward runs them in reverse. Single writer: forward, backward and
    parameter updates must not interleave."""

    def __init__(self, name: str, specs: List[LayerSpec]) -> None:
        """Creates a Network with zero-valued parameters from layer specs."""
        if not specs:
            raise ShapeException(f"Network {name} needs at least one layer")
        self.name = name
        self.__check_channels(specs)
        self.layers: List[NetworkLayer] = []
        for index, spec in enumerate(specs):
            layer = build_layer(spec)
            layer.network = self
            layer.index = index
            self.layers.append(layer)

    def __check_channels(self, specs: List[LayerSpec]) -> None:
        """Tests that adjacent layers agree on their channel counts."""
        channels = specs[0].in_channels
        for index, spec in enumerate(specs):
            if spec.kind == "flatten":
                # Feature count depends on the spatial size, checked at run time
                channels = None
            elif spec.kind in ("conv", "conv_transpose", "batchnorm", "affine"):
                if channels is not None and spec.in_channels != channels:
                    raise ShapeException(
                        f"Layer {index} ({spec!r}) of {self.name} expects {spec.in_channels} "
                        f"channels but receives {channels}"
                    )
                if spec.out_channels is not None:
                    channels = spec.out_channels

    # RUNNING
    def check_input(self, inputs: Tensor) -> None:
        """Tests the input contract of the network, none for a generic network."""

    def forward(
        self, inputs: Tensor, training: bool = True, track_running_stats: bool = True
    ) -> Tensor:
        """Runs all layers. In eval mode batch norm uses its running statistics;
        with track_running_stats False train mode leaves them untouched."""
        self.check_input(inputs)
        outputs = inputs
        for layer in self.layers:
            outputs = layer.forward(outputs, training, track_running_stats)
        return outputs

    def backward(self, grad: np.ndarray) -> np.ndarray:
        """Backpropagates grad through the cached forward pass.
        Accumulates parameter gradients and returns the input gradient."""
        for layer in reversed(self.layers):
            grad = layer.backward(grad)
        return grad

    def zero_grad(self) -> None:
        """Drops the gradient buffers of all parameters."""
        for parameter in self.parameters().values():
            parameter.zero_grad()

    def clear_cache(self) -> None:
        """Drops the cached forward pass of every layer."""
        for layer in self.layers:
            layer.clear_cache()

    # PARAMETERS & STATE
    def parameters(self) -> Dict[str, Tensor]:
        """Returns all trainable Tensors, named <layer index>.<parameter>."""
        parameters = OrderedDict()
        for layer in self.layers:
            for name, tensor in layer.parameters().items():
                parameters[f"{layer.index}.{name}"] = tensor
        return parameters

    def running_states(self) -> Dict[str, BatchNormState]:
        """Returns the batch norm states, named by layer index."""
        return OrderedDict(
            (str(layer.index), layer.state)
            for layer in self.layers
            if isinstance(layer, BatchNormLayer)
        )

    def has_running_stats(self) -> bool:
        """Tests whether every batch norm layer has seen at least one train batch."""
        return all(state.initialized for state in self.running_states().values())

    def parameter_count(self) -> int:
        """Returns the number of trainable scalars."""
        return sum(tensor.size for tensor in self.parameters().values())

    @property
    def layer_specs(self) -> List[LayerSpec]:
        return [layer.spec for layer in self.layers]

    # HELPERS
    def get_all_layers(self) -> List[NetworkLayer]:
        """Get all layers in order."""
        return list(self.layers)

    def get_single_layer(self, index: int) -> Optional[NetworkLayer]:
        """Get a single layer based on its index."""
        if 0 <= index < len(self.layers):
            return self.layers[index]
        return None

    def __repr__(self) -> str:
        return f"{self.name}[{', '.join(repr(spec) for spec in self.layer_specs)}]"


def init_weights(network: Network, rng: Rng) -> Network:
    """Draws conv and affine weights from Normal(0, 0.02), zeroes biases and
    resets batch norm to identity, in layer order from a single stream."""
    for layer in network.layers:
        layer.init_parameters(rng)
    return network

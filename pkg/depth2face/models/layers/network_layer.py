"""Module for the base class of all network layers."""
import typing
from typing import Dict, Optional

import numpy as np

from depth2face.models.layers.layer_spec import LayerSpec
from depth2face.tensor_core.tensor import Rng, StateException, Tensor

if typing.TYPE_CHECKING:
    from depth2face.models.network import Network


class NetworkLayer:
    """Object representing one layer of a network.
    Caches its last input and output so backward can run without recomputation."""

    def __init__(self, spec: LayerSpec) -> None:
        """Creates a NetworkLayer from its spec."""
        self.spec = spec
        self.network: Optional["Network"] = None
        self.index: Optional[int] = None
        self.inputs: Optional[Tensor] = None
        self.outputs: Optional[Tensor] = None
        self.training = True

    def parameters(self) -> Dict[str, Tensor]:
        """Returns the trainable Tensors of this layer by name."""
        return {}

    def init_parameters(self, rng: Rng) -> None:
        """Initialises the parameters of this layer."""

    def forward(
        self, inputs: Tensor, training: bool = True, track_running_stats: bool = True
    ) -> Tensor:
        """Runs the layer and caches what backward needs."""
        self.inputs = inputs
        self.training = training
        self.outputs = self._forward(inputs, training, track_running_stats)
        return self.outputs

    def backward(self, grad: np.ndarray) -> np.ndarray:
        """Accumulates parameter gradients, returns the input gradient."""
        if self.inputs is None:
            raise StateException(f"Layer {self} has no cached forward pass to differentiate")
        return self._backward(grad)

    def clear_cache(self) -> None:
        """Drops the cached forward pass."""
        self.inputs = None
        self.outputs = None

    def _forward(self, inputs: Tensor, training: bool, track_running_stats: bool) -> Tensor:
        raise NotImplementedError

    def _backward(self, grad: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{self.index}:{self.spec!r}"

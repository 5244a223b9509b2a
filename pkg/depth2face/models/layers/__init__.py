"""Exports the network layers for easy import"""
from .layer_spec import LayerSpec, LAYER_KINDS
from .network_layer import NetworkLayer
from .conv_layer import ConvLayer
from .conv_transpose_layer import ConvTransposeLayer
from .batch_norm_layer import BatchNormLayer
from .activation_layer import ActivationLayer
from .affine_layer import AffineLayer
from .flatten_layer import FlattenLayer

LAYER_CLASSES = {
    "conv": ConvLayer,
    "conv_transpose": ConvTransposeLayer,
    "batchnorm": BatchNormLayer,
    "activation": ActivationLayer,
    "affine": AffineLayer,
    "flatten": FlattenLayer,
}


def build_layer(spec: LayerSpec) -> NetworkLayer:
    """Creates the layer object for a spec."""
    return LAYER_CLASSES[spec.kind](spec)

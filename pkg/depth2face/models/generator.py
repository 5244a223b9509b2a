"""Module building the depth-to-RGB generator."""
from typing import List

from depth2face.models import model_options
from depth2face.models.layers import LayerSpec
from depth2face.models.network import Network, init_weights
from depth2face.tensor_core.tensor import ConfigException, Rng, ShapeException, Tensor


def conv_block(
    in_channels: int, filters: int, stride: int, activation: str, batch_norm: bool = True
) -> List[LayerSpec]:
    """Returns a 5x5 convolution, optional batch norm and an activation."""
    specs = [
        LayerSpec(
            kind="conv",
            in_channels=in_channels,
            filters=filters,
            kernel=model_options.KERNEL_SIZE,
            stride=stride,
            padding=model_options.PADDING,
        )
    ]
    if batch_norm:
        specs.append(LayerSpec(kind="batchnorm", in_channels=filters))
    specs.append(LayerSpec(kind="activation", activation=activation))
    return specs


def check_base_filters(base_filters: int) -> None:
    """The decoder halves base_filters once, so it must be even."""
    if base_filters < 2 or base_filters % 2:
        raise ConfigException(f"base_filters must be an even number >= 2, got {base_filters}")


def generator_specs(base_filters: int = model_options.BASE_FILTERS) -> List[LayerSpec]:
    """Layer schedule of the generator.
    Encoder: three stride 1 convolutions and one stride 2 convolution (64 -> 512
    filters at base 64), batch norm + leaky ReLU after each. Decoder: three
    stride 1 convolutions and one stride 1/2 transposed convolution (256 -> 32),
    batch norm + ReLU after each, then a final convolution to RGB with tanh.
    No skip connections."""
    check_base_filters(base_filters)
    encoder = [base_filters, 2 * base_filters, 4 * base_filters, 8 * base_filters]
    decoder = [4 * base_filters, 2 * base_filters, base_filters]
    specs = []
    channels = model_options.DEPTH_CHANNELS
    for index, filters in enumerate(encoder):
        stride = 2 if index == len(encoder) - 1 else 1
        specs += conv_block(channels, filters, stride, "leaky_relu")
        channels = filters
    for filters in decoder:
        specs += conv_block(channels, filters, 1, "relu")
        channels = filters
    specs += [
        LayerSpec(
            kind="conv_transpose",
            in_channels=channels,
            filters=base_filters // 2,
            kernel=model_options.KERNEL_SIZE,
            stride=2,
            padding=model_options.PADDING,
            output_padding=model_options.OUTPUT_PADDING,
        ),
        LayerSpec(kind="batchnorm", in_channels=base_filters // 2),
        LayerSpec(kind="activation", activation="relu"),
    ]
    specs += conv_block(
        base_filters // 2, model_options.RGB_CHANNELS, 1, "tanh", batch_norm=False
    )
    return specs


class GeneratorNet(Network):
    """Generator mapping (n, 1, 64, 64) depth maps to (n, 3, 64, 64) RGB images in (-1, 1)."""

    def check_input(self, inputs: Tensor) -> None:
        expected = (
            model_options.DEPTH_CHANNELS,
            model_options.IMAGE_SIZE,
            model_options.IMAGE_SIZE,
        )
        if inputs.data.ndim != 4 or inputs.shape[1:] != expected:
            raise ShapeException(
                f"Generator expects (n, {expected[0]}, {expected[1]}, {expected[2]}) "
                f"depth maps, got {inputs.shape}"
            )


def build_generator(rng: Rng, base_filters: int = model_options.BASE_FILTERS) -> GeneratorNet:
    """Builds and initialises the generator."""
    generator = GeneratorNet("generator", generator_specs(base_filters))
    return init_weights(generator, rng)

"""Module building the real-versus-generated discriminator."""
from typing import List

from depth2face.models import model_options
from depth2face.models.generator import check_base_filters, conv_block
from depth2face.models.layers import LayerSpec
from depth2face.models.network import Network, init_weights
from depth2face.tensor_core.tensor import Rng, ShapeException, Tensor

# 64 -> 32 -> 16 -> 8 -> 4
HEAD_SIZE = model_options.IMAGE_SIZE // 16


def discriminator_specs(base_filters: int = model_options.BASE_FILTERS) -> List[LayerSpec]:
    """Layer schedule of the discriminator.
    Four stride 2 convolutions doubling the filters (64 -> 512 at base 64) with
    leaky ReLU, batch norm on all but the first, then flatten, one affine
    reduction and a sigmoid."""
    check_base_filters(base_filters)
    specs = []
    channels = model_options.RGB_CHANNELS
    for index, filters in enumerate(
        [base_filters, 2 * base_filters, 4 * base_filters, 8 * base_filters]
    ):
        specs += conv_block(channels, filters, 2, "leaky_relu", batch_norm=index > 0)
        channels = filters
    specs += [
        LayerSpec(kind="flatten"),
        LayerSpec(kind="affine", in_channels=channels * HEAD_SIZE * HEAD_SIZE, filters=1),
        LayerSpec(kind="activation", activation="sigmoid"),
    ]
    return specs


class DiscriminatorNet(Network):
    """Discriminator mapping (n, 3, 64, 64) RGB images to (n, 1) probabilities of being real."""

    def check_input(self, inputs: Tensor) -> None:
        expected = (
            model_options.RGB_CHANNELS,
            model_options.IMAGE_SIZE,
            model_options.IMAGE_SIZE,
        )
        if inputs.data.ndim != 4 or inputs.shape[1:] != expected:
            raise ShapeException(
                f"Discriminator expects (n, {expected[0]}, {expected[1]}, {expected[2]}) "
                f"images, got {inputs.shape}"
            )


def build_discriminator(
    rng: Rng, base_filters: int = model_options.BASE_FILTERS
) -> DiscriminatorNet:
    """Builds and initialises the discriminator."""
    discriminator = DiscriminatorNet("discriminator", discriminator_specs(base_filters))
    return init_weights(discriminator, rng)

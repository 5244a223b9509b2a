from typing import Callable

import numpy as np
import pytest

from depth2face.tensor_core.tensor import Rng, Tensor


def naive_conv2d(inputs: np.ndarray, kernel: np.ndarray, stride: int, pad: int) -> np.ndarray:
    """Direct sliding-window cross-correlation in float64."""
    padded = np.pad(inputs.astype(np.float64), ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    n, _, height, width = padded.shape
    filters, _, size, _ = kernel.shape
    out_h = (height - size) // stride + 1
    out_w = (width - size) // stride + 1
    out = np.zeros((n, filters, out_h, out_w))
    for b in range(n):
        for f in range(filters):
            for i in range(out_h):
                for j in range(out_w):
                    top, left = i * stride, j * stride
                    window = padded[b, :, top : top + size, left : left + size]
                    out[b, f, i, j] = np.sum(window * kernel[f])
    return out


@pytest.fixture(scope="session")
def conv_oracle() -> Callable:
    """Independent convolution used to check conv2d."""
    return naive_conv2d


@pytest.fixture()
def rng() -> Rng:
    """Fresh random stream for one test."""
    return Rng(1234)


@pytest.fixture()
def random_tensor(rng) -> Callable:
    """Draws standard normal Tensors of a given shape."""

    def draw(*shape) -> Tensor:
        return Tensor(rng.normal(shape))

    return draw

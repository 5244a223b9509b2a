"""Module for normalisation, resizing and binarisation of depth and RGB images."""
from typing import Union

import numpy as np

from depth2face.data import data_options
from depth2face.tensor_core import tensor_options
from depth2face.tensor_core.tensor import DataException, Tensor


def resize_bilinear(image: np.ndarray, height: int, width: int) -> np.ndarray:
    """Bilinear resize of the last two axes with corner-aligned sampling:
    output pixel i samples source position i * (in - 1) / (out - 1)."""
    image = np.asarray(image, dtype=np.float64)
    if image.shape[-2:] == (height, width):
        return image.copy()
    return _resize_axis(_resize_axis(image, height, axis=-2), width, axis=-1)


def _resize_axis(image: np.ndarray, size: int, axis: int) -> np.ndarray:
    source = image.shape[axis]
    if size == 1 or source == 1:
        positions = np.zeros(size)
    else:
        positions = np.arange(size) * ((source - 1) / (size - 1))
    lower = np.floor(positions).astype(int)
    upper = np.minimum(lower + 1, source - 1)
    fraction = positions - lower
    shape = [1] * image.ndim
    shape[axis] = size
    fraction = fraction.reshape(shape)
    low = np.take(image, lower, axis=axis)
    high = np.take(image, upper, axis=axis)
    # a + f (b - a) keeps constant regions exact
    return low + fraction * (high - low)


def normalize_depth(depth: np.ndarray, d_min: float, d_max: float) -> np.ndarray:
    """Maps sensor depth linearly from [d_min, d_max] to [-1, 1] with clamping.
    Invalid (0) measurements become -1."""
    if not d_max - d_min > 0:
        raise DataException(f"Depth range must satisfy d_max > d_min, got [{d_min}, {d_max}]")
    depth = np.asarray(depth, dtype=np.float64)
    normalized = np.clip(2.0 * (depth - d_min) / (d_max - d_min) - 1.0, -1.0, 1.0)
    return np.where(depth == data_options.INVALID_DEPTH, -1.0, normalized)


def denormalize_depth(depth: np.ndarray, d_min: float, d_max: float) -> np.ndarray:
    """Maps [-1, 1] back to 16-bit millimeters, rounded to the nearest unit."""
    millimeters = (np.asarray(depth, dtype=np.float64) + 1.0) / 2.0 * (d_max - d_min) + d_min
    return np.clip(round_half_away(millimeters), 0, np.iinfo(np.uint16).max).astype(np.uint16)


def normalize_rgb(rgb: np.ndarray) -> np.ndarray:
    """Maps 8-bit intensities [0, 255] to [-1, 1]."""
    return np.asarray(rgb, dtype=np.float64) / 127.5 - 1.0


def round_half_away(values: np.ndarray) -> np.ndarray:
    """Rounds to the nearest integer, halves away from zero."""
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def denormalize_image(image: Union[Tensor, np.ndarray]) -> np.ndarray:
    """Maps [-1, 1] to 8-bit [0, 255], rounding half away from zero and clamping."""
    data = image.data if isinstance(image, Tensor) else np.asarray(image)
    scaled = (data.astype(np.float64) + 1.0) * 127.5
    return np.clip(round_half_away(scaled), 0, 255).astype(np.uint8)


def binarize_depth(
    depth: Union[Tensor, np.ndarray], threshold: float = data_options.BINARY_THRESHOLD
):
    """Foreground mask of a normalised depth map: > threshold -> +1, else -1.
    Returns the same type it was given."""
    data = depth.data if isinstance(depth, Tensor) else np.asarray(depth)
    binary = np.where(data > threshold, 1.0, -1.0).astype(tensor_options.DTYPE)
    if isinstance(depth, Tensor):
        return Tensor(binary)
    return binary

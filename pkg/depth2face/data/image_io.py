"""Module for reading and writing depth and RGB PNG files."""
import pathlib
from typing import Dict, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from depth2face.tensor_core.tensor import DataException

PathLike = Union[str, pathlib.Path]
# Pillow reports single-channel 16-bit PNGs under one of these modes
DEPTH_MODES = ("I;16", "I;16B", "I;16L", "I")
IMAGE_SUFFIX = ".png"


def _open(path: PathLike) -> Image.Image:
    try:
        image = Image.open(path)
        image.load()
    except (OSError, UnidentifiedImageError) as error:
        raise DataException(f"Cannot read image {path}: {error}") from error
    return image


def read_depth_png(path: PathLike) -> np.ndarray:
    """Returns a 16-bit single-channel PNG as a (h, w) uint16 array of millimeters."""
    image = _open(path)
    if image.mode not in DEPTH_MODES:
        raise DataException(
            f"{path} is not a single-channel 16-bit depth PNG (mode {image.mode})"
        )
    depth = np.array(image)
    if depth.min() < 0 or depth.max() > np.iinfo(np.uint16).max:
        raise DataException(f"{path} holds values outside the 16-bit range")
    return depth.astype(np.uint16)


def read_rgb_png(path: PathLike) -> np.ndarray:
    """Returns an 8-bit 3-channel PNG as a (h, w, 3) uint8 array."""
    image = _open(path)
    if image.mode != "RGB":
        raise DataException(f"{path} is not an 8-bit RGB PNG (mode {image.mode})")
    return np.array(image, dtype=np.uint8)


def _save(image: Image.Image, path: PathLike) -> None:
    try:
        image.save(path, format="PNG")
    except OSError as error:
        raise DataException(f"Cannot write image {path}: {error}") from error


def write_depth_png(path: PathLike, depth: np.ndarray) -> None:
    """Writes a (h, w) uint16 array as a 16-bit grayscale PNG."""
    depth = np.ascontiguousarray(depth, dtype=np.uint16)
    _save(Image.fromarray(depth), path)


def save_rgb_png(path: PathLike, rgb: np.ndarray) -> None:
    """Writes a (h, w, 3) or (3, h, w) uint8 array as an RGB PNG."""
    rgb = np.asarray(rgb, dtype=np.uint8)
    if rgb.ndim == 3 and rgb.shape[0] == 3 and rgb.shape[-1] != 3:
        rgb = rgb.transpose(1, 2, 0)
    if rgb.ndim != 3 or rgb.shape[-1] != 3:
        raise DataException(f"Cannot write image of shape {rgb.shape} as RGB PNG")
    _save(Image.fromarray(np.ascontiguousarray(rgb)), path)


def load_image_dir(directory: PathLike) -> Dict[str, np.ndarray]:
    """Returns every RGB PNG of a directory as id (file stem) -> (h, w, 3) uint8 array."""
    directory = pathlib.Path(directory)
    if not directory.is_dir():
        raise DataException(f"{directory} is not a directory")
    return {
        path.stem: read_rgb_png(path)
        for path in sorted(directory.iterdir())
        if path.suffix.lower() == IMAGE_SUFFIX
    }

"""Module for the synthetic paired dataset used as a ground-truth oracle.

Depth maps are normalised sums of random radial bumps. The RGB image of a
depth map is a pure function of it: a fixed per-channel colormap of the depth
value, modulated by Lambertian shading computed from the depth gradient.
"""
import json
import pathlib
import sys
from dataclasses import asdict, dataclass
from typing import List, Union

import numpy as np
from tqdm import tqdm

from depth2face.data import data_options
from depth2face.data.image_io import save_rgb_png, write_depth_png
from depth2face.data.manifest import DatasetManifest, ManifestEntry
from depth2face.data.paired_sample import PairedSample
from depth2face.data.preprocessing import denormalize_depth, denormalize_image
from depth2face.tensor_core import tensor_options
from depth2face.tensor_core.tensor import ConfigException, DataException, Rng, Tensor

# Quadratic coefficients (c0, c1, c2) per channel: value = c0 + c1 d + c2 d^2
COLORMAPS = {
    "skin": np.array(
        [[0.55, 0.35, -0.10], [0.10, 0.45, -0.15], [-0.25, 0.50, -0.05]]
    ),
    "thermal": np.array(
        [[0.10, 0.85, 0.05], [-0.40, 0.10, 0.60], [0.20, -0.70, 0.10]]
    ),
}
LIGHT = np.array([-0.4, -0.4, 0.82])
# Height of the relief relative to the image width when computing normals
RELIEF = 0.25


@dataclass
class SynthSpec:
    """Settings of a synthetic dataset. Same spec gives a bitwise-identical dataset."""

    seed: int = 0
    count: int = data_options.SYNTH_COUNT
    blob_min: int = data_options.BLOB_MIN
    blob_max: int = data_options.BLOB_MAX
    colormap: str = data_options.COLORMAP
    shading: float = data_options.SHADING
    size: int = data_options.IMAGE_SIZE

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigException(f"A synthetic dataset needs count >= 1, got {self.count}")
        if self.seed < 0:
            raise ConfigException(f"Seed must be >= 0, got {self.seed}")
        if not 1 <= self.blob_min <= self.blob_max:
            raise ConfigException(
                f"Blob range must satisfy 1 <= min <= max, got [{self.blob_min}, {self.blob_max}]"
            )
        if self.colormap not in COLORMAPS:
            raise ConfigException(
                f"{self.colormap} is not a colormap. Use one of {sorted(COLORMAPS)}."
            )
        if not 0 <= self.shading <= 1:
            raise ConfigException(f"Shading strength must lie in [0, 1], got {self.shading}")
        if self.size < 2:
            raise ConfigException(f"Image size must be >= 2, got {self.size}")

    def to_dict(self) -> dict:
        return asdict(self)


def colormap_oracle(
    depth: np.ndarray,
    colormap: str = data_options.COLORMAP,
    shading: float = data_options.SHADING,
) -> np.ndarray:
    """Returns the (3, h, w) float32 RGB image in [-1, 1] of a (h, w) normalised depth map."""
    depth = np.asarray(depth, dtype=np.float64)
    if depth.ndim != 2:
        raise DataException(f"The colormap oracle takes a (h, w) depth map, got {depth.shape}")
    coefficients = COLORMAPS[colormap]
    base = (
        coefficients[:, 0, None, None]
        + coefficients[:, 1, None, None] * depth
        + coefficients[:, 2, None, None] * depth**2
    )
    slope_y, slope_x = np.gradient(depth * (RELIEF * depth.shape[1]))
    normals = np.stack([-slope_x, -slope_y, np.ones_like(depth)])
    normals /= np.sqrt((normals**2).sum(axis=0))
    light = LIGHT / np.linalg.norm(LIGHT)
    lambert = np.clip(np.tensordot(light, normals, axes=1), 0.0, 1.0)
    shade = 1.0 - shading + shading * lambert
    intensity = (base + 1.0) / 2.0 * shade
    return np.clip(2.0 * intensity - 1.0, -1.0, 1.0).astype(tensor_options.DTYPE)


def synthesize_depth(rng: Rng, spec: SynthSpec) -> np.ndarray:
    """Returns a (size, size) float32 depth map in [-1, 1] built from random radial bumps."""
    axis = np.linspace(-1.0, 1.0, spec.size)
    grid_y, grid_x = np.meshgrid(axis, axis, indexing="ij")
    height = np.zeros((spec.size, spec.size))
    for _ in range(int(rng.integers(spec.blob_min, spec.blob_max + 1))):
        center_y, center_x = rng.uniform(-0.6, 0.6, 2)
        width = rng.uniform(0.15, 0.5)
        amplitude = rng.uniform(0.2, 1.0)
        distance = (grid_y - center_y) ** 2 + (grid_x - center_x) ** 2
        height += amplitude * np.exp(-distance / (2.0 * width**2))
    spread = height.max() - height.min()
    if spread <= 0:
        return np.zeros_like(height, dtype=tensor_options.DTYPE)
    return (2.0 * (height - height.min()) / spread - 1.0).astype(tensor_options.DTYPE)


def split_ids(count: int, seed: int) -> List[str]:
    """Returns the split of every sample index, 80/20 train/test by seeded draw."""
    order = Rng(seed).child("split").permutation(count)
    train_count = max(1, int(np.floor(data_options.TRAIN_FRACTION * count + 0.5)))
    splits = ["test"] * count
    for index in order[:train_count]:
        splits[int(index)] = "train"
    return splits


def synthesize_dataset(spec: SynthSpec, quiet: bool = True) -> List[PairedSample]:
    """Builds the synthetic dataset of a spec."""
    rng = Rng(spec.seed)
    splits = split_ids(spec.count, spec.seed)
    samples = []
    for index in tqdm(range(spec.count), desc="Synthesising pairs", disable=quiet):
        depth = synthesize_depth(rng.child("sample", index), spec)
        rgb = colormap_oracle(depth, spec.colormap, spec.shading)
        samples.append(
            PairedSample(
                depth=Tensor(depth[np.newaxis, np.newaxis]),
                rgb=Tensor(rgb[np.newaxis]),
                id=f"synth_{index:05d}",
                split=splits[index],
            )
        )
    return samples


def write_dataset(
    samples: List[PairedSample],
    out_dir: Union[str, pathlib.Path],
    d_min: float = data_options.D_MIN,
    d_max: float = data_options.D_MAX,
    quiet: bool = True,
) -> str:
    """Writes depth/<id>.png (16-bit millimeters), rgb/<id>.png (8-bit) and the
    manifest. Identical samples give byte-identical files. Returns the manifest path."""
    out_dir = pathlib.Path(out_dir)
    try:
        (out_dir / "depth").mkdir(parents=True, exist_ok=True)
        (out_dir / "rgb").mkdir(parents=True, exist_ok=True)
    except OSError as error:
        raise DataException(f"Cannot create dataset directory {out_dir}: {error}") from error
    if not quiet:
        print(f"Writing {len(samples)} pairs to {out_dir}", flush=True, file=sys.stderr)
    entries = []
    for sample in tqdm(samples, desc="Writing pairs", disable=quiet):
        depth_path = out_dir / "depth" / f"{sample.id}.png"
        rgb_path = out_dir / "rgb" / f"{sample.id}.png"
        write_depth_png(depth_path, denormalize_depth(sample.depth.data[0, 0], d_min, d_max))
        save_rgb_png(rgb_path, denormalize_image(sample.rgb.data[0]))
        entries.append(ManifestEntry(sample.id, depth_path, rgb_path, sample.split))
    return DatasetManifest(entries, d_min, d_max).save(out_dir / data_options.MANIFEST_NAME)


def write_spec(spec: SynthSpec, path: Union[str, pathlib.Path]) -> None:
    """Stores the spec next to a generated dataset."""
    text = json.dumps(spec.to_dict(), indent=2, sort_keys=True)
    try:
        pathlib.Path(path).write_text(text + "\n")
    except OSError as error:
        raise DataException(f"Cannot write synthetic spec {path}: {error}") from error

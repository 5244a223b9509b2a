"""Module for representing paired depth/RGB frames in Python."""
from dataclasses import dataclass
from typing import List

import numpy as np

from depth2face.data import data_options
from depth2face.models import model_options
from depth2face.tensor_core.tensor import DataException, ShapeException, Tensor

DEPTH_SHAPE = (1, model_options.DEPTH_CHANNELS, data_options.IMAGE_SIZE, data_options.IMAGE_SIZE)
RGB_SHAPE = (1, model_options.RGB_CHANNELS, data_options.IMAGE_SIZE, data_options.IMAGE_SIZE)


@dataclass
class PairedSample:
    """Object representing one frame: normalised depth and RGB of the same id."""

    depth: Tensor
    rgb: Tensor
    id: str
    split: str = "train"

    def __post_init__(self) -> None:
        if self.depth.shape != DEPTH_SHAPE:
            raise ShapeException(
                f"Depth of {self.id} must be {DEPTH_SHAPE}, got {self.depth.shape}"
            )
        if self.rgb.shape != RGB_SHAPE:
            raise ShapeException(f"RGB of {self.id} must be {RGB_SHAPE}, got {self.rgb.shape}")
        if self.split not in data_options.SPLITS:
            raise DataException(
                f"Split of {self.id} must be one of {data_options.SPLITS}, got {self.split}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PairedSample):
            return NotImplemented
        return (
            self.id == other.id
            and self.split == other.split
            and self.depth.equals(other.depth)
            and self.rgb.equals(other.rgb)
        )

    def __repr__(self) -> str:
        return f"PairedSample({self.id}, {self.split})"


@dataclass
class Batch:
    """Samples concatenated along the batch axis."""

    depth: Tensor
    rgb: Tensor
    ids: List[str]

    @classmethod
    def from_samples(cls, samples: List[PairedSample]) -> "Batch":
        if not samples:
            raise DataException("Cannot build a batch from zero samples")
        return cls(
            depth=Tensor(np.concatenate([sample.depth.data for sample in samples])),
            rgb=Tensor(np.concatenate([sample.rgb.data for sample in samples])),
            ids=[sample.id for sample in samples],
        )

    def __len__(self) -> int:
        return len(self.ids)

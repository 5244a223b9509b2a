"""Module for representing a dataset manifest and loading its pairs."""
import json
import pathlib
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np
from tqdm import tqdm

from depth2face.data import data_options
from depth2face.data.image_io import read_depth_png, read_rgb_png
from depth2face.data.paired_sample import PairedSample
from depth2face.data.preprocessing import normalize_depth, normalize_rgb, resize_bilinear
from depth2face.tensor_core.tensor import DataException, Tensor

PathLike = Union[str, pathlib.Path]


@dataclass
class ManifestEntry:
    """One pair of the manifest, paths resolved against the manifest directory."""

    id: str
    depth: pathlib.Path
    rgb: pathlib.Path
    split: str = "train"


class DatasetManifest:
    """Object representing a list of depth/RGB pairs and the sensor depth range.
    JSON layout: {"d_min": ..., "d_max": ..., "pairs": [{"id": ..., "depth": ...,
    "rgb": ..., "split": ...}]}; id defaults to the depth file stem and paths are
    relative to the manifest file."""

    def __init__(
        self,
        entries: List[ManifestEntry],
        d_min: float = data_options.D_MIN,
        d_max: float = data_options.D_MAX,
        path: Optional[PathLike] = None,
    ) -> None:
        self.entries = entries
        self.d_min = d_min
        self.d_max = d_max
        self.path = pathlib.Path(path) if path is not None else None
        self.validate()

    def validate(self) -> None:
        """Tests the range, ids and splits. File existence is checked in check_files."""
        if not self.d_max - self.d_min > 0:
            raise DataException(
                f"Manifest {self.path}: d_max - d_min must be positive, "
                f"got [{self.d_min}, {self.d_max}]"
            )
        counts = Counter(entry.id for entry in self.entries)
        duplicates = sorted(pair_id for pair_id, count in counts.items() if count > 1)
        if duplicates:
            raise DataException(f"Manifest {self.path} has duplicate ids: {', '.join(duplicates)}")
        for entry in self.entries:
            if entry.split not in data_options.SPLITS:
                raise DataException(
                    f"Manifest {self.path}: pair {entry.id} has unknown split {entry.split}"
                )

    def check_files(self) -> None:
        """Tests that every referenced file exists, listing all missing ones."""
        missing = [
            str(path)
            for entry in self.entries
            for path in (entry.depth, entry.rgb)
            if not path.is_file()
        ]
        if missing:
            raise DataException(
                f"Manifest {self.path} references missing files: {', '.join(missing)}"
            )

    @classmethod
    def load(cls, path: PathLike) -> "DatasetManifest":
        """Reads a manifest JSON file."""
        path = pathlib.Path(path)
        try:
            values = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as error:
            raise DataException(f"Cannot read manifest {path}: {error}") from error
        root = path.parent
        try:
            entries = [
                ManifestEntry(
                    id=pair.get("id", pathlib.Path(pair["depth"]).stem),
                    depth=root / pair["depth"],
                    rgb=root / pair["rgb"],
                    split=pair.get("split", "train"),
                )
                for pair in values["pairs"]
            ]
            return cls(entries, values["d_min"], values["d_max"], path)
        except (KeyError, TypeError, AttributeError) as error:
            raise DataException(f"Manifest {path} is malformed: missing {error}") from error

    def to_dict(self, root: Optional[PathLike] = None) -> dict:
        """Returns the JSON layout with paths relative to root."""
        root = pathlib.Path(root) if root is not None else None

        def relative(path: pathlib.Path) -> str:
            if root is None:
                return path.as_posix()
            return path.relative_to(root).as_posix()

        return {
            "d_min": self.d_min,
            "d_max": self.d_max,
            "pairs": [
                {
                    "id": entry.id,
                    "depth": relative(entry.depth),
                    "rgb": relative(entry.rgb),
                    "split": entry.split,
                }
                for entry in self.entries
            ],
        }

    def save(self, path: PathLike) -> str:
        """Writes the manifest with paths relative to its own directory."""
        path = pathlib.Path(path)
        text = json.dumps(self.to_dict(path.parent), indent=2, sort_keys=True)
        try:
            path.write_text(text + "\n", encoding="utf-8")
        except OSError as error:
            raise DataException(f"Cannot write manifest {path}: {error}") from error
        self.path = path
        return str(path)

    # HELPERS
    def get_all_entries(self, split: Optional[str] = None) -> List[ManifestEntry]:
        """Get all entries, optionally of a single split."""
        return [entry for entry in self.entries if split is None or entry.split == split]

    def get_single_entry(self, pair_id: str) -> Optional[ManifestEntry]:
        """Get a single entry based on its id."""
        return next((entry for entry in self.entries if entry.id == pair_id), None)

    def __len__(self) -> int:
        return len(self.entries)

    def __repr__(self) -> str:
        return f"DatasetManifest({self.path}, {len(self.entries)} pairs)"


def preprocess_depth(
    depth: np.ndarray, d_min: float, d_max: float, size: int = data_options.IMAGE_SIZE
) -> Tensor:
    """Normalises a (h, w) sensor depth map and resizes it to a (1, 1, size, size) Tensor."""
    normalized = normalize_depth(depth, d_min, d_max)
    return Tensor(resize_bilinear(normalized, size, size)[np.newaxis, np.newaxis])


def preprocess_rgb(rgb: np.ndarray, size: int = data_options.IMAGE_SIZE) -> Tensor:
    """Normalises a (h, w, 3) uint8 image and resizes it to a (1, 3, size, size) Tensor."""
    normalized = normalize_rgb(rgb).transpose(2, 0, 1)
    return Tensor(resize_bilinear(normalized, size, size)[np.newaxis])


def load_pair(entry: ManifestEntry, manifest: DatasetManifest) -> PairedSample:
    """Reads, normalises and resizes one depth/RGB pair."""
    for path in (entry.depth, entry.rgb):
        if not path.is_file():
            raise DataException(f"File {path} of pair {entry.id} does not exist")
    depth = preprocess_depth(read_depth_png(entry.depth), manifest.d_min, manifest.d_max)
    rgb = preprocess_rgb(read_rgb_png(entry.rgb))
    return PairedSample(depth=depth, rgb=rgb, id=entry.id, split=entry.split)


def load_dataset(
    manifest: Union[DatasetManifest, PathLike],
    split: Optional[str] = None,
    workers: int = data_options.LOAD_WORKERS,
    quiet: bool = False,
) -> List[PairedSample]:
    """Loads all pairs (of one split when given) in manifest order.
    Evaluation on another dataset passes that dataset's manifest and split."""
    if not isinstance(manifest, DatasetManifest):
        manifest = DatasetManifest.load(manifest)
    manifest.check_files()
    entries = manifest.get_all_entries(split)
    if not quiet:
        print(f"Loading {len(entries)} pairs from {manifest.path}", flush=True, file=sys.stderr)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        samples = list(
            tqdm(
                executor.map(lambda entry: load_pair(entry, manifest), entries),
                total=len(entries),
                desc="Loading pairs",
                disable=quiet,
            )
        )
    return samples

"""Module for the run configuration written into every run directory."""
import json
import pathlib
from dataclasses import dataclass, field
from typing import Optional, Union

from depth2face.data.synthetic import SynthSpec
from depth2face.losses.gan_losses import LossConfig
from depth2face.models.checkpoint import package_version
from depth2face.tensor_core.tensor import ConfigException, DataException
from depth2face.training.train_options import TrainConfig

PathLike = Union[str, pathlib.Path]
CONFIG_FILE = "config.json"


@dataclass
class RunConfig:
    """Everything needed to re-create a training run: hyperparameters, data
    source (a manifest or a synthetic spec), output directory and an optional
    checkpoint to resume from."""

    train: TrainConfig = field(default_factory=TrainConfig)
    output_dir: str = "run"
    manifest: Optional[str] = None
    synth: Optional[SynthSpec] = None
    eval_manifest: Optional[str] = None
    eval_split: str = "test"
    resume: Optional[str] = None

    def __post_init__(self) -> None:
        if self.manifest is not None and self.synth is not None:
            raise ConfigException("A run reads either a manifest or a synthetic spec, not both")
        if self.manifest is None and self.synth is None:
            self.synth = SynthSpec(seed=self.train.seed)

    @property
    def loss(self) -> LossConfig:
        return LossConfig(self.train.mse_weight)

    def to_dict(self) -> dict:
        return {
            "train": self.train.to_dict(),
            "loss": {"mse_weight": self.loss.mse_weight},
            "data": {
                "manifest": self.manifest,
                "synth": self.synth.to_dict() if self.synth is not None else None,
                "eval_manifest": self.eval_manifest,
                "eval_split": self.eval_split,
            },
            "output_dir": self.output_dir,
            "resume": self.resume,
            "package_version": package_version(),
        }

    @classmethod
    def from_dict(cls, values: dict, overrides: Optional[dict] = None) -> "RunConfig":
        """Builds a RunConfig from to_dict output; overrides update the training settings."""
        try:
            train = dict(values["train"])
            if values.get("loss"):
                train["mse_weight"] = values["loss"]["mse_weight"]
            data = values.get("data", {})
            synth = data.get("synth")
            return cls(
                train=TrainConfig.from_dict(train, overrides),
                output_dir=values.get("output_dir", "run"),
                manifest=data.get("manifest"),
                synth=SynthSpec(**synth) if synth is not None else None,
                eval_manifest=data.get("eval_manifest"),
                eval_split=data.get("eval_split", "test"),
                resume=values.get("resume"),
            )
        except (KeyError, TypeError) as error:
            raise ConfigException(f"Invalid run configuration: {error}") from error

    def save(self, run_dir: Optional[PathLike] = None) -> str:
        """Writes config.json into the run directory."""
        path = pathlib.Path(run_dir or self.output_dir) / CONFIG_FILE
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        except OSError as error:
            raise DataException(f"Cannot write run configuration {path}: {error}") from error
        return str(path)

    @classmethod
    def load(cls, path: PathLike, overrides: Optional[dict] = None) -> "RunConfig":
        """Reads a config.json snapshot."""
        try:
            values = json.loads(pathlib.Path(path).read_text())
        except (OSError, json.JSONDecodeError) as error:
            raise ConfigException(f"Cannot read run configuration {path}: {error}") from error
        return cls.from_dict(values, overrides)

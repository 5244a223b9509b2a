"""File to hold settings for training the networks."""
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from depth2face.models import model_options
from depth2face.tensor_core.tensor import ConfigException

MSE_WEIGHT = 0.1
LEARNING_RATE = 2e-4
BETA1 = 0.5
BETA2 = 0.999
ADAM_EPS = 1e-8
BATCH_SIZE = 64
DISCRIMINATOR_STEPS = 1
LOG_INTERVAL = 1
CHECKPOINT_INTERVAL = 500
# Generator forward passes during inference and evaluation are chunked
PREDICT_BATCH_SIZE = 64

MODES = ("gan", "mse-only")
INPUT_KINDS = ("depth", "binary")

LOG_COLUMNS = ["step", "d_loss", "g_total", "g_mse", "g_adv", "ms"]


@dataclass
class TrainConfig:
    """Every hyperparameter of a training run."""

    # pylint: disable=too-many-instance-attributes
    # One attribute per hyperparameter
    mse_weight: float = MSE_WEIGHT
    lr: float = LEARNING_RATE
    beta1: float = BETA1
    beta2: float = BETA2
    eps: float = ADAM_EPS
    batch_size: int = BATCH_SIZE
    total_steps: int = 0
    seed: int = 0
    mode: str = "gan"
    input_kind: str = "depth"
    binary_threshold: float = 0.0
    discriminator_steps: int = DISCRIMINATOR_STEPS
    log_interval: int = LOG_INTERVAL
    checkpoint_interval: int = CHECKPOINT_INTERVAL
    base_filters: int = model_options.BASE_FILTERS
    record_timing: bool = False

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        """Rejects invalid values before any compute."""
        for name in ("mse_weight", "lr", "eps", "binary_threshold"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigException(f"{name} must be finite, got {getattr(self, name)}")
        if self.mse_weight < 0:
            raise ConfigException(f"lambda must be >= 0, got {self.mse_weight}")
        if self.lr < 0:
            raise ConfigException(f"Learning rate must be >= 0, got {self.lr}")
        for name in ("beta1", "beta2"):
            if not 0 <= getattr(self, name) < 1:
                raise ConfigException(f"{name} must lie in [0, 1), got {getattr(self, name)}")
        if self.eps <= 0:
            raise ConfigException(f"eps must be > 0, got {self.eps}")
        for name in ("batch_size", "discriminator_steps", "log_interval", "checkpoint_interval"):
            if int(getattr(self, name)) < 1:
                raise ConfigException(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.total_steps < 0:
            raise ConfigException(f"Number of steps must be >= 0, got {self.total_steps}")
        if self.seed < 0:
            raise ConfigException(f"Seed must be >= 0, got {self.seed}")
        if self.mode not in MODES:
            raise ConfigException(f"{self.mode} is not a training mode. Use one of {MODES}.")
        if self.input_kind not in INPUT_KINDS:
            raise ConfigException(
                f"{self.input_kind} is not an input kind. Use one of {INPUT_KINDS}."
            )
        if not -1 < self.binary_threshold < 1:
            raise ConfigException(
                f"Binary threshold must lie in (-1, 1), got {self.binary_threshold}"
            )
        if self.base_filters < 2 or self.base_filters % 2:
            raise ConfigException(
                f"base_filters must be an even number >= 2, got {self.base_filters}"
            )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: dict, overrides: Optional[dict] = None) -> "TrainConfig":
        """Builds a config from a dict, optionally updated with overrides.
        Unknown keys are rejected."""
        settings = dict(values)
        if overrides:
            settings.update(overrides)
        known = {item.name for item in fields(cls)}
        unknown = sorted(set(settings) - known)
        if unknown:
            raise ConfigException(f"Unknown training settings: {', '.join(unknown)}")
        return cls(**settings)

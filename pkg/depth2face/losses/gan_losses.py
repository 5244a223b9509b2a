"""Module for the generator and discriminator objectives.

The generator minimises lambda * MSE + adversarial, where the adversarial term is
the non-saturating -log D(G(x)). The discriminator minimises
-log D(real) - log(1 - D(fake)). All reductions are batch means in float64.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from depth2face.tensor_core import tensor_options
from depth2face.tensor_core.tensor import (
    ConfigException,
    NumericException,
    ShapeException,
    Tensor,
    as_tensor,
)

REDUCTION_DTYPE = tensor_options.REDUCTION_DTYPE
DEFAULT_LAMBDA = 0.1

TensorLike = Union[Tensor, np.ndarray]


@dataclass
class LossConfig:
    """Weight of the MSE term in the generator objective."""

    mse_weight: float = DEFAULT_LAMBDA

    def __post_init__(self) -> None:
        if not np.isfinite(self.mse_weight) or self.mse_weight < 0:
            raise ConfigException(f"lambda must be a finite number >= 0, got {self.mse_weight}")


@dataclass
class LossValue:
    """Scalar loss with its breakdown and the gradients w.r.t. its inputs.
    For the generator, total = mse_weight * mse + adversarial."""

    total: float
    mse: Optional[float] = None
    adversarial: Optional[float] = None
    grads: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def breakdown(self) -> Dict[str, Optional[float]]:
        return {"mse": self.mse, "adversarial": self.adversarial, "total": self.total}

    def is_finite(self) -> bool:
        return all(value is None or np.isfinite(value) for value in self.breakdown.values())


def _check_probabilities(probabilities: np.ndarray, name: str) -> np.ndarray:
    values = probabilities.astype(REDUCTION_DTYPE)
    if values.size == 0:
        raise ShapeException(f"{name} is empty")
    if not ((values > 0) & (values < 1)).all():
        raise NumericException(
            f"{name} must lie strictly inside (0, 1); the sigmoid clamp was bypassed"
        )
    return values


def mse_loss(generated: TensorLike, target: TensorLike) -> LossValue:
    """Mean over all elements of the squared difference.
    Gradient 2 (generated - target) / count w.r.t. generated."""
    generated, target = as_tensor(generated), as_tensor(target)
    if generated.shape != target.shape:
        raise ShapeException(
            f"MSE needs equal shapes, got {generated.shape} and {target.shape}"
        )
    difference = generated.data.astype(REDUCTION_DTYPE) - target.data.astype(REDUCTION_DTYPE)
    value = float(np.mean(difference**2))
    grad = (2.0 * difference / difference.size).astype(tensor_options.DTYPE)
    return LossValue(total=value, mse=value, grads={"generated": grad})


def adv_generator_loss(d_on_fake: TensorLike) -> LossValue:
    """Batch mean of -log D(G(x))."""
    d_on_fake = as_tensor(d_on_fake)
    fake = _check_probabilities(d_on_fake.data, "D(fake)")
    value = float(np.mean(-np.log(fake)))
    grad = (-1.0 / (fake * fake.size)).astype(tensor_options.DTYPE)
    return LossValue(total=value, adversarial=value, grads={"d_on_fake": grad})


def discriminator_loss(d_on_real: TensorLike, d_on_fake: TensorLike) -> LossValue:
    """-mean log D(real) - mean log(1 - D(fake))."""
    d_on_real, d_on_fake = as_tensor(d_on_real), as_tensor(d_on_fake)
    real = _check_probabilities(d_on_real.data, "D(real)")
    fake = _check_probabilities(d_on_fake.data, "D(fake)")
    value = float(np.mean(-np.log(real)) + np.mean(-np.log1p(-fake)))
    return LossValue(
        total=value,
        grads={
            "d_on_real": (-1.0 / (real * real.size)).astype(tensor_options.DTYPE),
            "d_on_fake": (1.0 / ((1.0 - fake) * fake.size)).astype(tensor_options.DTYPE),
        },
    )


def combined_generator_loss(
    generated: TensorLike,
    target: TensorLike,
    d_on_fake: TensorLike,
    config: Optional[LossConfig] = None,
) -> LossValue:
    """lambda * MSE + adversarial, with gradients for both paths:
    "generated" for the direct MSE path and "d_on_fake" to backpropagate
    through the discriminator."""
    config = config or LossConfig()
    mse = mse_loss(generated, target)
    adversarial = adv_generator_loss(d_on_fake)
    weight = config.mse_weight
    return LossValue(
        total=weight * mse.total + adversarial.total,
        mse=mse.total,
        adversarial=adversarial.total,
        grads={
            "generated": (weight * mse.grads["generated"]).astype(tensor_options.DTYPE),
            "d_on_fake": adversarial.grads["d_on_fake"],
        },
    )

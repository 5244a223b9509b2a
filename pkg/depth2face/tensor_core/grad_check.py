"""Module comparing analytic gradients against central finite differences."""
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from depth2face.tensor_core import tensor_options
from depth2face.tensor_core.tensor import Depth2FaceException, Tensor

# Closure protocol: reads the current data of the input Tensors and returns
# (scalar loss, {input name: analytic gradient})
LossClosure = Callable[[], Tuple[float, Dict[str, np.ndarray]]]

# Coordinates whose gradients are tiny are compared against this fraction of
# the largest gradient magnitude instead of their own
RELATIVE_FLOOR = 1e-2

# Absolute guard for the unfloored error so exact zeros compare as equal
ABSOLUTE_EPSILON = 1e-12


class GradCheckReport:
    """Outcome of a gradient check."""

    def __init__(
        self,
        max_rel_error: float,
        tol: float,
        errors: Dict[str, float],
        unfloored_errors: Optional[Dict[str, float]] = None,
    ) -> None:
        self.max_rel_error = max_rel_error
        self.tol = tol
        self.errors = errors
        self.unfloored_errors = unfloored_errors or {}
        # Per-coordinate error against each coordinate's own size, reported only
        self.max_unfloored_error = max(self.unfloored_errors.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tol

    def __repr__(self) -> str:
        status = "pass" if self.passed else "fail"
        return (
            f"GradCheckReport({status}, max_rel_error={self.max_rel_error:.3e}, "
            f"max_unfloored_error={self.max_unfloored_error:.3e})"
        )


def _scalar(loss) -> float:
    array = np.asarray(loss, dtype=tensor_options.REDUCTION_DTYPE)
    if array.size != 1:
        raise Depth2FaceException(
            f"Gradient check needs a scalar loss, got shape {array.shape}"
        )
    return float(array.reshape(()))


def numeric_gradient(closure: LossClosure, tensor: Tensor, h: float) -> np.ndarray:
    """Central differences (f(x+h) - f(x-h)) / ((x+h) - (x-h)) per coordinate.
    The denominator is the step actually representable in float32."""
    numeric = np.zeros(tensor.shape, dtype=tensor_options.REDUCTION_DTYPE)
    for index in np.ndindex(*tensor.shape):
        original = tensor.data[index]
        tensor.data[index] = original + np.float32(h)
        plus = float(tensor.data[index])
        loss_plus = _scalar(closure()[0])
        tensor.data[index] = original - np.float32(h)
        minus = float(tensor.data[index])
        loss_minus = _scalar(closure()[0])
        tensor.data[index] = original
        numeric[index] = (loss_plus - loss_minus) / (plus - minus)
    return numeric


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Largest per-coordinate error relative to max(|a|, |n|, floor)."""
    analytic = analytic.astype(tensor_options.REDUCTION_DTYPE)
    scale = max(np.abs(analytic).max(initial=0.0), np.abs(numeric).max(initial=0.0))
    if scale == 0.0:
        return 0.0
    denominator = np.maximum(
        np.maximum(np.abs(analytic), np.abs(numeric)), RELATIVE_FLOOR * scale
    )
    return float((np.abs(analytic - numeric) / denominator).max())


def unfloored_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Largest per-coordinate error relative to max(|a|, |n|), with no floor."""
    analytic = analytic.astype(tensor_options.REDUCTION_DTYPE)
    if analytic.size == 0:
        return 0.0
    denominator = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), ABSOLUTE_EPSILON)
    return float((np.abs(analytic - numeric) / denominator).max())


def grad_check(
    closure: LossClosure, inputs: Dict[str, Tensor], h: float = 1e-3, tol: float = 1e-2
) -> GradCheckReport:
    """Checks the analytic gradients returned by closure against finite differences
    for every Tensor in inputs. Input data is restored afterwards."""
    if h <= 0:
        raise Depth2FaceException(f"Finite difference step must be positive, got {h}")
    loss, analytic = closure()
    _scalar(loss)
    # Copy before perturbing, closures may hand out live buffers
    analytic = {name: np.array(grad) for name, grad in analytic.items()}
    errors, unfloored = {}, {}
    for name, tensor in inputs.items():
        if name not in analytic:
            raise Depth2FaceException(f"Closure returned no gradient for input {name}")
        if analytic[name].shape != tensor.shape:
            raise Depth2FaceException(
                f"Gradient for {name} has shape {analytic[name].shape}, expected {tensor.shape}"
            )
        numeric = numeric_gradient(closure, tensor, h)
        errors[name] = relative_error(analytic[name], numeric)
        unfloored[name] = unfloored_error(analytic[name], numeric)
    return GradCheckReport(max(errors.values(), default=0.0), tol, errors, unfloored)

"""Module for the Adam optimizer."""
from typing import Dict, Optional

import numpy as np

from depth2face.tensor_core import tensor_options
from depth2face.tensor_core.tensor import NumericException, ShapeException, Tensor
from depth2face.training import train_options

DTYPE = tensor_options.DTYPE


class AdamState:
    """Per-parameter first and second moments plus the step counter t."""

    def __init__(
        self,
        lr: float = train_options.LEARNING_RATE,
        beta1: float = train_options.BETA1,
        beta2: float = train_options.BETA2,
        eps: float = train_options.ADAM_EPS,
    ) -> None:
        """Creates an AdamState with zero moments; they are allocated on first use."""
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m: Dict[str, np.ndarray] = {}
        self.v: Dict[str, np.ndarray] = {}

    def to_dict(self) -> dict:
        """Returns the state in the layout stored in checkpoints."""
        return {
            "t": self.t,
            "lr": self.lr,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "eps": self.eps,
            "m": self.m,
            "v": self.v,
        }

    @classmethod
    def from_dict(cls, values: dict) -> "AdamState":
        """Restores a state written by to_dict."""
        state = cls(values["lr"], values["beta1"], values["beta2"], values["eps"])
        state.t = int(values["t"])
        state.m = {name: np.array(array, dtype=DTYPE) for name, array in values["m"].items()}
        state.v = {name: np.array(array, dtype=DTYPE) for name, array in values["v"].items()}
        return state

    def __repr__(self) -> str:
        return f"AdamState(t={self.t}, lr={self.lr}, beta1={self.beta1}, beta2={self.beta2})"


def adam_step(
    params: Dict[str, Tensor],
    grads: Optional[Dict[str, np.ndarray]],
    state: AdamState,
) -> AdamState:
    """Applies one bias-corrected Adam update in place.
    m <- b1 m + (1 - b1) g, v <- b2 v + (1 - b2) g^2,
    theta <- theta - lr * m_hat / (sqrt(v_hat) + eps).
    When grads is None the gradient buffers of params are used; missing
    buffers count as zero gradients. Non-finite gradients abort before any
    parameter or moment changes."""
    if grads is None:
        grads = {
            name: tensor.grad if tensor.grad is not None else np.zeros_like(tensor.data)
            for name, tensor in params.items()
        }
    for name, tensor in params.items():
        if name not in grads or grads[name].shape != tensor.shape:
            raise ShapeException(f"Gradient for {name} is missing or does not match {tensor.shape}")
        if not np.isfinite(grads[name]).all():
            raise NumericException(f"Non-finite gradient for parameter {name}")

    state.t += 1
    correction1 = 1.0 - state.beta1**state.t
    correction2 = 1.0 - state.beta2**state.t
    for name, tensor in params.items():
        grad = grads[name].astype(DTYPE)
        first = state.m.get(name, np.zeros_like(tensor.data))
        second = state.v.get(name, np.zeros_like(tensor.data))
        state.m[name] = (state.beta1 * first + (1.0 - state.beta1) * grad).astype(DTYPE)
        state.v[name] = (state.beta2 * second + (1.0 - state.beta2) * grad * grad).astype(DTYPE)
        first_hat = state.m[name] / correction1
        second_hat = state.v[name] / correction2
        tensor.data -= (state.lr * first_hat / (np.sqrt(second_hat) + state.eps)).astype(DTYPE)
    return state

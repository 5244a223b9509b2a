"""Module for the dense tensor type, the seeded random stream and the package exceptions."""
import zlib
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from depth2face.tensor_core import tensor_options


class Depth2FaceException(Exception):
    """Exception class for everything raised by depth2face"""


class ShapeException(Depth2FaceException):
    """Raised when tensor shapes break the contract of an operation"""


class StateException(Depth2FaceException):
    """Raised when an operation needs state that was never initialised"""


class ConfigException(Depth2FaceException):
    """Raised for invalid configuration values, before any compute happens"""


class DataException(Depth2FaceException):
    """Raised for unreadable, malformed or inconsistent input data"""


class CheckpointException(DataException):
    """Raised for checkpoint files that cannot be read back"""


class NumericException(Depth2FaceException):
    """Raised when training produces non-finite values.
    Carries the diagnostic record of the aborted step when available."""

    def __init__(self, message: str, record=None) -> None:
        super().__init__(message)
        self.record = record


class Tensor:
    """Dense row-major float32 array with an optional gradient buffer.
    Images are (n, c, h, w); the discriminator head produces (n, m);
    biases and batch norm parameters are vectors."""

    def __init__(self, data, grad: Optional[np.ndarray] = None) -> None:
        """Creates a Tensor. Contiguous float32 input is used without copying."""
        array = np.ascontiguousarray(data, dtype=tensor_options.DTYPE)
        if array.ndim not in (1, 2, 4):
            raise ShapeException(
                f"Tensor must be a vector, (n, m) or (n, c, h, w), got shape {array.shape}"
            )
        self.data = array
        self.grad = None
        if grad is not None:
            self.accumulate_grad(grad)

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> "Tensor":
        """Returns a zero-filled Tensor."""
        return cls(np.zeros(tuple(shape), dtype=tensor_options.DTYPE))

    @classmethod
    def full(cls, shape: Sequence[int], value: float) -> "Tensor":
        """Returns a Tensor filled with a single value."""
        return cls(np.full(tuple(shape), value, dtype=tensor_options.DTYPE))

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return int(self.data.size)

    def accumulate_grad(self, grad: np.ndarray) -> None:
        """Adds grad to the gradient buffer, creating it when absent."""
        if grad.shape != self.data.shape:
            raise ShapeException(
                f"Gradient of shape {grad.shape} does not match tensor shape {self.data.shape}"
            )
        if self.grad is None:
            self.grad = np.array(grad, dtype=tensor_options.DTYPE)
        else:
            self.grad += grad

    def zero_grad(self) -> None:
        """Drops the gradient buffer."""
        self.grad = None

    def detach(self) -> "Tensor":
        """Returns a copy without gradient buffer."""
        return Tensor(self.data.copy())

    def is_finite(self) -> bool:
        """Tests whether all entries are finite."""
        return bool(np.isfinite(self.data).all())

    def equals(self, other: "Tensor") -> bool:
        """Bitwise equality of shape and data."""
        return self.shape == other.shape and self.data.tobytes() == other.data.tobytes()

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape})"


def as_tensor(value: Union["Tensor", np.ndarray]) -> Tensor:
    """Wraps arrays into Tensors, passes Tensors through."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def _stable_key(key: Union[int, str]) -> int:
    """Maps a stream key to an integer that is equal on every platform."""
    if isinstance(key, int):
        if key < 0:
            raise Depth2FaceException(f"Stream keys must be non-negative, got {key}")
        return key
    return zlib.crc32(str(key).encode("utf-8"))


class Rng:
    """Seeded random stream (PCG64).
    Identical seed and keys give identical samples across runs and platforms."""

    def __init__(self, seed: int, keys: Tuple[int, ...] = ()) -> None:
        """Creates an Rng from a non-negative seed and optional child keys."""
        if int(seed) < 0:
            raise Depth2FaceException(f"Seed must be non-negative, got {seed}")
        self.seed = int(seed)
        self.keys = tuple(keys)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.keys)
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def child(self, *keys: Union[int, str]) -> "Rng":
        """Returns an independent stream derived from this seed and the given keys."""
        return Rng(self.seed, self.keys + tuple(_stable_key(key) for key in keys))

    def normal(self, shape: Sequence[int], std: float = 1.0) -> np.ndarray:
        """Draws float32 samples from Normal(0, std)."""
        return (self.generator.standard_normal(tuple(shape)) * std).astype(
            tensor_options.DTYPE
        )

    def uniform(self, low: float, high: float, size=None):
        """Draws float64 samples from Uniform(low, high)."""
        return self.generator.uniform(low, high, size)

    def integers(self, low: int, high: int, size=None):
        """Draws integers from [low, high)."""
        return self.generator.integers(low, high, size)

    def permutation(self, count: int) -> np.ndarray:
        """Returns a permutation of range(count)."""
        return self.generator.permutation(count)

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, keys={self.keys})"

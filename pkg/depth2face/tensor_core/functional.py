"""Forward operations and their reverse-mode gradients for every layer primitive.

Forward functions take Tensors and return new Tensors. Backward functions take the
gradient of the output, accumulate parameter gradients into the parameter Tensors
and return the gradient w.r.t. the input as an array.
"""
from typing import Optional

import numpy as np

from depth2face.tensor_core import tensor_options
from depth2face.tensor_core.tensor import (
    ShapeException,
    StateException,
    Depth2FaceException,
    Tensor,
)

DTYPE = tensor_options.DTYPE
REDUCTION_DTYPE = tensor_options.REDUCTION_DTYPE


# SHAPE HELPERS
def conv_output_size(size: int, kernel: int, stride: int, pad: int) -> int:
    """Spatial size after a convolution."""
    return (size + 2 * pad - kernel) // stride + 1


def conv_transpose_output_size(
    size: int, kernel: int, stride: int, pad: int, out_pad: int
) -> int:
    """Spatial size after a transposed convolution."""
    return (size - 1) * stride - 2 * pad + kernel + out_pad


def _check_image(tensor: Tensor, name: str) -> None:
    if tensor.data.ndim != 4:
        raise ShapeException(f"{name} must be (n, c, h, w), got shape {tensor.shape}")


def _check_conv_arguments(
    inputs: Tensor,
    kernel: Tensor,
    bias: Optional[Tensor],
    stride: int,
    pad: int,
    channel_axis: int,
    bias_axis: int,
) -> None:
    """Validates the shared preconditions of conv2d and conv_transpose2d."""
    _check_image(inputs, "Input")
    _check_image(kernel, "Kernel")
    if kernel.shape[2] != kernel.shape[3]:
        raise ShapeException(f"Kernel must be square, got shape {kernel.shape}")
    if inputs.shape[1] != kernel.shape[channel_axis]:
        raise ShapeException(
            f"Input has {inputs.shape[1]} channels but kernel {kernel.shape} "
            f"expects {kernel.shape[channel_axis]}"
        )
    if bias is not None and bias.data.size != kernel.shape[bias_axis]:
        raise ShapeException(
            f"Bias of size {bias.data.size} does not match {kernel.shape[bias_axis]} "
            "output channels"
        )
    if stride not in tensor_options.STRIDES:
        raise ShapeException(f"Stride must be one of {tensor_options.STRIDES}, got {stride}")
    if pad < 0:
        raise ShapeException(f"Padding must be non-negative, got {pad}")


def _pad(array: np.ndarray, pad: int) -> np.ndarray:
    if pad == 0:
        return array
    return np.pad(array, ((0, 0), (0, 0), (pad, pad), (pad, pad)))


def _window(array: np.ndarray, row: int, col: int, stride: int, height: int, width: int):
    """Strided view of array starting at (row, col) with (height, width) taps."""
    return array[
        :,
        :,
        row : row + stride * (height - 1) + 1 : stride,
        col : col + stride * (width - 1) + 1 : stride,
    ]


def _correlate(padded: np.ndarray, weight: np.ndarray, stride: int, height: int, width: int):
    """Strided cross-correlation, accumulated over kernel offsets.
    weight is (c_out, c_in, k, k); returns (n, c_out, height, width)."""
    out = np.zeros((padded.shape[0], height, width, weight.shape[0]), dtype=DTYPE)
    for row in range(weight.shape[2]):
        for col in range(weight.shape[3]):
            window = _window(padded, row, col, stride, height, width)
            out += np.tensordot(window, weight[:, :, row, col], axes=([1], [1]))
    return np.ascontiguousarray(out.transpose(0, 3, 1, 2))


def _scatter(grad: np.ndarray, weight: np.ndarray, stride: int, height: int, width: int):
    """Adjoint of _correlate w.r.t. its input.
    grad is (n, c_out, h, w); returns the padded-input-shaped (n, c_in, height, width)."""
    out = np.zeros((grad.shape[0], weight.shape[1], height, width), dtype=DTYPE)
    for row in range(weight.shape[2]):
        for col in range(weight.shape[3]):
            contribution = np.tensordot(grad, weight[:, :, row, col], axes=([1], [0]))
            _window(out, row, col, stride, grad.shape[2], grad.shape[3])[
                ...
            ] += contribution.transpose(0, 3, 1, 2)
    return out


def _kernel_grad(padded: np.ndarray, grad: np.ndarray, kernel_size: int, stride: int):
    """Gradient of _correlate w.r.t. the weight: (c_out, c_in, k, k)."""
    out = np.zeros(
        (grad.shape[1], padded.shape[1], kernel_size, kernel_size), dtype=DTYPE
    )
    for row in range(kernel_size):
        for col in range(kernel_size):
            window = _window(padded, row, col, stride, grad.shape[2], grad.shape[3])
            out[:, :, row, col] = np.tensordot(grad, window, axes=([0, 2, 3], [0, 2, 3]))
    return out


def _bias_grad(grad: np.ndarray) -> np.ndarray:
    return grad.sum(axis=(0, 2, 3), dtype=REDUCTION_DTYPE).astype(DTYPE)


# CONVOLUTION
def conv2d(
    inputs: Tensor, kernel: Tensor, bias: Optional[Tensor], stride: int = 1, pad: int = 0
) -> Tensor:
    """2-D cross-correlation. kernel is (c_out, c_in, k, k)."""
    _check_conv_arguments(inputs, kernel, bias, stride, pad, channel_axis=1, bias_axis=0)
    size = kernel.shape[2]
    height = conv_output_size(inputs.shape[2], size, stride, pad)
    width = conv_output_size(inputs.shape[3], size, stride, pad)
    if height < 1 or width < 1:
        raise ShapeException(
            f"Convolution of {inputs.shape} with kernel {size} (stride {stride}, "
            f"pad {pad}) has an empty output"
        )
    out = _correlate(_pad(inputs.data, pad), kernel.data, stride, height, width)
    if bias is not None:
        out += bias.data.reshape(1, -1, 1, 1)
    return Tensor(out)


def conv2d_backward(
    grad: np.ndarray,
    inputs: Tensor,
    kernel: Tensor,
    bias: Optional[Tensor],
    stride: int = 1,
    pad: int = 0,
) -> np.ndarray:
    """Accumulates kernel and bias gradients, returns the input gradient."""
    size = kernel.shape[2]
    padded = _pad(inputs.data, pad)
    kernel.accumulate_grad(_kernel_grad(padded, grad, size, stride))
    if bias is not None:
        bias.accumulate_grad(_bias_grad(grad).reshape(bias.shape))
    grad_padded = _scatter(grad, kernel.data, stride, padded.shape[2], padded.shape[3])
    height, width = inputs.shape[2], inputs.shape[3]
    return np.ascontiguousarray(grad_padded[:, :, pad : pad + height, pad : pad + width])


def conv_transpose2d(
    inputs: Tensor,
    kernel: Tensor,
    bias: Optional[Tensor],
    stride: int = 1,
    pad: int = 0,
    out_pad: int = 0,
) -> Tensor:
    """Fractionally strided convolution, the adjoint of conv2d with the same kernel.
    kernel is (c_in, c_out, k, k)."""
    _check_conv_arguments(inputs, kernel, bias, stride, pad, channel_axis=0, bias_axis=1)
    if not 0 <= out_pad < stride:
        raise ShapeException(
            f"Output padding must satisfy 0 <= out_pad < stride, got {out_pad} for stride {stride}"
        )
    size = kernel.shape[2]
    height = conv_transpose_output_size(inputs.shape[2], size, stride, pad, out_pad)
    width = conv_transpose_output_size(inputs.shape[3], size, stride, pad, out_pad)
    if height < 1 or width < 1:
        raise ShapeException(
            f"Transposed convolution of {inputs.shape} with kernel {size} has an empty output"
        )
    padded = _scatter(inputs.data, kernel.data, stride, height + 2 * pad, width + 2 * pad)
    out = np.ascontiguousarray(padded[:, :, pad : pad + height, pad : pad + width])
    if bias is not None:
        out += bias.data.reshape(1, -1, 1, 1)
    return Tensor(out)


def conv_transpose2d_backward(
    grad: np.ndarray,
    inputs: Tensor,
    kernel: Tensor,
    bias: Optional[Tensor],
    stride: int = 1,
    pad: int = 0,
) -> np.ndarray:
    """Accumulates kernel and bias gradients, returns the input gradient."""
    padded = _pad(grad, pad)
    kernel.accumulate_grad(_kernel_grad(padded, inputs.data, kernel.shape[2], stride))
    if bias is not None:
        bias.accumulate_grad(_bias_grad(grad).reshape(bias.shape))
    return _correlate(padded, kernel.data, stride, inputs.shape[2], inputs.shape[3])


# BATCH NORMALIZATION
class BatchNormState:
    """Running statistics of a batch normalization layer."""

    def __init__(self, channels: int) -> None:
        self.running_mean = np.zeros(channels, dtype=DTYPE)
        self.running_var = np.ones(channels, dtype=DTYPE)
        # Number of train-mode batches folded into the running statistics
        self.tracked = 0

    @property
    def initialized(self) -> bool:
        return self.tracked > 0

    def __repr__(self) -> str:
        return f"BatchNormState(channels={self.running_mean.size}, tracked={self.tracked})"


def _batch_statistics(inputs: np.ndarray):
    mean = inputs.mean(axis=(0, 2, 3), dtype=REDUCTION_DTYPE)
    centered = inputs.astype(REDUCTION_DTYPE) - mean.reshape(1, -1, 1, 1)
    var = (centered**2).mean(axis=(0, 2, 3))
    return mean, var, centered


def _check_batch_norm(inputs: Tensor, gamma: Tensor, beta: Tensor) -> None:
    _check_image(inputs, "Input")
    channels = inputs.shape[1]
    if gamma.data.size != channels or beta.data.size != channels:
        raise ShapeException(
            f"Batch norm parameters of size {gamma.data.size}/{beta.data.size} "
            f"do not match {channels} channels"
        )


def batch_norm2d(
    inputs: Tensor,
    gamma: Tensor,
    beta: Tensor,
    state: BatchNormState,
    training: bool,
    momentum: float = tensor_options.BN_MOMENTUM,
    eps: float = tensor_options.BN_EPS,
    track_running_stats: bool = True,
) -> Tensor:
    """Per-channel normalization over (n, h, w).
    Train mode uses batch statistics and folds them into state unless
    track_running_stats is False; eval mode uses the running statistics."""
    _check_batch_norm(inputs, gamma, beta)
    scale = gamma.data.reshape(1, -1, 1, 1).astype(REDUCTION_DTYPE)
    shift = beta.data.reshape(1, -1, 1, 1).astype(REDUCTION_DTYPE)
    if training:
        count = inputs.shape[0] * inputs.shape[2] * inputs.shape[3]
        if count < 2:
            raise ShapeException(
                f"Batch norm in train mode needs batch*h*w >= 2, got shape {inputs.shape}"
            )
        mean, var, centered = _batch_statistics(inputs.data)
        normalized = centered / np.sqrt(var + eps).reshape(1, -1, 1, 1)
        if track_running_stats:
            unbiased = var * count / (count - 1)
            state.running_mean = (
                (1 - momentum) * state.running_mean + momentum * mean
            ).astype(DTYPE)
            state.running_var = (
                (1 - momentum) * state.running_var + momentum * unbiased
            ).astype(DTYPE)
            state.tracked += 1
    else:
        if not state.initialized:
            raise StateException(
                "Batch norm in eval mode needs running statistics from at least one train step"
            )
        mean = state.running_mean.astype(REDUCTION_DTYPE).reshape(1, -1, 1, 1)
        var = state.running_var.astype(REDUCTION_DTYPE).reshape(1, -1, 1, 1)
        normalized = (inputs.data - mean) / np.sqrt(var + eps)
    return Tensor((normalized * scale + shift).astype(DTYPE))


def batch_norm2d_backward(
    grad: np.ndarray,
    inputs: Tensor,
    gamma: Tensor,
    beta: Tensor,
    state: BatchNormState,
    training: bool,
    eps: float = tensor_options.BN_EPS,
) -> np.ndarray:
    """Accumulates gamma and beta gradients, returns the input gradient."""
    grad64 = grad.astype(REDUCTION_DTYPE)
    scale = gamma.data.astype(REDUCTION_DTYPE).reshape(1, -1, 1, 1)
    if training:
        _, var, centered = _batch_statistics(inputs.data)
    else:
        var = state.running_var.astype(REDUCTION_DTYPE)
        centered = inputs.data - state.running_mean.astype(REDUCTION_DTYPE).reshape(
            1, -1, 1, 1
        )
    inv_std = (1.0 / np.sqrt(var + eps)).reshape(1, -1, 1, 1)
    normalized = centered * inv_std
    gamma.accumulate_grad(
        (grad64 * normalized).sum(axis=(0, 2, 3)).astype(DTYPE).reshape(gamma.shape)
    )
    beta.accumulate_grad(grad64.sum(axis=(0, 2, 3)).astype(DTYPE).reshape(beta.shape))
    grad_normalized = grad64 * scale
    if not training:
        return (grad_normalized * inv_std).astype(DTYPE)
    count = inputs.shape[0] * inputs.shape[2] * inputs.shape[3]
    sum_grad = grad_normalized.sum(axis=(0, 2, 3), keepdims=True)
    sum_grad_normalized = (grad_normalized * normalized).sum(axis=(0, 2, 3), keepdims=True)
    grad_inputs = (
        inv_std
        / count
        * (count * grad_normalized - sum_grad - normalized * sum_grad_normalized)
    )
    return grad_inputs.astype(DTYPE)


# ACTIVATIONS
def _check_activation(kind: str) -> None:
    if kind not in tensor_options.ACTIVATIONS:
        raise Depth2FaceException(
            f"{kind} is not an activation. Use one of {tensor_options.ACTIVATIONS}."
        )


def activation(
    inputs: Tensor, kind: str, alpha: float = tensor_options.LEAKY_SLOPE
) -> Tensor:
    """Elementwise leaky_relu, relu, tanh or (clamped) sigmoid."""
    _check_activation(kind)
    data = inputs.data
    if kind == "leaky_relu":
        out = np.where(data > 0, data, data * np.float32(alpha))
    elif kind == "relu":
        out = np.where(data > 0, data, np.float32(0))
    elif kind == "tanh":
        out = np.tanh(data)
    else:
        # Stable form of 1 / (1 + exp(-x))
        out = 0.5 * (1.0 + np.tanh(0.5 * data))
        out = np.clip(out, tensor_options.SIGMOID_CLAMP, 1.0 - tensor_options.SIGMOID_CLAMP)
    return Tensor(out.astype(DTYPE))


def activation_backward(
    grad: np.ndarray,
    inputs: Tensor,
    outputs: Tensor,
    kind: str,
    alpha: float = tensor_options.LEAKY_SLOPE,
) -> np.ndarray:
    """Returns the input gradient. The slope at exactly 0 is the negative-side slope."""
    _check_activation(kind)
    if kind == "leaky_relu":
        local = np.where(inputs.data > 0, np.float32(1), np.float32(alpha))
    elif kind == "relu":
        local = (inputs.data > 0).astype(DTYPE)
    elif kind == "tanh":
        local = 1.0 - outputs.data**2
    else:
        out = outputs.data
        clamped = (out <= np.float32(tensor_options.SIGMOID_CLAMP)) | (
            out >= np.float32(1.0 - tensor_options.SIGMOID_CLAMP)
        )
        local = np.where(clamped, np.float32(0), out * (1.0 - out))
    return (grad * local).astype(DTYPE)


# AFFINE
def _flatten_rows(inputs: Tensor) -> np.ndarray:
    return inputs.data.reshape(inputs.shape[0], -1)


def affine(inputs: Tensor, weight: Tensor, bias: Optional[Tensor]) -> Tensor:
    """Matrix product of the (n, k) flattened input with a (k, m) weight, plus bias."""
    rows = _flatten_rows(inputs)
    if weight.data.ndim != 2 or rows.shape[1] != weight.shape[0]:
        raise ShapeException(
            f"Affine input with {rows.shape[1]} features does not match weight {weight.shape}"
        )
    if bias is not None and bias.data.size != weight.shape[1]:
        raise ShapeException(
            f"Bias of size {bias.data.size} does not match {weight.shape[1]} outputs"
        )
    out = rows @ weight.data
    if bias is not None:
        out = out + bias.data.reshape(1, -1)
    return Tensor(out)


def affine_backward(
    grad: np.ndarray, inputs: Tensor, weight: Tensor, bias: Optional[Tensor]
) -> np.ndarray:
    """Accumulates weight and bias gradients, returns the input gradient."""
    rows = _flatten_rows(inputs)
    weight.accumulate_grad((rows.T @ grad).astype(DTYPE))
    if bias is not None:
        bias.accumulate_grad(
            grad.sum(axis=0, dtype=REDUCTION_DTYPE).astype(DTYPE).reshape(bias.shape)
        )
    return (grad @ weight.data.T).astype(DTYPE).reshape(inputs.shape)

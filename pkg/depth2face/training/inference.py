"""Module for running a trained generator and scoring it on held-out pairs."""
from typing import List

import numpy as np

from depth2face.data.paired_sample import PairedSample
from depth2face.data.preprocessing import binarize_depth, denormalize_image
from depth2face.metrics.recon_metrics import ReconMetrics, recon_metrics
from depth2face.models.network import Network
from depth2face.tensor_core.tensor import DataException, StateException, Tensor
from depth2face.training import train_options


def prepare_inputs(depth: Tensor, input_kind: str = "depth", threshold: float = 0.0) -> Tensor:
    """Returns the generator input for a depth batch: unchanged, or binarised."""
    if input_kind == "binary":
        return binarize_depth(depth, threshold)
    return depth


def predict(
    generator: Network,
    depth: Tensor,
    batch_size: int = train_options.PREDICT_BATCH_SIZE,
    batch_statistics: bool = False,
) -> Tensor:
    """Eval-mode generator output for a depth batch, computed in fixed-size chunks.
    With batch_statistics, batch norm normalises with the statistics of each chunk
    and leaves the running ones untouched, which also works for an untrained generator."""
    if not batch_statistics and not generator.has_running_stats():
        raise StateException(
            f"{generator.name} has no batch norm running statistics; it was never trained"
        )
    outputs = [
        generator.forward(
            Tensor(depth.data[start : start + batch_size]),
            training=batch_statistics,
            track_running_stats=False,
        ).data
        for start in range(0, depth.shape[0], batch_size)
    ]
    generator.clear_cache()
    return Tensor(np.concatenate(outputs))


def evaluate(
    generator: Network,
    samples: List[PairedSample],
    input_kind: str = "depth",
    threshold: float = 0.0,
    batch_size: int = train_options.PREDICT_BATCH_SIZE,
    batch_statistics: bool = False,
) -> ReconMetrics:
    """Reconstruction metrics of the generator on samples, on the 8-bit scale."""
    if not samples:
        raise DataException("Cannot evaluate on zero samples")
    depth = Tensor(np.concatenate([sample.depth.data for sample in samples]))
    generated = predict(
        generator, prepare_inputs(depth, input_kind, threshold), batch_size, batch_statistics
    )
    truth = np.concatenate([sample.rgb.data for sample in samples])
    return recon_metrics(denormalize_image(generated), denormalize_image(truth))

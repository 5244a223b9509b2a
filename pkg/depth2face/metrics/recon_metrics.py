"""Module for the reconstruction metric battery on 8-bit intensities."""
from dataclasses import asdict, dataclass
from typing import Sequence, Union

import numpy as np

from depth2face.metrics import metric_options
from depth2face.tensor_core.tensor import ShapeException


@dataclass
class ReconMetrics:
    """Reconstruction errors and threshold accuracies (fractions in [0, 1])."""

    # pylint: disable=too-many-instance-attributes
    # One attribute per metric
    l1_norm: float
    l2_norm: float
    abs_rel: float
    sq_rel: float
    rmse_linear: float
    rmse_log: float
    rmse_scale_inv: float
    thr_1: float
    thr_2: float
    thr_3: float

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: dict) -> "ReconMetrics":
        return cls(**{name: float(values[name]) for name in metric_options.RECON_FIELDS})


ImageSet = Union[np.ndarray, Sequence[np.ndarray]]


def _as_image_set(images: ImageSet) -> np.ndarray:
    """Stacks images into (n, ...) float64, one leading axis per image."""
    if isinstance(images, np.ndarray):
        return images.astype(np.float64)
    return np.stack([np.asarray(image, dtype=np.float64) for image in images])


def recon_metrics(pred: ImageSet, gt: ImageSet) -> ReconMetrics:
    """Compares two image sets on the [0, 255] scale.
    The leading axis indexes images; all remaining axes are pixels and channels.
    Intensities are clamped to [1, 255]. The scale-invariant error is
    mean(d^2) - mean(d)^2 with d = ln pred - ln gt, without root."""
    pred, gt = _as_image_set(pred), _as_image_set(gt)
    if pred.shape != gt.shape:
        raise ShapeException(
            f"Predicted and ground-truth image sets differ: {pred.shape} vs {gt.shape}"
        )
    if pred.ndim < 2 or pred.size == 0:
        raise ShapeException(f"Expected a non-empty set of images, got shape {pred.shape}")
    pred = np.clip(pred, metric_options.CLAMP_MIN, metric_options.CLAMP_MAX)
    gt = np.clip(gt, metric_options.CLAMP_MIN, metric_options.CLAMP_MAX)

    difference = pred - gt
    log_difference = np.log(pred) - np.log(gt)
    ratio = np.maximum(pred / gt, gt / pred)
    per_image = difference.reshape(len(difference), -1)
    thresholds = [float(np.mean(ratio < limit)) for limit in metric_options.THRESHOLDS]
    return ReconMetrics(
        l1_norm=float(np.mean(np.abs(difference))),
        l2_norm=float(np.mean(np.sqrt(np.sum(per_image**2, axis=1)))),
        abs_rel=float(np.mean(np.abs(difference) / gt)),
        sq_rel=float(np.mean(difference**2 / gt)),
        rmse_linear=float(np.sqrt(np.mean(difference**2))),
        rmse_log=float(np.sqrt(np.mean(log_difference**2))),
        rmse_scale_inv=max(0.0, float(np.mean(log_difference**2) - np.mean(log_difference) ** 2)),
        thr_1=thresholds[0],
        thr_2=thresholds[1],
        thr_3=thresholds[2],
    )

"""Module for face detection accuracy and landmark localisation error."""
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from depth2face.tensor_core.tensor import DataException


@dataclass
class LandmarkEntry:
    """Detection flag and (points, 2) pixel coordinates of one image."""

    detected: bool
    points: np.ndarray

    def __post_init__(self) -> None:
        self.points = np.asarray(self.points, dtype=np.float64).reshape(-1, 2)


LandmarkSet = Dict[str, LandmarkEntry]


@dataclass
class LandmarkReport:
    """Detection accuracy over gt-detected images and mean L2 over images detected by both.
    Values are None when no image qualifies."""

    detection_accuracy: Optional[float]
    mean_l2: Optional[float]
    evaluated: int
    detected_both: int

    def to_dict(self) -> dict:
        return {
            "detection_accuracy": self.detection_accuracy,
            "mean_l2": self.mean_l2,
            "evaluated": self.evaluated,
            "detected_both": self.detected_both,
        }


def landmark_eval(pred: LandmarkSet, gt: LandmarkSet) -> LandmarkReport:
    """Compares landmarks found on generated images against those on the real ones."""
    missing = sorted(set(gt) - set(pred))
    if missing:
        raise DataException(f"Predicted landmarks lack ids: {', '.join(missing)}")
    evaluated = [image_id for image_id in sorted(gt) if gt[image_id].detected]
    hits = [image_id for image_id in evaluated if pred[image_id].detected]
    errors = []
    for image_id in hits:
        predicted, truth = pred[image_id].points, gt[image_id].points
        if predicted.shape != truth.shape:
            raise DataException(
                f"Image {image_id} has {len(predicted)} predicted and {len(truth)} "
                "ground-truth landmarks"
            )
        if len(truth):
            errors.append(float(np.mean(np.linalg.norm(predicted - truth, axis=1))))
    return LandmarkReport(
        detection_accuracy=len(hits) / len(evaluated) if evaluated else None,
        mean_l2=float(np.mean(errors)) if errors else None,
        evaluated=len(evaluated),
        detected_both=len(hits),
    )

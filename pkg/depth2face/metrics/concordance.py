"""Module for the concordance of an external attribute probe on real and generated faces.
The probe's prediction on the real image counts as ground truth, its prediction on
the generated image as the prediction."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from depth2face.metrics import metric_options
from depth2face.tensor_core.tensor import DataException


@dataclass
class AttributeTable:
    """Binary probe predictions per (id, attribute) on real and generated images.
    real and generated are (ids, attributes) boolean arrays in the same id order."""

    attributes: List[str]
    ids: List[str]
    real: np.ndarray
    generated: np.ndarray

    def __post_init__(self) -> None:
        self.real = np.asarray(self.real, dtype=bool)
        self.generated = np.asarray(self.generated, dtype=bool)
        expected = (len(self.ids), len(self.attributes))
        for name, table in (("real", self.real), ("generated", self.generated)):
            if table.shape != expected:
                raise DataException(
                    f"{name} attribute predictions have shape {table.shape}, expected {expected}"
                )
        if not self.ids:
            raise DataException("Attribute tables share no image ids")


@dataclass
class ConfusionCounts:
    """Confusion matrix of one attribute."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def statistics(self) -> Dict[str, Optional[float]]:
        """Accuracy, precision, recall and F1; undefined values are None."""
        precision = self.tp / (self.tp + self.fp) if self.tp + self.fp else None
        recall = self.tp / (self.tp + self.fn) if self.tp + self.fn else None
        if precision is None or recall is None:
            f1 = None
        elif precision + recall == 0:
            f1 = 0.0
        else:
            f1 = 2 * precision * recall / (precision + recall)
        return {
            "accuracy": (self.tp + self.tn) / self.total,
            "precision": precision,
            "recall": recall,
            "f1": f1,
        }


@dataclass
class ConcordanceReport:
    """Per-attribute statistics and their macro average over defined values."""

    per_attribute: Dict[str, Dict[str, Optional[float]]]
    average: Dict[str, Optional[float]]
    counts: Dict[str, ConfusionCounts] = field(default_factory=dict, repr=False)
    image_count: int = 0


def confusion_counts(truth: np.ndarray, prediction: np.ndarray) -> ConfusionCounts:
    truth, prediction = np.asarray(truth, dtype=bool), np.asarray(prediction, dtype=bool)
    return ConfusionCounts(
        tp=int(np.sum(truth & prediction)),
        fp=int(np.sum(~truth & prediction)),
        fn=int(np.sum(truth & ~prediction)),
        tn=int(np.sum(~truth & ~prediction)),
    )


def attribute_concordance(table: AttributeTable) -> ConcordanceReport:
    """Confusion statistics per attribute plus the macro average."""
    per_attribute, counts = {}, {}
    for column, attribute in enumerate(table.attributes):
        counts[attribute] = confusion_counts(table.real[:, column], table.generated[:, column])
        per_attribute[attribute] = counts[attribute].statistics()
    average = {}
    for statistic in metric_options.CONCORDANCE_FIELDS:
        defined = [
            values[statistic] for values in per_attribute.values() if values[statistic] is not None
        ]
        average[statistic] = float(np.mean(defined)) if defined else None
    return ConcordanceReport(per_attribute, average, counts, len(table.ids))

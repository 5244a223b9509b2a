import math

import numpy as np
import pytest

from depth2face.metrics.concordance import AttributeTable


@pytest.fixture(scope="session")
def naive_recon():
    """Returns a loop-based float64 oracle of the reconstruction metrics."""

    def compute(pred, gt):
        pred = [[min(max(float(v), 1.0), 255.0) for v in image.ravel()] for image in pred]
        gt = [[min(max(float(v), 1.0), 255.0) for v in image.ravel()] for image in gt]
        pixels = [(p, g) for image_p, image_g in zip(pred, gt) for p, g in zip(image_p, image_g)]
        count = len(pixels)
        logs = [math.log(p) - math.log(g) for p, g in pixels]
        norms = [
            math.sqrt(sum((p - g) ** 2 for p, g in zip(image_p, image_g)))
            for image_p, image_g in zip(pred, gt)
        ]
        return {
            "l1_norm": sum(abs(p - g) for p, g in pixels) / count,
            "l2_norm": sum(norms) / len(norms),
            "abs_rel": sum(abs(p - g) / g for p, g in pixels) / count,
            "sq_rel": sum((p - g) ** 2 / g for p, g in pixels) / count,
            "rmse_linear": math.sqrt(sum((p - g) ** 2 for p, g in pixels) / count),
            "rmse_log": math.sqrt(sum(d * d for d in logs) / count),
            "rmse_scale_inv": max(0.0, sum(d * d for d in logs) / count - (sum(logs) / count) ** 2),
            "thr_1": sum(max(p / g, g / p) < 1.25 for p, g in pixels) / count,
            "thr_2": sum(max(p / g, g / p) < 2.5 for p, g in pixels) / count,
            "thr_3": sum(max(p / g, g / p) < 3.75 for p, g in pixels) / count,
        }

    return compute


@pytest.fixture()
def smile_table() -> AttributeTable:
    """Ten images, one attribute: TP 2, FP 1, FN 1, TN 6."""
    real = [1, 1, 1, 0, 0, 0, 0, 0, 0, 0]
    generated = [1, 1, 0, 1, 0, 0, 0, 0, 0, 0]
    return AttributeTable(
        attributes=["smiling"],
        ids=[f"img{index}" for index in range(10)],
        real=np.array(real)[:, np.newaxis],
        generated=np.array(generated)[:, np.newaxis],
    )


@pytest.fixture()
def attribute_csvs(tmp_path):
    """Writes probe tables on real and generated images in different row order."""
    real = tmp_path / "real.csv"
    generated = tmp_path / "generated.csv"
    real.write_text("id,smiling,glasses\na,1,0\nb,0,0\nc,1,1\n")
    generated.write_text("id,glasses,smiling\nc,1,1\na,0,0\nb,0,0\n")
    return real, generated

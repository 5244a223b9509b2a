"""File to hold settings for the evaluation metrics."""

THRESHOLDS = (1.25, 2.5, 3.75)
# Intensities are compared on the 8-bit scale, clamped away from 0 for logs and ratios
CLAMP_MIN = 1.0
CLAMP_MAX = 255.0

RECON_FIELDS = (
    "l1_norm",
    "l2_norm",
    "abs_rel",
    "sq_rel",
    "rmse_linear",
    "rmse_log",
    "rmse_scale_inv",
    "thr_1",
    "thr_2",
    "thr_3",
)
CONCORDANCE_FIELDS = ("accuracy", "precision", "recall", "f1")
LANDMARK_FIELDS = ("detection_accuracy", "mean_l2")

REPORT_KINDS = ("recon", "attributes", "landmarks")
TABLE_PRECISION = 4

"""Module for metric reports: JSON files, text tables and method comparisons.

Every report is a JSON object with "kind" (recon | attributes | landmarks) and
"method". recon reports hold "metrics" with the ReconMetrics fields, landmark
reports hold "metrics" with detection_accuracy, mean_l2, evaluated and
detected_both, and attribute reports hold "per_attribute", "average" and
"image_count". Undefined values are null.
"""
import json
import numbers
import pathlib
from typing import List, Optional, Union

import pandas as pd

from depth2face.metrics import metric_options
from depth2face.metrics.concordance import ConcordanceReport
from depth2face.metrics.landmarks import LandmarkReport
from depth2face.metrics.recon_metrics import ReconMetrics
from depth2face.tensor_core.tensor import DataException

PathLike = Union[str, pathlib.Path]


def recon_report(metrics: ReconMetrics, method: str = "") -> dict:
    return {"kind": "recon", "method": method, "metrics": metrics.to_dict()}


def concordance_report(report: ConcordanceReport, method: str = "") -> dict:
    return {
        "kind": "attributes",
        "method": method,
        "per_attribute": report.per_attribute,
        "average": report.average,
        "image_count": report.image_count,
    }


def landmark_report(report: LandmarkReport, method: str = "") -> dict:
    return {"kind": "landmarks", "method": method, "metrics": report.to_dict()}


def _check_values(values: dict, names, where: str, optional: bool) -> None:
    if not isinstance(values, dict):
        raise DataException(f"{where} must be an object")
    for name in names:
        if name not in values:
            raise DataException(f"{where} is missing {name}")
        value = values[name]
        if value is None and optional:
            continue
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise DataException(f"{where}.{name} must be a number, got {value!r}")


def validate_report(report: dict) -> dict:
    """Tests a report against its schema and returns it."""
    if not isinstance(report, dict) or report.get("kind") not in metric_options.REPORT_KINDS:
        raise DataException(
            f"A report must be an object with kind in {metric_options.REPORT_KINDS}"
        )
    if not isinstance(report.get("method"), str):
        raise DataException("A report must name its method as a string")
    kind = report["kind"]
    if kind == "recon":
        _check_values(report.get("metrics"), metric_options.RECON_FIELDS, "metrics", False)
        ReconMetrics.from_dict(report["metrics"])
    elif kind == "landmarks":
        _check_values(
            report.get("metrics"), metric_options.LANDMARK_FIELDS, "metrics", optional=True
        )
    else:
        _check_values(report.get("average"), metric_options.CONCORDANCE_FIELDS, "average", True)
        if not isinstance(report.get("per_attribute"), dict):
            raise DataException("per_attribute must be an object")
        for attribute, values in report["per_attribute"].items():
            _check_values(
                values, metric_options.CONCORDANCE_FIELDS, f"per_attribute.{attribute}", True
            )
    return report


def write_report(report: dict, path: PathLike) -> str:
    """Writes a validated report as JSON."""
    validate_report(report)
    path = pathlib.Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as error:
        raise DataException(f"Cannot write report {path}: {error}") from error
    return str(path)


def read_report(path: PathLike) -> dict:
    """Reads and validates a report JSON file."""
    path = pathlib.Path(path)
    try:
        report = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as error:
        raise DataException(f"Cannot read report {path}: {error}") from error
    try:
        return validate_report(report)
    except DataException as error:
        raise DataException(f"Report {path} is invalid: {error}") from error


def report_frame(report: dict) -> pd.DataFrame:
    """Returns the report as a dataframe, one row per method or attribute."""
    if report["kind"] == "attributes":
        rows = dict(report["per_attribute"])
        rows["Average"] = report["average"]
        frame = pd.DataFrame.from_dict(rows, orient="index")
        return frame.reindex(columns=list(metric_options.CONCORDANCE_FIELDS))
    names = (
        metric_options.RECON_FIELDS
        if report["kind"] == "recon"
        else metric_options.LANDMARK_FIELDS
    )
    values = {name: report["metrics"][name] for name in names}
    return pd.DataFrame([values], index=[report["method"] or report["kind"]])


def render_table(frame: pd.DataFrame) -> str:
    """Renders a dataframe as a fixed-width text table; missing values show as '-'."""
    return frame.to_string(
        na_rep="-",
        float_format=lambda value: f"{value:.{metric_options.TABLE_PRECISION}f}",
    )


def render_report(report: dict) -> str:
    return render_table(report_frame(report))


def compare_reports(reports: List[dict], methods: Optional[List[str]] = None) -> pd.DataFrame:
    """Builds a method comparison, one row per report. All reports must be of one kind;
    attribute reports contribute their average row."""
    if not reports:
        raise DataException("Nothing to compare: no reports given")
    kinds = {report["kind"] for report in reports}
    if len(kinds) > 1:
        raise DataException(f"Cannot compare reports of different kinds: {sorted(kinds)}")
    methods = methods or [
        report["method"] or f"run_{index}" for index, report in enumerate(reports)
    ]
    if len(methods) != len(reports):
        raise DataException(f"Got {len(methods)} method names for {len(reports)} reports")
    rows = []
    for report in reports:
        if report["kind"] == "attributes":
            rows.append(report["average"])
        else:
            rows.append(report["metrics"])
    frame = pd.DataFrame(rows, index=methods)
    if kinds == {"recon"}:
        frame = frame.reindex(columns=list(metric_options.RECON_FIELDS))
    elif kinds == {"landmarks"}:
        frame = frame.reindex(columns=list(metric_options.LANDMARK_FIELDS))
    else:
        frame = frame.reindex(columns=list(metric_options.CONCORDANCE_FIELDS))
    frame.index.name = "method"
    return frame

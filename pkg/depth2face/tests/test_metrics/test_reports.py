"""
Testing classes for probe tables and metric reports.
"""
import numpy as np
import pandas as pd
import pytest

from depth2face.metrics import reports
from depth2face.metrics.concordance import attribute_concordance
from depth2face.metrics.landmarks import LandmarkEntry, landmark_eval
from depth2face.metrics.probe_tables import (
    parse_flag,
    read_attribute_table,
    read_landmark_set,
    read_table,
)
from depth2face.metrics.recon_metrics import recon_metrics
from depth2face.tensor_core.tensor import DataException


class TestProbeTables:
    """Testing class for reading probe output tables."""

    def test_attribute_tables(self, attribute_csvs):
        """Tests that tables align by id and attribute name."""
        table = read_attribute_table(*attribute_csvs)
        assert table.ids == ["a", "b", "c"]
        assert table.attributes == ["smiling", "glasses"]
        assert table.real.tolist() == [[True, False], [False, False], [True, True]]
        assert table.generated.tolist() == [[False, False], [False, False], [True, True]]

    def test_id_mismatch(self, tmp_path, attribute_csvs):
        """Tests that differing ids are listed."""
        real, _ = attribute_csvs
        other = tmp_path / "other.csv"
        other.write_text("id,smiling,glasses\na,1,0\nz,0,0\nc,1,1\n")
        with pytest.raises(DataException, match="only real: b; only generated: z"):
            read_attribute_table(real, other)

    def test_excel(self, tmp_path):
        """Tests that Excel tables read like CSV, dropping unnamed columns."""
        path = tmp_path / "probe.xlsx"
        frame = pd.DataFrame({"id": ["a", "b"], "smiling": [1, 0], "Unnamed: 2": ["", ""]})
        frame.to_excel(path, index=False)
        table = read_table(path)
        assert list(table.columns) == ["id", "smiling"]
        assert list(table["smiling"]) == ["1", "0"]

    def test_duplicates(self, tmp_path):
        """Tests that duplicate ids are rejected."""
        path = tmp_path / "dup.csv"
        path.write_text("id,smiling\na,1\na,0\n")
        with pytest.raises(DataException, match="duplicate ids: a"):
            read_table(path)

    def test_flags(self):
        """Tests the accepted binary spellings."""
        assert parse_flag(" Yes", "t.csv", "a") and not parse_flag("0", "t.csv", "a")
        with pytest.raises(DataException, match="0.5"):
            parse_flag("0.5", "t.csv", "a")

    def test_landmark_table(self, tmp_path):
        """Tests reading coordinates and empty cells of undetected images."""
        path = tmp_path / "landmarks.csv"
        path.write_text("id,detected,x1,y1,x2,y2\na,1,1,2,3,4\nb,0,,,,\n")
        landmarks = read_landmark_set(path)
        assert landmarks["a"].points.tolist() == [[1.0, 2.0], [3.0, 4.0]]
        assert not landmarks["b"].detected


class TestReports:
    """Testing class for report files, tables and comparisons."""

    def test_recon_round_trip(self, tmp_path):
        """Tests that a written recon report reads back unchanged."""
        metrics = recon_metrics(np.full((1, 2, 2), 2.0), np.full((1, 2, 2), 1.0))
        report = reports.recon_report(metrics, "depth")
        path = reports.write_report(report, tmp_path / "recon.json")
        assert reports.read_report(path) == report

    def test_unwritable_path(self, tmp_path):
        """Tests that a report path below a regular file is a data error."""
        metrics = recon_metrics(np.ones((1, 2, 2)), np.ones((1, 2, 2)))
        report = reports.recon_report(metrics, "depth")
        (tmp_path / "blocker").write_text("")
        with pytest.raises(DataException):
            reports.write_report(report, tmp_path / "blocker" / "recon.json")

    def test_concordance_nulls(self, tmp_path, smile_table):
        """Tests that undefined statistics are stored as null and render as '-'."""
        smile_table.real[:] = False
        smile_table.generated[:] = False
        report = reports.concordance_report(attribute_concordance(smile_table), "depth")
        path = reports.write_report(report, tmp_path / "attrs.json")
        assert '"precision": null' in open(path, encoding="utf-8").read()
        assert "-" in reports.render_report(reports.read_report(path))

    def test_invalid_reports(self, tmp_path):
        """Tests schema violations."""
        with pytest.raises(DataException):
            reports.validate_report({"kind": "depth", "method": ""})
        with pytest.raises(DataException):
            reports.validate_report({"kind": "recon", "method": "", "metrics": {"l1_norm": 1}})
        (tmp_path / "broken.json").write_text("[")
        with pytest.raises(DataException):
            reports.read_report(tmp_path / "broken.json")

    def test_render(self):
        """Tests four-decimal rendering."""
        pred = {"a": LandmarkEntry(True, [[3, 4]])}
        gt = {"a": LandmarkEntry(True, [[0, 0]])}
        report = reports.landmark_report(landmark_eval(pred, gt), "gan")
        table = reports.render_report(report)
        assert "5.0000" in table and "gan" in table

    def test_compare(self):
        """Tests one row per method in the given order."""
        first = reports.recon_report(
            recon_metrics(np.full((1, 2, 2), 2.0), np.full((1, 2, 2), 1.0)), "mse"
        )
        second = reports.recon_report(
            recon_metrics(np.full((1, 2, 2), 1.0), np.full((1, 2, 2), 1.0)), "gan"
        )
        frame = reports.compare_reports([first, second])
        assert list(frame.index) == ["mse", "gan"]
        assert frame.loc["gan", "l1_norm"] == 0
        renamed = reports.compare_reports([first, second], ["a", "b"])
        assert list(renamed.index) == ["a", "b"]

    def test_compare_kinds(self):
        """Tests that reports of different kinds cannot be compared."""
        recon = reports.recon_report(
            recon_metrics(np.full((1, 2, 2), 2.0), np.full((1, 2, 2), 1.0))
        )
        landmarks = reports.landmark_report(
            landmark_eval({"a": LandmarkEntry(False, [])}, {"a": LandmarkEntry(False, [])})
        )
        with pytest.raises(DataException):
            reports.compare_reports([recon, landmarks])
        with pytest.raises(DataException):
            reports.compare_reports([recon], ["a", "b"])

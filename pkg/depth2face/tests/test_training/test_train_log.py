"""
Testing classes for the training log.
"""
import pytest

from depth2face.tensor_core.tensor import DataException
from depth2face.training.train_log import TrainLog, TrainRecord


@pytest.fixture()
def mixed_log() -> TrainLog:
    return TrainLog(
        [
            TrainRecord(step=1, d_loss=1.25, g_total=0.75, g_mse=0.5, g_adv=0.7),
            TrainRecord(step=2, d_loss=None, g_total=0.5, g_mse=0.5),
            TrainRecord(step=4, d_loss=1.0, g_total=0.625, g_mse=0.25, g_adv=0.6, ms=12.5),
        ]
    )


class TestTrainLog:
    """Testing class for TrainLog."""

    def test_csv_layout(self, tmp_path, mixed_log):
        """Tests the header and the empty cells of absent values."""
        path = mixed_log.to_csv(tmp_path / "log.csv")
        lines = open(path, encoding="utf-8").read().splitlines()
        assert lines == [
            "step,d_loss,g_total,g_mse,g_adv,ms",
            "1,1.25,0.75,0.5,0.7,",
            "2,,0.5,0.5,,",
            "4,1.0,0.625,0.25,0.6,12.5",
        ]

    def test_read_back(self, tmp_path, mixed_log):
        """Tests that a written log reads back to the same records."""
        path = mixed_log.to_csv(tmp_path / "log.csv")
        assert TrainLog.read_csv(path).records == mixed_log.records

    def test_increasing_steps(self, mixed_log):
        """Tests that a record cannot go back in time."""
        with pytest.raises(DataException):
            mixed_log.append(TrainRecord(step=4, d_loss=None, g_total=1.0, g_mse=1.0))

    def test_truncate(self, mixed_log):
        """Tests dropping the records after a checkpoint."""
        assert [record.step for record in mixed_log.truncate(2).records] == [1, 2]

    def test_single_record(self, mixed_log):
        """Tests looking up a record by step."""
        assert mixed_log.get_single_record(2).d_loss is None
        assert mixed_log.get_single_record(3) is None

    def test_foreign_csv(self, tmp_path):
        """Tests that a CSV with other columns is not taken for a log."""
        path = tmp_path / "other.csv"
        path.write_text("id,value\na,1\n")
        with pytest.raises(DataException):
            TrainLog.read_csv(path)

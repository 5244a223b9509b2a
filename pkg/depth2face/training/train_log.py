"""Module for the append-only training log and its CSV file."""
import pathlib
from dataclasses import asdict, dataclass
from typing import List, Optional, Union

import pandas as pd

from depth2face.tensor_core.tensor import DataException
from depth2face.training import train_options


@dataclass
class TrainRecord:
    """Losses of one step, measured before the updates of that step.
    d_loss and g_adv are absent in mse-only mode; ms only when timing is recorded."""

    step: int
    d_loss: Optional[float]
    g_total: float
    g_mse: float
    g_adv: Optional[float] = None
    ms: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


class TrainLog:
    """Object representing the records of a run in step order."""

    def __init__(self, records: Optional[List[TrainRecord]] = None) -> None:
        self.records: List[TrainRecord] = []
        for record in records or []:
            self.append(record)

    def append(self, record: TrainRecord) -> None:
        """Adds a record; steps must increase."""
        if self.records and record.step <= self.records[-1].step:
            raise DataException(
                f"Log records must have increasing steps, got {record.step} "
                f"after {self.records[-1].step}"
            )
        self.records.append(record)

    def truncate(self, step: int) -> "TrainLog":
        """Drops records after step, used when resuming from an earlier checkpoint."""
        self.records = [record for record in self.records if record.step <= step]
        return self

    def to_dataframe(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            [record.to_dict() for record in self.records], columns=train_options.LOG_COLUMNS
        )
        frame["step"] = frame["step"].astype("int64")
        return frame

    def to_csv(self, path: Union[str, pathlib.Path]) -> str:
        """Writes the log as CSV; absent values are empty cells."""
        path = pathlib.Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            self.to_dataframe().to_csv(path, index=False, na_rep="", lineterminator="\n")
        except OSError as error:
            raise DataException(f"Cannot write training log {path}: {error}") from error
        return str(path)

    @classmethod
    def read_csv(cls, path: Union[str, pathlib.Path]) -> "TrainLog":
        """Reads a log written by to_csv."""
        try:
            frame = pd.read_csv(path)
        except (OSError, ValueError) as error:
            raise DataException(f"Cannot read training log {path}: {error}") from error
        if list(frame.columns) != train_options.LOG_COLUMNS:
            raise DataException(f"{path} is not a training log (columns {list(frame.columns)})")
        records = []
        for row in frame.to_dict("records"):
            values = {name: None if pd.isna(value) else value for name, value in row.items()}
            values["step"] = int(values["step"])
            records.append(TrainRecord(**values))
        return cls(records)

    def get_single_record(self, step: int) -> Optional[TrainRecord]:
        """Get a single record based on its step."""
        return next((record for record in self.records if record.step == step), None)

    def __len__(self) -> int:
        return len(self.records)

    def __repr__(self) -> str:
        return f"TrainLog({len(self.records)} records)"

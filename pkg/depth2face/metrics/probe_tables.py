"""Module for reading the output tables of external probes (CSV or Excel)."""
import pathlib
from typing import List, Union

import numpy as np
import pandas as pd

from depth2face.metrics.concordance import AttributeTable
from depth2face.metrics.landmarks import LandmarkEntry, LandmarkSet
from depth2face.tensor_core.tensor import DataException

PathLike = Union[str, pathlib.Path]
EXCEL_SUFFIXES = (".xlsx", ".xls")
TRUE_VALUES = ("1", "true", "yes")
FALSE_VALUES = ("0", "false", "no")


def read_table(path: PathLike) -> pd.DataFrame:
    """Opens a csv or xls(x) file as a pandas dataframe of strings."""
    path = pathlib.Path(path)
    try:
        if path.suffix.lower() in EXCEL_SUFFIXES:
            dataframe = pd.read_excel(path, dtype=str)
        else:
            dataframe = pd.read_csv(path, dtype=str)
    except (OSError, ValueError) as error:
        raise DataException(f"Cannot read table {path}: {error}") from error
    dataframe = dataframe.fillna("")
    # Remove columns without a header -> often Excel artefacts
    dataframe = dataframe[dataframe.columns.drop(list(dataframe.filter(regex="Unnamed:")))]
    if "id" not in dataframe.columns:
        raise DataException(f"Table {path} has no id column")
    dataframe["id"] = dataframe["id"].str.strip()
    duplicates = sorted(set(dataframe["id"][dataframe["id"].duplicated()]))
    if duplicates:
        raise DataException(f"Table {path} has duplicate ids: {', '.join(duplicates)}")
    return dataframe


def parse_flag(value: str, path: PathLike, image_id: str) -> bool:
    """Reads a 0/1 cell."""
    cleaned = str(value).strip().lower()
    if cleaned in TRUE_VALUES:
        return True
    if cleaned in FALSE_VALUES:
        return False
    raise DataException(f"Table {path}: id {image_id} has non-binary value {value!r}")


def _flags(dataframe: pd.DataFrame, attributes: List[str], path: PathLike) -> np.ndarray:
    return np.array(
        [
            [parse_flag(row[attribute], path, row["id"]) for attribute in attributes]
            for _, row in dataframe.iterrows()
        ],
        dtype=bool,
    ).reshape(len(dataframe), len(attributes))


def read_attribute_table(real_path: PathLike, generated_path: PathLike) -> AttributeTable:
    """Reads `id,attr1,...,attrK` tables of the probe on real and generated images."""
    real = read_table(real_path)
    generated = read_table(generated_path)
    attributes = [column for column in real.columns if column != "id"]
    if sorted(attributes) != sorted(column for column in generated.columns if column != "id"):
        raise DataException(
            f"Attribute columns of {real_path} and {generated_path} differ"
        )
    only_real = sorted(set(real["id"]) - set(generated["id"]))
    only_generated = sorted(set(generated["id"]) - set(real["id"]))
    if only_real or only_generated:
        raise DataException(
            f"Attribute tables cover different ids; only real: {', '.join(only_real) or '-'}; "
            f"only generated: {', '.join(only_generated) or '-'}"
        )
    real = real.sort_values("id")
    generated = generated.set_index("id").loc[real["id"]].reset_index()
    return AttributeTable(
        attributes=attributes,
        ids=list(real["id"]),
        real=_flags(real, attributes, real_path),
        generated=_flags(generated, attributes, generated_path),
    )


def read_landmark_set(path: PathLike) -> LandmarkSet:
    """Reads an `id,detected,x1,y1,...,xP,yP` table. Coordinates of undetected
    images may be empty."""
    dataframe = read_table(path)
    if "detected" not in dataframe.columns:
        raise DataException(f"Landmark table {path} has no detected column")
    coordinates = [column for column in dataframe.columns if column not in ("id", "detected")]
    if len(coordinates) % 2:
        raise DataException(f"Landmark table {path} has an odd number of coordinate columns")
    landmarks = {}
    for _, row in dataframe.iterrows():
        detected = parse_flag(row["detected"], path, row["id"])
        points = np.zeros((0, 2))
        if detected:
            try:
                points = np.array([float(row[column]) for column in coordinates]).reshape(-1, 2)
            except ValueError as error:
                raise DataException(
                    f"Landmark table {path}: id {row['id']} has an invalid coordinate"
                ) from error
        landmarks[row["id"]] = LandmarkEntry(detected, points)
    return landmarks

from typing import List

import pytest

from depth2face.data.paired_sample import PairedSample
from depth2face.data.synthetic import SynthSpec, synthesize_dataset, write_dataset


@pytest.fixture(scope="session")
def data_spec() -> SynthSpec:
    return SynthSpec(seed=7, count=10)


@pytest.fixture(scope="session")
def data_samples(data_spec) -> List[PairedSample]:
    """Creates the synthetic pairs written by the dataset tests."""
    return synthesize_dataset(data_spec)


@pytest.fixture()
def dataset_dir(tmp_path, data_samples):
    """Writes the synthetic pairs to disk and returns the manifest path."""
    return write_dataset(data_samples, tmp_path / "synth")

from typing import List

import pytest

from depth2face.data.paired_sample import PairedSample
from depth2face.data.synthetic import SynthSpec, synthesize_dataset
from depth2face.training.train_options import TrainConfig


@pytest.fixture(scope="session")
def synthetic_samples() -> List[PairedSample]:
    """Creates a small synthetic dataset shared by the training tests."""
    return synthesize_dataset(SynthSpec(seed=5, count=10))


@pytest.fixture(scope="session")
def train_samples(synthetic_samples) -> List[PairedSample]:
    """Returns the train split of the small synthetic dataset."""
    return [sample for sample in synthetic_samples if sample.split == "train"]


@pytest.fixture()
def small_config() -> TrainConfig:
    """Creates a narrow, short training configuration."""
    return TrainConfig(batch_size=4, total_steps=3, seed=2, base_filters=4, checkpoint_interval=2)

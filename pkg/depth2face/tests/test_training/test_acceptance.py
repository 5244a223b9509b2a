"""
Testing classes for end-to-end training behaviour on the synthetic task.
These runs take minutes and only run with --runslow.
"""
import numpy as np
import pytest

from depth2face.data.synthetic import SynthSpec, synthesize_dataset
from depth2face.tensor_core.tensor import Tensor
from depth2face.training.inference import evaluate
from depth2face.training.train_options import TrainConfig
from depth2face.training.trainer import DetCGANTrainer

STEPS = 1500


@pytest.fixture(scope="module")
def task():
    samples = synthesize_dataset(SynthSpec(seed=11, count=80))
    train = [sample for sample in samples if sample.split == "train"]
    held_out = [sample for sample in samples if sample.split == "test"]
    return train, held_out


def train_run(task, **settings):
    train, held_out = task
    config = TrainConfig(batch_size=16, total_steps=STEPS, seed=3, base_filters=8, **settings)
    trainer = DetCGANTrainer.from_config(config, quiet=True)
    before = evaluate(
        trainer.generator, held_out, config.input_kind, batch_statistics=True
    )
    log = trainer.fit(train)
    after = evaluate(trainer.generator, held_out, config.input_kind)
    return trainer, log, before, after


@pytest.mark.slow
class TestAcceptance:
    """Testing class for learning behaviour."""

    def test_mse_only_converges(self, task):
        """Tests that mse-only training halves the held-out L1 error."""
        _, log, before, after = train_run(task, mode="mse-only")
        assert after.l1_norm <= 0.5 * before.l1_norm
        assert all(record.d_loss is None for record in log.records)

    def test_gan_sanity(self, task):
        """Tests that adversarial training lowers the generator loss without saturating.
        The loss at the start and at the end are the means of the first and last 20 logged
        steps rather than single-step values such as step 0."""
        trainer, log, _, _ = train_run(task)
        first = np.mean([record.g_total for record in log.records[:20]])
        last = np.mean([record.g_total for record in log.records[-20:]])
        assert last <= 0.7 * first
        train, _ = task
        depth = Tensor(np.concatenate([sample.depth.data for sample in train[:16]]))
        fake = trainer.generator.forward(depth, training=False, track_running_stats=False)
        verdict = trainer.discriminator.forward(fake, training=False, track_running_stats=False)
        assert 0.05 < float(np.mean(verdict.data)) < 0.95

    def test_binary_inputs_lose_detail(self, task):
        """Tests that binary silhouettes reconstruct worse than full depth."""
        _, _, _, depth = train_run(task, mode="mse-only")
        _, _, _, binary = train_run(task, mode="mse-only", input_kind="binary")
        assert binary.l1_norm > depth.l1_norm
        assert binary.rmse_linear > depth.rmse_linear

"""
Testing classes for the training step, the training loop and resuming.
"""
import numpy as np
import pandas as pd
import pytest

from depth2face.data.batching import batch_for_step
from depth2face.metrics.recon_metrics import ReconMetrics
from depth2face.models.checkpoint import load_checkpoint
from depth2face.tensor_core.tensor import NumericException, StateException
from depth2face.training.inference import evaluate, predict
from depth2face.training.train_log import TrainLog
from depth2face.training.train_options import TrainConfig
from depth2face.training.trainer import DetCGANTrainer, fit


def snapshot(network):
    """Copies every parameter of a network."""
    return {name: tensor.data.copy() for name, tensor in network.parameters().items()}


def unchanged(network, before) -> bool:
    return all(
        np.array_equal(tensor.data, before[name])
        for name, tensor in network.parameters().items()
    )


class TestTrainStep:
    """Testing class for single training steps."""

    def test_gan_step_record(self, train_samples, small_config):
        """Tests that a gan step records all losses and their combination."""
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        record = trainer.train_step(batch_for_step(train_samples, 4, 2, 0))
        assert record.step == 1 and trainer.step == 1
        assert record.d_loss > 0 and record.g_adv > 0 and record.g_mse > 0
        assert record.g_total == pytest.approx(0.1 * record.g_mse + record.g_adv, abs=1e-12)
        assert record.ms is None

    def test_zero_learning_rate(self, train_samples):
        """Tests that lr 0 leaves every parameter bitwise unchanged."""
        config = TrainConfig(lr=0.0, batch_size=4, base_filters=4)
        trainer = DetCGANTrainer.from_config(config, quiet=True)
        generator, discriminator = snapshot(trainer.generator), snapshot(trainer.discriminator)
        trainer.train_step(batch_for_step(train_samples, 4, 0, 0))
        assert unchanged(trainer.generator, generator)
        assert unchanged(trainer.discriminator, discriminator)

    def test_discriminator_update_spares_generator(self, train_samples, small_config):
        """Tests that only the generator optimizer moves generator parameters."""
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        trainer.generator_state.lr = 0.0
        generator, discriminator = snapshot(trainer.generator), snapshot(trainer.discriminator)
        trainer.train_step(batch_for_step(train_samples, 4, 2, 0))
        assert unchanged(trainer.generator, generator)
        assert not unchanged(trainer.discriminator, discriminator)

    def test_generator_update_spares_discriminator(self, train_samples, small_config):
        """Tests that the generator update neither moves nor re-normalises the discriminator."""
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        trainer.discriminator_state.lr = 0.0
        discriminator = snapshot(trainer.discriminator)
        trainer.train_step(batch_for_step(train_samples, 4, 2, 0))
        assert unchanged(trainer.discriminator, discriminator)
        # One real and one fake pass per discriminator update, none for the generator update
        assert all(state.tracked == 2 for state in trainer.discriminator.running_states().values())

    def test_mse_only(self, train_samples):
        """Tests that mse-only leaves the discriminator untouched and d_loss absent."""
        config = TrainConfig(mode="mse-only", batch_size=4, base_filters=4)
        trainer = DetCGANTrainer.from_config(config, quiet=True)
        discriminator = snapshot(trainer.discriminator)
        record = trainer.train_step(batch_for_step(train_samples, 4, 0, 0))
        assert record.d_loss is None and record.g_adv is None
        assert record.g_total == record.g_mse
        assert unchanged(trainer.discriminator, discriminator)
        assert all(state.tracked == 0 for state in trainer.discriminator.running_states().values())

    def test_mse_only_ignores_discriminator(self, train_samples):
        """Tests that the mse-only trajectory does not depend on the discriminator."""
        config = TrainConfig(mode="mse-only", batch_size=4, base_filters=4, seed=1)
        first = DetCGANTrainer.from_config(config, quiet=True)
        second = DetCGANTrainer.from_config(config, quiet=True)
        for tensor in second.discriminator.parameters().values():
            tensor.data[...] = 0.5
        for step in range(2):
            batch = batch_for_step(train_samples, 4, 1, step)
            assert first.train_step(batch) == second.train_step(batch)
        assert unchanged(second.generator, snapshot(first.generator))

    def test_same_seed_same_losses(self, train_samples, small_config):
        """Tests bitwise identical first-step losses of two fresh trainers."""
        batch = batch_for_step(train_samples, 4, 2, 0)
        first = DetCGANTrainer.from_config(small_config, quiet=True).train_step(batch)
        second = DetCGANTrainer.from_config(small_config, quiet=True).train_step(batch)
        assert first == second

    def test_binary_inputs(self, train_samples):
        """Tests that binary mode feeds binarised depth to the generator."""
        config = TrainConfig(input_kind="binary", batch_size=4, base_filters=4)
        trainer = DetCGANTrainer.from_config(config, quiet=True)
        inputs, _ = trainer.prepare_batch(batch_for_step(train_samples, 4, 0, 0))
        assert set(np.unique(inputs.data)) <= {-1.0, 1.0}

    def test_non_finite_abort(self, train_samples, small_config):
        """Tests that a NaN parameter aborts with the diagnostic record."""
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        trainer.generator.parameters()["0.weight"].data[...] = np.nan
        with pytest.raises(NumericException) as error:
            trainer.train_step(batch_for_step(train_samples, 4, 2, 0))
        assert error.value.record.step == 1
        assert trainer.step == 0

    def test_timing(self, train_samples):
        """Tests that the ms column is only filled on request."""
        config = TrainConfig(batch_size=4, base_filters=4, record_timing=True)
        record = DetCGANTrainer.from_config(config, quiet=True).train_step(
            batch_for_step(train_samples, 4, 0, 0)
        )
        assert record.ms > 0


class TestFit:
    """Testing class for the training loop."""

    def test_zero_steps(self, tmp_path, train_samples):
        """Tests that zero steps keep the initial networks and write one checkpoint."""
        config = TrainConfig(batch_size=4, base_filters=4, total_steps=0)
        trainer = DetCGANTrainer.from_config(config, quiet=True)
        before = snapshot(trainer.generator)
        log = trainer.fit(train_samples, tmp_path)
        assert len(log) == 0
        assert unchanged(trainer.generator, before)
        assert sorted(path.name for path in (tmp_path / "checkpoints").iterdir()) == [
            "final.d2fc",
            "step_000000.d2fc",
        ]

    def test_run_directory(self, tmp_path, synthetic_samples, small_config):
        """Tests checkpoints, log and held-out report of a short run."""
        train = [sample for sample in synthetic_samples if sample.split == "train"]
        held_out = [sample for sample in synthetic_samples if sample.split == "test"]
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        log = trainer.fit(train, tmp_path, held_out)
        assert [record.step for record in log.records] == [1, 2, 3]
        names = sorted(path.name for path in (tmp_path / "checkpoints").iterdir())
        assert names == ["final.d2fc", "step_000000.d2fc", "step_000002.d2fc"]
        frame = pd.read_csv(tmp_path / "log.csv")
        assert list(frame.columns) == ["step", "d_loss", "g_total", "g_mse", "g_adv", "ms"]
        assert frame["ms"].isna().all()
        assert (tmp_path / "heldout_metrics.json").is_file()
        assert load_checkpoint(tmp_path / "checkpoints" / "final.d2fc").step == 3

    def test_mse_only_log(self, tmp_path, train_samples):
        """Tests that the mse-only log leaves d_loss and g_adv empty."""
        config = TrainConfig(mode="mse-only", batch_size=4, base_filters=4, total_steps=2)
        DetCGANTrainer.from_config(config, quiet=True).fit(train_samples, tmp_path)
        lines = (tmp_path / "log.csv").read_text().splitlines()
        assert lines[0] == "step,d_loss,g_total,g_mse,g_adv,ms"
        assert lines[1].startswith("1,,")
        assert lines[1].endswith(",,")

    def test_deterministic_artefacts(self, tmp_path, train_samples, small_config):
        """Tests byte-identical logs and checkpoints of two runs with the same seed."""
        for name in ("a", "b"):
            DetCGANTrainer.from_config(small_config, quiet=True).fit(train_samples, tmp_path / name)
        for name in ("log.csv", "checkpoints/final.d2fc"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_resume(self, tmp_path, train_samples, small_config):
        """Tests that resuming from step 2 reproduces step 3 and the final parameters."""
        full = DetCGANTrainer.from_config(small_config, quiet=True)
        full.fit(train_samples, tmp_path / "full")
        checkpoint = load_checkpoint(tmp_path / "full" / "checkpoints" / "step_000002.d2fc")
        log = TrainLog.read_csv(tmp_path / "full" / "log.csv")
        resumed = DetCGANTrainer.from_checkpoint(checkpoint, log=log, quiet=True)
        assert resumed.step == 2 and len(resumed.log) == 2
        resumed.fit(train_samples)
        assert resumed.log.get_single_record(3) == full.log.get_single_record(3)
        assert unchanged(resumed.generator, snapshot(full.generator))
        assert unchanged(resumed.discriminator, snapshot(full.discriminator))

    def test_abort_flushes_log(self, tmp_path, train_samples, small_config):
        """Tests that an abort keeps the initial checkpoint and writes the log."""
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        trainer.generator.parameters()["0.bias"].data[...] = np.inf
        with pytest.raises(NumericException):
            trainer.fit(train_samples, tmp_path)
        assert (tmp_path / "checkpoints" / "step_000000.d2fc").is_file()
        assert (tmp_path / "log.csv").is_file()

    def test_fit_function(self, train_samples, small_config):
        """Tests the functional entry point."""
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        log = fit(trainer.generator, trainer.discriminator, train_samples, small_config)
        assert len(log) == 3


class TestInference:
    """Testing class for prediction and evaluation."""

    def test_predict_needs_statistics(self, train_samples, small_config):
        """Tests that an untrained generator cannot run in eval mode."""
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        depth = batch_for_step(train_samples, 4, 0, 0).depth
        with pytest.raises(StateException):
            predict(trainer.generator, depth)
        assert predict(trainer.generator, depth, batch_statistics=True).shape == (4, 3, 64, 64)

    def test_predict_chunks(self, train_samples, small_config):
        """Tests that chunked eval-mode prediction equals a single pass."""
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        trainer.train_step(batch_for_step(train_samples, 4, 2, 0))
        depth = batch_for_step(train_samples, 8, 0, 0).depth
        whole = predict(trainer.generator, depth, batch_size=8)
        chunked = predict(trainer.generator, depth, batch_size=3)
        assert np.allclose(whole.data, chunked.data, atol=1e-6)

    def test_evaluate(self, synthetic_samples, small_config):
        """Tests that evaluation returns valid reconstruction metrics."""
        trainer = DetCGANTrainer.from_config(small_config, quiet=True)
        metrics = evaluate(trainer.generator, synthetic_samples, batch_statistics=True)
        assert isinstance(metrics, ReconMetrics)
        assert metrics.l1_norm > 0
        assert 0 <= metrics.thr_1 <= metrics.thr_2 <= metrics.thr_3 <= 1

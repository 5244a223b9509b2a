"""Module for training the generator, adversarially or on MSE alone.

One gan-mode step: the generator runs once on the batch; the discriminator takes
K updates on the real images and the detached fakes; then the generator takes
one update on lambda * MSE + adversarial, with the gradient of the adversarial
term flowing back through the discriminator, whose running statistics are
frozen during that pass. An mse-only step skips the discriminator entirely.
"""
import pathlib
import sys
import time
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from tqdm import tqdm

from depth2face.data.batching import batch_for_step
from depth2face.data.paired_sample import Batch, PairedSample
from depth2face.losses.gan_losses import (
    LossConfig,
    LossValue,
    combined_generator_loss,
    discriminator_loss,
    mse_loss,
)
from depth2face.metrics import reports
from depth2face.models.checkpoint import Checkpoint, save_checkpoint
from depth2face.models.discriminator import build_discriminator
from depth2face.models.generator import build_generator
from depth2face.models.network import Network
from depth2face.tensor_core.tensor import NumericException, Rng, Tensor
from depth2face.training.adam import AdamState, adam_step
from depth2face.training.inference import evaluate, prepare_inputs
from depth2face.training.train_log import TrainLog, TrainRecord
from depth2face.training.train_options import TrainConfig

PathLike = Union[str, pathlib.Path]
CHECKPOINT_DIR = "checkpoints"
FINAL_CHECKPOINT = "final.d2fc"
LOG_FILE = "log.csv"
HELDOUT_REPORT = "heldout_metrics.json"


def checkpoint_name(step: int) -> str:
    return f"step_{step:06d}.d2fc"


class DetCGANTrainer:
    """Object holding both networks, their optimizer states and the run log.
    Single writer: one trainer updates its networks, nothing else may touch them
    while a step runs."""

    def __init__(
        self,
        generator: Network,
        discriminator: Network,
        config: TrainConfig,
        quiet: bool = False,
    ) -> None:
        """Creates a trainer at step 0 with fresh optimizer states."""
        self.generator = generator
        self.discriminator = discriminator
        self.config = config
        self.loss_config = LossConfig(config.mse_weight)
        self.generator_state = self.__new_state()
        self.discriminator_state = self.__new_state()
        self.step = 0
        self.log = TrainLog()
        self.quiet = quiet

    def __new_state(self) -> AdamState:
        return AdamState(self.config.lr, self.config.beta1, self.config.beta2, self.config.eps)

    @classmethod
    def from_config(cls, config: TrainConfig, quiet: bool = False) -> "DetCGANTrainer":
        """Builds freshly initialised networks from the seed of config."""
        rng = Rng(config.seed)
        generator = build_generator(rng.child("generator"), config.base_filters)
        discriminator = build_discriminator(rng.child("discriminator"), config.base_filters)
        return cls(generator, discriminator, config, quiet)

    @classmethod
    def from_checkpoint(
        cls,
        checkpoint: Checkpoint,
        config: Optional[TrainConfig] = None,
        log: Optional[TrainLog] = None,
        quiet: bool = False,
    ) -> "DetCGANTrainer":
        """Restores a trainer from a checkpoint. The config stored in the
        checkpoint is used unless another one is given."""
        config = config or TrainConfig.from_dict(checkpoint.config)
        trainer = cls(
            checkpoint.get_network("generator"),
            checkpoint.get_network("discriminator"),
            config,
            quiet,
        )
        trainer.step = checkpoint.step
        if "generator" in checkpoint.optimizer_states:
            trainer.generator_state = AdamState.from_dict(checkpoint.optimizer_states["generator"])
        if "discriminator" in checkpoint.optimizer_states:
            trainer.discriminator_state = AdamState.from_dict(
                checkpoint.optimizer_states["discriminator"]
            )
        for state in (trainer.generator_state, trainer.discriminator_state):
            state.lr = config.lr
        if log is not None:
            trainer.log = log.truncate(checkpoint.step)
        return trainer

    def save(self, path: PathLike) -> str:
        """Writes networks, optimizer states, step and config to a checkpoint."""
        return save_checkpoint(
            path,
            {"generator": self.generator, "discriminator": self.discriminator},
            step=self.step,
            optimizer_states={
                "generator": self.generator_state.to_dict(),
                "discriminator": self.discriminator_state.to_dict(),
            },
            config=self.config.to_dict(),
        )

    # STEPS
    def prepare_batch(self, batch: Batch) -> Tuple[Tensor, Tensor]:
        """Returns the (generator input, target) pair of a batch."""
        inputs = prepare_inputs(batch.depth, self.config.input_kind, self.config.binary_threshold)
        return inputs, batch.rgb

    def __check_finite(self, loss: LossValue, record: TrainRecord, what: str) -> None:
        if not loss.is_finite():
            raise NumericException(
                f"Non-finite {what} loss at step {record.step}: {loss.breakdown}", record
            )

    def __discriminator_update(self, real: Tensor, fake: Tensor, record: TrainRecord) -> float:
        """One discriminator update on real images and detached fakes."""
        discriminator = self.discriminator
        discriminator.zero_grad()
        d_on_fake = discriminator.forward(fake).detach()
        d_on_real = discriminator.forward(real)
        loss = discriminator_loss(d_on_real, d_on_fake)
        record.d_loss = loss.total
        self.__check_finite(loss, record, "discriminator")
        discriminator.backward(loss.grads["d_on_real"])
        # Second pass over the fakes restores their cache without counting them twice
        discriminator.forward(fake, track_running_stats=False)
        discriminator.backward(loss.grads["d_on_fake"])
        adam_step(discriminator.parameters(), None, self.discriminator_state)
        discriminator.zero_grad()
        discriminator.clear_cache()
        return loss.total

    def __generator_update(self, fake: Tensor, target: Tensor, record: TrainRecord) -> None:
        """One generator update through the cached forward pass of fake."""
        if self.config.mode == "gan":
            d_on_fake = self.discriminator.forward(fake.detach(), track_running_stats=False)
            loss = combined_generator_loss(fake, target, d_on_fake, self.loss_config)
        else:
            loss = mse_loss(fake, target)
        record.g_total, record.g_mse, record.g_adv = loss.total, loss.mse, loss.adversarial
        self.__check_finite(loss, record, "generator")
        grad = loss.grads["generated"]
        if self.config.mode == "gan":
            grad = grad + self.discriminator.backward(loss.grads["d_on_fake"])
            self.discriminator.zero_grad()
            self.discriminator.clear_cache()
        self.generator.zero_grad()
        self.generator.backward(grad)
        adam_step(self.generator.parameters(), None, self.generator_state)
        self.generator.zero_grad()
        self.generator.clear_cache()

    def train_step(self, batch: Batch) -> TrainRecord:
        """Runs one training step on batch and returns its record."""
        started = time.perf_counter()
        inputs, target = self.prepare_batch(batch)
        record = TrainRecord(step=self.step + 1, d_loss=None, g_total=np.nan, g_mse=np.nan)
        fake = self.generator.forward(inputs)
        if not fake.is_finite():
            raise NumericException(
                f"Generator produced non-finite output at step {record.step}", record
            )
        if self.config.mode == "gan":
            for _ in range(self.config.discriminator_steps):
                self.__discriminator_update(target, fake.detach(), record)
        self.__generator_update(fake, target, record)
        self.step = record.step
        if self.config.record_timing:
            record.ms = (time.perf_counter() - started) * 1000.0
        return record

    # RUNS
    def __write_checkpoint(self, run_dir: Optional[pathlib.Path], name: str) -> Optional[str]:
        if run_dir is None:
            return None
        path = self.save(run_dir / CHECKPOINT_DIR / name)
        self.log.to_csv(run_dir / LOG_FILE)
        return path

    def fit(
        self,
        samples: List[PairedSample],
        run_dir: Optional[PathLike] = None,
        eval_samples: Optional[List[PairedSample]] = None,
    ) -> TrainLog:
        """Trains until config.total_steps. The batch of each step only depends on
        (seed, step), so a trainer restored from a checkpoint continues exactly
        where the interrupted run was. With a run directory, periodic checkpoints, a
        final checkpoint and log.csv are written there; with eval_samples the
        final generator is scored and the report stored next to them."""
        config = self.config
        run_dir = pathlib.Path(run_dir) if run_dir is not None else None
        if self.step == 0:
            self.__write_checkpoint(run_dir, checkpoint_name(0))
        if not self.quiet:
            print(
                f"Training {config.mode} from step {self.step} to {config.total_steps} "
                f"on {len(samples)} pairs",
                flush=True,
                file=sys.stderr,
            )
        progress = tqdm(
            range(self.step, config.total_steps),
            desc="Training",
            disable=self.quiet,
        )
        for step in progress:
            batch = batch_for_step(samples, config.batch_size, config.seed, step)
            try:
                record = self.train_step(batch)
            except NumericException as error:
                if run_dir is not None:
                    self.log.to_csv(run_dir / LOG_FILE)
                if not self.quiet:
                    print(f"Aborting: {error}", flush=True, file=sys.stderr)
                raise
            if record.step % config.log_interval == 0 or record.step == config.total_steps:
                self.log.append(record)
                progress.set_postfix(self.__postfix(record))
            if record.step % config.checkpoint_interval == 0:
                self.__write_checkpoint(run_dir, checkpoint_name(record.step))
        self.__write_checkpoint(run_dir, FINAL_CHECKPOINT)
        if eval_samples:
            # A generator that never trained normalises with batch statistics
            metrics = evaluate(
                self.generator,
                eval_samples,
                config.input_kind,
                config.binary_threshold,
                batch_statistics=not self.generator.has_running_stats(),
            )
            if run_dir is not None:
                reports.write_report(
                    reports.recon_report(metrics, config.mode), run_dir / HELDOUT_REPORT
                )
        return self.log

    @staticmethod
    def __postfix(record: TrainRecord) -> Dict[str, str]:
        values = {"g": f"{record.g_total:.4f}"}
        if record.d_loss is not None:
            values["d"] = f"{record.d_loss:.4f}"
        return values


def train_step(trainer: DetCGANTrainer, batch: Batch) -> TrainRecord:
    """Runs one step of trainer on batch."""
    return trainer.train_step(batch)


def fit(
    generator: Network,
    discriminator: Network,
    samples: List[PairedSample],
    config: TrainConfig,
    run_dir: Optional[PathLike] = None,
    quiet: bool = True,
) -> TrainLog:
    """Trains generator and discriminator in place and returns the log."""
    return DetCGANTrainer(generator, discriminator, config, quiet).fit(samples, run_dir)

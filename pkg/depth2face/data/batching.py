"""Module for seeded mini-batching. The batch of a step is a pure function of
(seed, step), so a resumed run sees the same batches as an uninterrupted one."""
import functools
import math
from typing import Iterator, List, Tuple

from depth2face.data.paired_sample import Batch, PairedSample
from depth2face.tensor_core.tensor import ConfigException, DataException, Rng


@functools.lru_cache(maxsize=8)
def epoch_permutation(count: int, seed: int, epoch: int) -> Tuple[int, ...]:
    """Returns the sample order of an epoch."""
    return tuple(int(index) for index in Rng(seed).child("epoch", epoch).permutation(count))


def _check(samples: List[PairedSample], batch_size: int) -> None:
    if not samples:
        raise DataException("Cannot draw batches from an empty dataset")
    if batch_size < 1:
        raise ConfigException(f"batch_size must be >= 1, got {batch_size}")


def batches_per_epoch(count: int, batch_size: int) -> int:
    """Number of batches per epoch; the partial last batch is kept."""
    return math.ceil(count / batch_size)


def batches(
    samples: List[PairedSample], batch_size: int, seed: int, epoch: int = 0
) -> Iterator[Batch]:
    """Yields the batches of one epoch in seeded order."""
    _check(samples, batch_size)
    order = epoch_permutation(len(samples), seed, epoch)
    for start in range(0, len(order), batch_size):
        yield Batch.from_samples([samples[index] for index in order[start : start + batch_size]])


def batch_for_step(samples: List[PairedSample], batch_size: int, seed: int, step: int) -> Batch:
    """Returns the batch consumed by the zero-based training step."""
    _check(samples, batch_size)
    epoch, position = divmod(step, batches_per_epoch(len(samples), batch_size))
    order = epoch_permutation(len(samples), seed, epoch)
    start = position * batch_size
    return Batch.from_samples([samples[index] for index in order[start : start + batch_size]])

"""
Supervised windowing of the scaled delta series.

Turns a univariate series into (window -> next value) pairs, holds out a
test tail and cuts the pairs into (optionally shuffled) mini-batches.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from core.errors import EmptyDataset, SeriesTooShort, TestTooLarge

# --- Constants ---
DEFAULT_WINDOW_LEN = 30
DEFAULT_TEST_LEN = 24

# --- Logging Setup ---
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitSpec:
    test_len: int = DEFAULT_TEST_LEN

    def __post_init__(self):
        if self.test_len < 1:
            raise TestTooLarge(f"test_len must be positive, got {self.test_len}")


@dataclass(frozen=True)
class SupervisedDataset:
    inputs: np.ndarray  # (n_pairs, window_len)
    targets: np.ndarray  # (n_pairs,)
    window_len: int

    def __post_init__(self):
        if self.inputs.ndim != 2 or self.inputs.shape[1] != self.window_len:
            raise ValueError(
                f"inputs must be (n, {self.window_len}), got {self.inputs.shape}"
            )
        if len(self.inputs) != len(self.targets):
            raise ValueError(
                f"{len(self.inputs)} input windows for {len(self.targets)} targets"
            )

    def __len__(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class Batch:
    inputs: np.ndarray  # (batch_size, window_len)
    targets: np.ndarray  # (batch_size,)

    def __post_init__(self):
        if len(self.inputs) != len(self.targets):
            raise ValueError(
                f"batch has {len(self.inputs)} inputs and {len(self.targets)} targets"
            )

    def __len__(self) -> int:
        return len(self.targets)


def split_train_test(series: Sequence[float], spec: SplitSpec) -> Tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(series, dtype=np.float64)
    if spec.test_len >= len(arr):
        raise TestTooLarge(
            f"test_len {spec.test_len} leaves no training data in a series of {len(arr)}"
        )
    cut = len(arr) - spec.test_len
    return arr[:cut].copy(), arr[cut:].copy()


def make_windows(series: Sequence[float], window_len: int) -> SupervisedDataset:
    if window_len < 1:
        raise ValueError(f"window_len must be positive, got {window_len}")
    arr = np.asarray(series, dtype=np.float64)
    if len(arr) <= window_len:
        raise SeriesTooShort(
            f"series of {len(arr)} values is too short for window_len {window_len}"
        )
    n_pairs = len(arr) - window_len
    # row i -> series[i : i + window_len]
    index = np.arange(window_len)[None, :] + np.arange(n_pairs)[:, None]
    inputs = arr[index]
    targets = arr[window_len:].copy()
    return SupervisedDataset(inputs=inputs, targets=targets, window_len=window_len)


def make_batches(
    ds: SupervisedDataset, batch_size: int, shuffle: bool = False, seed: int = 0
) -> List[Batch]:
    if len(ds) == 0:
        raise EmptyDataset("no samples to batch")
    if batch_size < 1:
        raise ValueError(f"batch_size must be positive, got {batch_size}")
    order = np.arange(len(ds))
    if shuffle:
        order = np.random.default_rng(seed).permutation(len(ds))
    batches = []
    for start in range(0, len(ds), batch_size):
        idx = order[start:start + batch_size]
        batches.append(Batch(inputs=ds.inputs[idx], targets=ds.targets[idx]))
    logger.debug(f"{len(ds)} samples -> {len(batches)} batches of <= {batch_size}")
    return batches

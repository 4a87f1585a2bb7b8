# --- Min-Max Scaling ---
# x_sc = (x - x_min) / (x_max - x_min), fitted on training data only.
# Values outside the fitted range extrapolate linearly; nothing is clamped.
# Same map as sklearn MinMaxScaler(clip=False), but fitted endpoints land on
# exactly 0.0 and 1.0, and ScalerParams serializes straight into the checkpoint.
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.errors import DegenerateRange, EmptyInput

# --- Logging Setup ---
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScalerParams:
    x_min: float
    x_max: float

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise DegenerateRange(f"non-finite scaler range [{self.x_min}, {self.x_max}]")
        if not self.x_max > self.x_min:
            raise DegenerateRange(
                f"x_max ({self.x_max}) must exceed x_min ({self.x_min})"
            )

    @property
    def span(self) -> float:
        return self.x_max - self.x_min


def fit(values: Sequence[float]) -> ScalerParams:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptyInput("cannot fit a scaler on an empty series")
    x_min, x_max = float(arr.min()), float(arr.max())
    if x_max == x_min:
        raise DegenerateRange(f"all {arr.size} values equal {x_min}; nothing to scale")
    logger.debug(f"Scaler fitted on {arr.size} values: [{x_min}, {x_max}]")
    return ScalerParams(x_min=x_min, x_max=x_max)


def transform(params: ScalerParams, values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    return (arr - params.x_min) / params.span


def inverse_transform(params: ScalerParams, scaled: Sequence[float]) -> np.ndarray:
    arr = np.asarray(scaled, dtype=np.float64)
    return arr * params.span + params.x_min

"""
Recursive multi-step forecasting and hold-out evaluation.

Each one-step prediction is pushed into the window as the newest value; the
scaled outputs are then inverse-scaled to persons/day and summed onto the
last observed cumulative count.
"""
import logging
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Dict, List, Optional, Sequence

import numpy as np

from core.errors import EmptyTest, WindowLengthMismatch
from core.lstm_cell import LstmParams, sequence_forward
from core.scaling import ScalerParams, inverse_transform, transform

# --- Constants ---
DEFAULT_HORIZON = 20

# --- Logging Setup ---
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ForecastResult:
    dates: List  # datetime.date when the start date is known, else step numbers 1..horizon
    daily: np.ndarray
    cumulative: np.ndarray
    anchor: float

    def __len__(self) -> int:
        return len(self.daily)

    @property
    def negative_days(self) -> int:
        return int(np.count_nonzero(self.daily < 0))


@dataclass(frozen=True)
class EvaluationResult:
    observed: np.ndarray
    predicted: np.ndarray
    rmse: float
    mae: float
    teacher_forcing: bool = False

    @property
    def errors(self) -> np.ndarray:
        return self.predicted - self.observed

    @property
    def metrics(self) -> Dict[str, float]:
        return {"rmse": self.rmse, "mae": self.mae}


def _check_window(params: LstmParams, window: np.ndarray) -> None:
    expected = params.window_len
    if window.ndim != 1:
        raise WindowLengthMismatch(f"window must be one-dimensional, got shape {window.shape}")
    if expected is not None and len(window) != expected:
        raise WindowLengthMismatch(f"window has {len(window)} values, model expects {expected}")


def predict_next(params: LstmParams, scaled_window: Sequence[float]) -> float:
    window = np.asarray(scaled_window, dtype=np.float64)
    _check_window(params, window)
    prediction, _ = sequence_forward(params, window)
    return prediction


def _horizon_dates(last_date: Optional[date], horizon: int) -> List:
    if last_date is None:
        return list(range(1, horizon + 1))
    return [last_date + timedelta(days=step) for step in range(1, horizon + 1)]


def recursive_predictions(params: LstmParams, seed_window: Sequence[float], horizon: int) -> np.ndarray:
    """Scaled predictions, each fed back as the newest window value."""
    window = np.asarray(seed_window, dtype=np.float64).copy()
    _check_window(params, window)
    predictions = np.empty(horizon, dtype=np.float64)
    for step in range(horizon):
        p = predict_next(params, window)
        predictions[step] = p
        window = np.append(window[1:], p)
    return predictions


def forecast_horizon(
    params: LstmParams,
    scaler: ScalerParams,
    seed_window: Sequence[float],
    horizon: int = DEFAULT_HORIZON,
    anchor: float = 0.0,
    last_date: Optional[date] = None,
) -> ForecastResult:
    if horizon < 0:
        raise ValueError(f"horizon must not be negative, got {horizon}")
    scaled = recursive_predictions(params, seed_window, horizon)
    cumulative = np.cumsum(np.concatenate(([float(anchor)], inverse_transform(scaler, scaled))))[1:]
    # daily[i] == cumulative[i] - cumulative[i-1] exactly. With a non-zero anchor this
    # can differ by rounding from inverse_transform(scaled)[i], which evaluate_holdout reports.
    daily = np.diff(np.concatenate(([float(anchor)], cumulative)))

    result = ForecastResult(
        dates=_horizon_dates(last_date, horizon),
        daily=daily,
        cumulative=cumulative,
        anchor=float(anchor),
    )
    if result.negative_days:
        logger.warning(f"{result.negative_days} of {horizon} forecast days are negative.")
    return result


def holdout_metrics(observed: Sequence[float], predicted: Sequence[float]) -> Dict[str, float]:
    """RMSE and MAE in the units of the inputs."""
    observed = np.asarray(observed, dtype=np.float64)
    predicted = np.asarray(predicted, dtype=np.float64)
    if observed.size == 0:
        raise EmptyTest("no observations to score")
    diff = predicted - observed
    return {
        "rmse": float(np.sqrt(np.mean(diff * diff))),
        "mae": float(np.mean(np.abs(diff))),
    }


def evaluate_holdout(
    params: LstmParams,
    scaler: ScalerParams,
    train_tail_window: Sequence[float],
    test: Sequence[float],
    teacher_forcing: bool = False,
) -> EvaluationResult:
    """Forecast len(test) days from the training tail and score them in persons/day.

    ``train_tail_window`` is scaled; ``test`` holds observed deltas in persons/day.
    With ``teacher_forcing`` the window is refilled with observed values, so every
    prediction is a genuine one-step forecast.
    """
    observed = np.asarray(test, dtype=np.float64)
    if observed.size == 0:
        raise EmptyTest("no held-out observations to evaluate against")
    tail = np.asarray(train_tail_window, dtype=np.float64)

    if teacher_forcing:
        _check_window(params, tail)
        history = np.concatenate((tail, transform(scaler, observed)))
        width = len(tail)
        scaled = np.array([predict_next(params, history[i:i + width]) for i in range(len(observed))])
    else:
        scaled = recursive_predictions(params, tail, len(observed))

    predicted = inverse_transform(scaler, scaled)
    metrics = holdout_metrics(observed, predicted)
    logger.info(
        f"Hold-out {'teacher-forced' if teacher_forcing else 'recursive'} over "
        f"{observed.size} days: rmse={metrics['rmse']:.4f} mae={metrics['mae']:.4f}"
    )
    return EvaluationResult(
        observed=observed,
        predicted=predicted,
        rmse=metrics["rmse"],
        mae=metrics["mae"],
        teacher_forcing=teacher_forcing,
    )

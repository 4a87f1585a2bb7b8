# --- Model Checkpoint ---
# Versioned JSON holding the LSTM tensors plus everything forecast/evaluate
# need to run without retraining: scaler, window length, cumulative anchor,
# the last training window and the date it ends on.
import json
import logging
import math
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from core.errors import CheckpointError, DegenerateRange, DimensionMismatch
from core.lstm_cell import PARAM_NAMES, LstmParams
from core.scaling import ScalerParams
from utils.utils import PathLike, atomic_write_text

# --- Constants ---
CHECKPOINT_FORMAT = "recovercast-checkpoint"
CHECKPOINT_VERSION = 1

# --- Logging Setup ---
logger = logging.getLogger(__name__)


@dataclass
class Checkpoint:
    params: LstmParams
    scaler: ScalerParams
    window_len: int
    anchor: float  # cumulative recoveries on the last training day
    test_len: int
    full_data: bool = False
    last_date: Optional[date] = None
    tail_window: List[float] = field(default_factory=list)  # scaled
    config: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": CHECKPOINT_FORMAT,
            "version": CHECKPOINT_VERSION,
            "window_len": self.window_len,
            "hidden_size": self.params.hidden_size,
            "input_size": self.params.input_size,
            "test_len": self.test_len,
            "full_data": self.full_data,
            "anchor": float(self.anchor),
            "last_date": self.last_date.isoformat() if self.last_date else None,
            "tail_window": [float(v) for v in self.tail_window],
            "scaler": {"x_min": self.scaler.x_min, "x_max": self.scaler.x_max},
            "config": dict(self.config),
            "params": {name: np.asarray(t).tolist() for name, t in self.params.tensors().items()},
        }

    def save(self, path: PathLike) -> Path:
        # json writes floats with repr(), which round-trips exactly
        text = json.dumps(self.to_dict(), indent=1, allow_nan=False)
        written = atomic_write_text(path, text + "\n")
        logger.info(f"Checkpoint written to '{written}'.")
        return written

    @classmethod
    def from_dict(cls, doc: Any) -> "Checkpoint":
        if not isinstance(doc, dict):
            raise CheckpointError("document is not a JSON object")
        if doc.get("format") != CHECKPOINT_FORMAT:
            raise CheckpointError(f"expected '{CHECKPOINT_FORMAT}', got {doc.get('format')!r}", field="format")
        version = _require(doc, "version", int)
        if version != CHECKPOINT_VERSION:
            raise CheckpointError(
                f"unsupported version {version} (this build reads {CHECKPOINT_VERSION})", field="version"
            )

        window_len = _require_positive(doc, "window_len")
        hidden_size = _require_positive(doc, "hidden_size")
        input_size = _require_positive(doc, "input_size")
        test_len = _require(doc, "test_len", int)
        if test_len < 0:
            raise CheckpointError(f"must not be negative, got {test_len}", field="test_len")
        full_data = _require(doc, "full_data", bool)
        anchor = _require_finite(doc.get("anchor"), "anchor")

        last_date = doc.get("last_date")
        if last_date is not None:
            try:
                last_date = date.fromisoformat(last_date)
            except (TypeError, ValueError):
                raise CheckpointError(f"not an ISO date: {last_date!r}", field="last_date") from None

        tail_window = _require(doc, "tail_window", list)
        tail_window = [_require_finite(v, "tail_window") for v in tail_window]
        if tail_window and len(tail_window) != window_len:
            raise CheckpointError(
                f"{len(tail_window)} values for window_len {window_len}", field="tail_window"
            )

        scaler_doc = _require(doc, "scaler", dict)
        try:
            scaler = ScalerParams(
                x_min=_require_finite(scaler_doc.get("x_min"), "scaler.x_min"),
                x_max=_require_finite(scaler_doc.get("x_max"), "scaler.x_max"),
            )
        except DegenerateRange as e:
            raise CheckpointError(str(e), field="scaler") from None

        params_doc = _require(doc, "params", dict)
        tensors = {}
        for name in PARAM_NAMES:
            if name not in params_doc:
                raise CheckpointError("missing", field=f"params.{name}")
            try:
                tensors[name] = np.array(params_doc[name], dtype=np.float64)
            except (TypeError, ValueError):
                raise CheckpointError("not a numeric tensor", field=f"params.{name}") from None
        params = LstmParams(**tensors, window_len=window_len)
        try:
            params.validate()
        except DimensionMismatch as e:
            raise CheckpointError(str(e), field=f"params.{str(e).split(' ')[0]}") from None
        if params.hidden_size != hidden_size or params.input_size != input_size:
            raise CheckpointError(
                f"tensors are hidden={params.hidden_size} input={params.input_size}, "
                f"header says hidden={hidden_size} input={input_size}",
                field="hidden_size",
            )

        config = doc.get("config", {})
        if not isinstance(config, dict):
            raise CheckpointError("not an object", field="config")

        return cls(
            params=params,
            scaler=scaler,
            window_len=window_len,
            anchor=anchor,
            test_len=test_len,
            full_data=full_data,
            last_date=last_date,
            tail_window=tail_window,
            config=config,
        )

    @classmethod
    def load(cls, path: PathLike) -> "Checkpoint":
        try:
            with open(path, "r", encoding="utf-8") as f:
                doc = json.load(f)
        except FileNotFoundError:
            raise CheckpointError(f"no checkpoint at '{path}'") from None
        except json.JSONDecodeError as e:
            raise CheckpointError(f"'{path}' is not valid JSON: {e}") from None
        except OSError as e:
            raise CheckpointError(f"cannot read '{path}': {e}") from None
        checkpoint = cls.from_dict(doc)
        logger.info(
            f"Loaded checkpoint '{path}' (window={checkpoint.window_len}, "
            f"hidden={checkpoint.params.hidden_size}, test_len={checkpoint.test_len})."
        )
        return checkpoint


def _require(doc: Dict[str, Any], name: str, kind: type) -> Any:
    if name not in doc:
        raise CheckpointError("missing", field=name)
    value = doc[name]
    # bool is an int subclass; keep the two apart
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise CheckpointError(f"expected {kind.__name__}, got {type(value).__name__}", field=name)
    return value


def _require_positive(doc: Dict[str, Any], name: str) -> int:
    value = _require(doc, name, int)
    if value < 1:
        raise CheckpointError(f"must be positive, got {value}", field=name)
    return value


def _require_finite(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CheckpointError(f"expected a number, got {value!r}", field=name)
    if not math.isfinite(value):
        raise CheckpointError(f"not finite: {value!r}", field=name)
    return float(value)

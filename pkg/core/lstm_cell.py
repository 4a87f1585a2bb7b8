"""
Single-layer LSTM cell with a linear regression head.

Gate equations, with [h, x] the concatenation of the previous hidden state
and the current input:

    z_f = sigmoid(W_f [h, x] + b_f)      forget gate
    z_i = sigmoid(W_i [h, x] + b_i)      input gate
    z   = tanh(W_c [h, x] + b_c)         candidate cell
    c   = z_f * c_prev + z_i * z
    z_o = sigmoid(W_o [h, x] + b_o)      output gate
    h   = z_o * tanh(c)

    prediction = W_y . h_last + b_y

Every function accepts either one sample (vectors) or a batch (rows), so the
trainer and the forecaster share the same forward code.
"""
import logging
from dataclasses import dataclass, fields
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.errors import DimensionMismatch, EmptyWindow

# --- Constants ---
DEFAULT_HIDDEN_SIZE = 32
DEFAULT_INPUT_SIZE = 1
FORGET_BIAS_INIT = 1.0
PARAM_NAMES = ("W_f", "W_i", "W_c", "W_o", "b_f", "b_i", "b_c", "b_o", "W_y", "b_y")

# --- Logging Setup ---
logger = logging.getLogger(__name__)


# --- Activations ---
def sigmoid(x):
    """Logistic function, evaluated so that neither branch can overflow."""
    arr = np.asarray(x, dtype=np.float64)
    flat = np.atleast_1d(arr)
    out = np.empty_like(flat)
    pos = flat >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-flat[pos]))
    ex = np.exp(flat[~pos])
    out[~pos] = ex / (1.0 + ex)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def tanh_act(x):
    arr = np.tanh(np.asarray(x, dtype=np.float64))
    return float(arr) if arr.ndim == 0 else arr


# --- Parameter bundles ---
@dataclass
class TensorBundle:
    """One array per LSTM parameter; shared by params and their gradients."""

    W_f: np.ndarray
    W_i: np.ndarray
    W_c: np.ndarray
    W_o: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray
    W_y: np.ndarray
    b_y: np.ndarray  # 0-d

    @property
    def hidden_size(self) -> int:
        return int(self.W_f.shape[0])

    @property
    def input_size(self) -> int:
        return int(self.W_f.shape[1]) - self.hidden_size

    def tensors(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def _extra(self) -> Dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in PARAM_NAMES}

    def copy(self):
        copied = {name: np.array(t, dtype=np.float64, copy=True) for name, t in self.tensors().items()}
        return type(self)(**copied, **self._extra())

    def zeros_like(self) -> "Gradients":
        return Gradients(**{name: np.zeros_like(t) for name, t in self.tensors().items()})

    def num_entries(self) -> int:
        return sum(int(t.size) for t in self.tensors().values())

    def validate(self) -> None:
        """Raise DimensionMismatch unless every shape agrees and every entry is finite."""
        hidden, concat = self.W_f.shape if self.W_f.ndim == 2 else (0, 0)
        if hidden < 1 or concat <= hidden:
            raise DimensionMismatch(f"W_f must be (hidden, hidden + input), got {self.W_f.shape}")
        expected = {
            "W_f": (hidden, concat), "W_i": (hidden, concat),
            "W_c": (hidden, concat), "W_o": (hidden, concat),
            "b_f": (hidden,), "b_i": (hidden,), "b_c": (hidden,), "b_o": (hidden,),
            "W_y": (hidden,), "b_y": (),
        }
        for name, tensor in self.tensors().items():
            if np.shape(tensor) != expected[name]:
                raise DimensionMismatch(
                    f"{name} has shape {np.shape(tensor)}, expected {expected[name]}"
                )
            if not np.all(np.isfinite(tensor)):
                raise DimensionMismatch(f"{name} contains non-finite entries")


@dataclass
class LstmParams(TensorBundle):
    window_len: Optional[int] = None  # declared input length, set once trained


@dataclass
class Gradients(TensorBundle):
    def global_norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(g * g)) for g in self.tensors().values())))

    def scaled(self, factor: float) -> "Gradients":
        return Gradients(**{name: g * factor for name, g in self.tensors().items()})


@dataclass
class CellState:
    h: np.ndarray
    c: np.ndarray

    @classmethod
    def zeros(cls, hidden_size: int, batch_size: Optional[int] = None) -> "CellState":
        shape = (hidden_size,) if batch_size is None else (batch_size, hidden_size)
        return cls(h=np.zeros(shape), c=np.zeros(shape))


@dataclass
class GateCache:
    hx: np.ndarray  # [h_prev, x]
    z_f: np.ndarray
    z_i: np.ndarray
    z: np.ndarray
    z_o: np.ndarray
    c_prev: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray
    h: np.ndarray


# --- Initialization ---
def init_params(hidden_size: int = DEFAULT_HIDDEN_SIZE, input_size: int = DEFAULT_INPUT_SIZE, seed: int = 0) -> LstmParams:
    """Uniform(-k, k) weights with k = 1/sqrt(hidden_size); zero biases except b_f = 1."""
    if hidden_size < 1 or input_size < 1:
        raise DimensionMismatch(
            f"sizes must be positive, got hidden={hidden_size} input={input_size}"
        )
    rng = np.random.default_rng(seed)
    k = 1.0 / np.sqrt(hidden_size)
    concat = hidden_size + input_size

    def weights(*shape):
        return rng.uniform(-k, k, size=shape)

    params = LstmParams(
        W_f=weights(hidden_size, concat),
        W_i=weights(hidden_size, concat),
        W_c=weights(hidden_size, concat),
        W_o=weights(hidden_size, concat),
        b_f=np.full(hidden_size, FORGET_BIAS_INIT),
        b_i=np.zeros(hidden_size),
        b_c=np.zeros(hidden_size),
        b_o=np.zeros(hidden_size),
        W_y=weights(hidden_size),
        b_y=np.array(0.0),
    )
    logger.debug(
        f"Initialized LSTM hidden={hidden_size} input={input_size} seed={seed} "
        f"({params.num_entries()} parameters)"
    )
    return params


# --- Forward ---
def cell_forward(params: TensorBundle, x, prev: CellState) -> Tuple[CellState, GateCache]:
    """One LSTM step. ``x`` is (input_size,) or (batch, input_size)."""
    x = np.asarray(x, dtype=np.float64)
    hidden = params.hidden_size
    if x.shape[-1:] != (params.input_size,) or prev.h.shape[-1:] != (hidden,):
        raise DimensionMismatch(
            f"input {x.shape} / hidden {prev.h.shape} do not fit "
            f"hidden={hidden} input={params.input_size}"
        )
    if prev.h.shape[:-1] != x.shape[:-1] or prev.c.shape != prev.h.shape:
        raise DimensionMismatch(
            f"state {prev.h.shape}/{prev.c.shape} does not match input {x.shape}"
        )

    hx = np.concatenate([prev.h, x], axis=-1)
    z_f = sigmoid(hx @ params.W_f.T + params.b_f)
    z_i = sigmoid(hx @ params.W_i.T + params.b_i)
    z = np.tanh(hx @ params.W_c.T + params.b_c)
    c = z_f * prev.c + z_i * z
    z_o = sigmoid(hx @ params.W_o.T + params.b_o)
    tanh_c = np.tanh(c)
    h = z_o * tanh_c

    cache = GateCache(hx=hx, z_f=z_f, z_i=z_i, z=z, z_o=z_o, c_prev=prev.c, c=c, tanh_c=tanh_c, h=h)
    return CellState(h=h, c=c), cache


def _as_steps(window, input_size: int) -> np.ndarray:
    """Coerce a window to (steps, [batch,] input_size), time-major."""
    arr = np.asarray(window, dtype=np.float64)
    if arr.ndim == 1:
        return arr.reshape(-1, 1) if input_size == 1 else arr.reshape(1, -1)
    return arr


def batch_forward(params: TensorBundle, inputs) -> Tuple[np.ndarray, List[GateCache]]:
    """Forward a batch of univariate windows, ``inputs`` shaped (batch, steps)."""
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 2:
        raise DimensionMismatch(f"batch inputs must be (batch, steps), got {inputs.shape}")
    if inputs.shape[1] == 0:
        raise EmptyWindow("window has no time steps")
    if params.input_size != 1:
        raise DimensionMismatch(f"univariate batches need input_size 1, got {params.input_size}")

    state = CellState.zeros(params.hidden_size, batch_size=inputs.shape[0])
    caches = []
    for t in range(inputs.shape[1]):
        state, cache = cell_forward(params, inputs[:, t:t + 1], state)
        caches.append(cache)
    predictions = state.h @ params.W_y + params.b_y
    return predictions, caches


def sequence_forward(params: TensorBundle, window) -> Tuple[float, List[GateCache]]:
    """Unroll one window from h = c = 0 and apply the head to the final hidden state."""
    steps = _as_steps(window, params.input_size)
    if steps.shape[0] == 0:
        raise EmptyWindow("window has no time steps")

    state = CellState.zeros(params.hidden_size)
    caches = []
    for x_t in steps:
        state, cache = cell_forward(params, x_t, state)
        caches.append(cache)
    prediction = float(state.h @ params.W_y + params.b_y)
    return prediction, caches

"""
MSE training of the LSTM: unrolled BPTT, global-norm clipping and an
adaptive-moment (Adam) optimizer, plus a finite-difference gradient check.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.config import TrainConfig
from core.errors import DimensionMismatch, EmptyDataset, EmptyInput, LengthMismatch
from core.lstm_cell import (
    PARAM_NAMES,
    Gradients,
    LstmParams,
    TensorBundle,
    batch_forward,
    init_params,
)
from core.windowing import Batch, SupervisedDataset, make_batches

# --- Constants ---
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8
GRADCHECK_FLOOR = 1e-8

# --- Logging Setup ---
logger = logging.getLogger(__name__)


@dataclass
class OptimizerState:
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)
    step: int = 0
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    epsilon: float = ADAM_EPSILON

    def copy(self) -> "OptimizerState":
        return OptimizerState(
            m={k: v.copy() for k, v in self.m.items()},
            v={k: v.copy() for k, v in self.v.items()},
            step=self.step,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
        )


@dataclass
class TrainReport:
    epoch_losses: List[float] = field(default_factory=list)
    checkpoint_path: Optional[str] = None

    @property
    def epochs_run(self) -> int:
        return len(self.epoch_losses)


# --- Loss ---
def mse_loss(predictions: Sequence[float], targets: Sequence[float]) -> float:
    pred = np.asarray(predictions, dtype=np.float64)
    tgt = np.asarray(targets, dtype=np.float64)
    if pred.shape != tgt.shape:
        raise LengthMismatch(f"{pred.size} predictions for {tgt.size} targets")
    if pred.size == 0:
        raise EmptyInput("mse of an empty batch")
    diff = pred - tgt
    return float(np.mean(diff * diff))


# --- Backpropagation through time ---
def backward(params: TensorBundle, batch: Batch) -> Tuple[float, Gradients]:
    """Batch MSE and its exact gradient with respect to every parameter tensor."""
    if len(batch) == 0:
        raise EmptyDataset("cannot backpropagate an empty batch")
    if batch.inputs.ndim != 2:
        raise DimensionMismatch(f"batch inputs must be (batch, steps), got {batch.inputs.shape}")

    predictions, caches = batch_forward(params, batch.inputs)
    loss = mse_loss(predictions, batch.targets)
    grads = params.zeros_like()
    hidden = params.hidden_size

    d_pred = 2.0 * (predictions - batch.targets) / len(batch)  # (B,)
    h_last = caches[-1].h
    grads.W_y += d_pred @ h_last
    grads.b_y += d_pred.sum()

    dh = np.outer(d_pred, params.W_y)  # (B, H)
    dc = np.zeros_like(dh)
    for cache in reversed(caches):
        d_zo = dh * cache.tanh_c
        dc = dc + dh * cache.z_o * (1.0 - cache.tanh_c ** 2)
        d_zf = dc * cache.c_prev
        d_zi = dc * cache.z
        d_z = dc * cache.z_i

        # back through the gate nonlinearities
        da_f = d_zf * cache.z_f * (1.0 - cache.z_f)
        da_i = d_zi * cache.z_i * (1.0 - cache.z_i)
        da_c = d_z * (1.0 - cache.z ** 2)
        da_o = d_zo * cache.z_o * (1.0 - cache.z_o)

        grads.W_f += da_f.T @ cache.hx
        grads.W_i += da_i.T @ cache.hx
        grads.W_c += da_c.T @ cache.hx
        grads.W_o += da_o.T @ cache.hx
        grads.b_f += da_f.sum(axis=0)
        grads.b_i += da_i.sum(axis=0)
        grads.b_c += da_c.sum(axis=0)
        grads.b_o += da_o.sum(axis=0)

        d_hx = da_f @ params.W_f + da_i @ params.W_i + da_c @ params.W_c + da_o @ params.W_o
        dh = d_hx[:, :hidden]
        dc = dc * cache.z_f

    return loss, grads


def batch_loss(params: TensorBundle, batch: Batch) -> float:
    predictions, _ = batch_forward(params, batch.inputs)
    return mse_loss(predictions, batch.targets)


def gradient_check(
    params: TensorBundle,
    batch: Batch,
    epsilon: float = 1e-5,
    backward_fn: Callable[[TensorBundle, Batch], Tuple[float, Gradients]] = backward,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    Keep instances small (hidden <= 8, window <= 10): every entry costs two
    forward passes.
    """
    _, analytic = backward_fn(params, batch)
    perturbed = params.copy()
    worst = 0.0
    for name in PARAM_NAMES:
        tensor = getattr(perturbed, name)
        grad = getattr(analytic, name)
        for index in np.ndindex(tensor.shape):
            original = tensor[index]
            tensor[index] = original + epsilon
            loss_plus = batch_loss(perturbed, batch)
            tensor[index] = original - epsilon
            loss_minus = batch_loss(perturbed, batch)
            tensor[index] = original

            numeric = (loss_plus - loss_minus) / (2.0 * epsilon)
            exact = float(grad[index])
            denom = max(abs(exact), abs(numeric), GRADCHECK_FLOOR)
            error = abs(exact - numeric) / denom
            if error > worst:
                worst = error
                logger.debug(f"gradcheck {name}{index}: analytic={exact:.3e} numeric={numeric:.3e}")
    return worst


def clip_gradients(grads: Gradients, max_norm: float) -> Gradients:
    """Rescale ``grads`` so their global L2 norm is at most ``max_norm``."""
    norm = grads.global_norm()
    if norm > max_norm:
        logger.debug(f"Clipping gradient norm {norm:.4g} -> {max_norm}")
        return grads.scaled(max_norm / norm)
    return grads


# --- Optimizer ---
def optimizer_step(
    state: OptimizerState, params: LstmParams, grads: Gradients, lr: float
) -> Tuple[LstmParams, OptimizerState]:
    """One bias-corrected Adam update. Inputs are left untouched."""
    new_params = params.copy()
    new_state = state.copy()
    new_state.step += 1

    bc1 = 1.0 - new_state.beta1 ** new_state.step
    bc2 = 1.0 - new_state.beta2 ** new_state.step
    step_size = lr / bc1

    for name, g in grads.tensors().items():
        if name not in new_state.m:
            new_state.m[name] = np.zeros_like(g)
            new_state.v[name] = np.zeros_like(g)
        m = new_state.m[name]
        v = new_state.v[name]
        m *= new_state.beta1
        m += (1.0 - new_state.beta1) * g
        v *= new_state.beta2
        v += (1.0 - new_state.beta2) * (g * g)

        denom = np.sqrt(v / bc2) + new_state.epsilon
        param = getattr(new_params, name)
        param -= step_size * m / denom
    return new_params, new_state


# --- Training loop ---
def train(
    config: TrainConfig,
    dataset: SupervisedDataset,
    log_every: int = 10,
) -> Tuple[LstmParams, TrainReport]:
    """Seeded mini-batch training; the trajectory is a pure function of (config, dataset)."""
    if len(dataset) == 0:
        raise EmptyDataset("training dataset is empty")
    config.validate()

    params = init_params(config.hidden_size, 1, config.seed)
    params.window_len = dataset.window_len
    state = OptimizerState()
    report = TrainReport()

    logger.info(
        f"Training {config.epochs} epochs on {len(dataset)} windows "
        f"(window={dataset.window_len}, hidden={config.hidden_size}, "
        f"batch={config.batch_size}, lr={config.learning_rate})"
    )
    for epoch in range(config.epochs):
        batches = make_batches(dataset, config.batch_size, shuffle=True, seed=config.seed + epoch)
        weighted = 0.0
        for batch in batches:
            loss, grads = backward(params, batch)
            grads = clip_gradients(grads, config.gradient_clip)
            params, state = optimizer_step(state, params, grads, config.learning_rate)
            weighted += loss * len(batch)
            logger.debug(f"epoch {epoch + 1} step {state.step}: batch loss {loss:.6g}")
        epoch_loss = weighted / len(dataset)
        report.epoch_losses.append(epoch_loss)
        if log_every and ((epoch + 1) % log_every == 0 or epoch + 1 == config.epochs):
            logger.info(f"Epoch {epoch + 1}/{config.epochs} mean loss {epoch_loss:.6g}")
    return params, report

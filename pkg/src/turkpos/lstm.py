"""LSTM cell and sequence runner, with caches for backpropagation through time.

One step, with z = [a_prev; x_t]:

    f = sigmoid(W_f z + b_f)        forget gate
    i = sigmoid(W_u z + b_u)        update gate
    c~ = tanh(W_c z + b_c)          candidate cell state
    c = i * c~ + f * c_prev         new cell state
    o = sigmoid(W_o z + b_o)        output gate
    a = o * tanh(c)                 hidden output

All arithmetic is float64; gradient checking at 1e-5 tolerance is not
trustworthy in single precision.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch


def sigmoid(z: np.ndarray) -> np.ndarray:
    # Split by sign to avoid overflow in exp for large |z|.
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class LstmParams:
    """Gate weight matrices, each hidden_dim × (hidden_dim + input_dim)."""

    W_f: np.ndarray
    W_u: np.ndarray
    W_c: np.ndarray
    W_o: np.ndarray
    b_f: np.ndarray
    b_u: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray

    @property
    def hidden_dim(self) -> int:
        return self.W_f.shape[0]

    @property
    def input_dim(self) -> int:
        return self.W_f.shape[1] - self.W_f.shape[0]

    def zero_like(self) -> "LstmParams":
        return LstmParams(*(np.zeros_like(getattr(self, name)) for name in PARAM_FIELDS))


PARAM_FIELDS = ("W_f", "W_u", "W_c", "W_o", "b_f", "b_u", "b_c", "b_o")


class LstmState(NamedTuple):
    a: np.ndarray
    c: np.ndarray


def initial_state(hidden_dim: int) -> LstmState:
    return LstmState(np.zeros(hidden_dim), np.zeros(hidden_dim))


class StepCache(NamedTuple):
    """Everything the backward pass needs about one forward step."""

    z: np.ndarray
    f: np.ndarray
    i: np.ndarray
    c_bar: np.ndarray
    c: np.ndarray
    o: np.ndarray
    tanh_c: np.ndarray
    c_prev: np.ndarray


def _check_dims(x_t: np.ndarray, prev: LstmState, params: LstmParams) -> None:
    h = params.hidden_dim
    if prev.a.shape != (h,) or prev.c.shape != (h,):
        raise DimensionMismatch(
            f"state dims {prev.a.shape}/{prev.c.shape} do not match hidden_dim {h}"
        )
    if x_t.shape != (params.input_dim,):
        raise DimensionMismatch(
            f"input dim {x_t.shape} does not match expected ({params.input_dim},)"
        )


def _step(x_t: np.ndarray, prev: LstmState, p: LstmParams) -> tuple[LstmState, StepCache]:
    z = np.concatenate([prev.a, x_t])
    f = sigmoid(p.W_f @ z + p.b_f)
    i = sigmoid(p.W_u @ z + p.b_u)
    c_bar = np.tanh(p.W_c @ z + p.b_c)
    c = i * c_bar + f * prev.c
    o = sigmoid(p.W_o @ z + p.b_o)
    tanh_c = np.tanh(c)
    a = o * tanh_c
    return LstmState(a, c), StepCache(z, f, i, c_bar, c, o, tanh_c, prev.c)


def lstm_cell(x_t: np.ndarray, prev: LstmState, params: LstmParams) -> LstmState:
    """One LSTM step; returns the new (hidden, cell) state."""
    x_t = np.asarray(x_t, dtype=np.float64)
    _check_dims(x_t, prev, params)
    state, _ = _step(x_t, prev, params)
    return state


def lstm_sequence(xs: np.ndarray, params: LstmParams, direction: str = "forward") -> np.ndarray:
    """Run the cell over a sequence from a zero initial state.

    `xs` has shape (T, input_dim). The backward direction consumes the
    sequence in reverse and re-aligns its outputs, so row t of the result
    always corresponds to input position t.
    """
    hidden, _ = lstm_sequence_forward(xs, params, direction)
    return hidden


def lstm_sequence_forward(
    xs: np.ndarray, params: LstmParams, direction: str = "forward"
) -> tuple[np.ndarray, list[StepCache]]:
    """As lstm_sequence, but also return per-step caches (in scan order)."""
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size == 0:
        return np.zeros((0, params.hidden_dim)), []
    if xs.ndim != 2 or xs.shape[1] != params.input_dim:
        raise DimensionMismatch(
            f"sequence shape {xs.shape} does not match input_dim {params.input_dim}"
        )
    scan = xs if direction == "forward" else xs[::-1]
    state = initial_state(params.hidden_dim)
    hidden = np.empty((len(scan), params.hidden_dim))
    caches: list[StepCache] = []
    for t, x_t in enumerate(scan):
        state, cache = _step(x_t, state, params)
        hidden[t] = state.a
        caches.append(cache)
    if direction == "backward":
        hidden = hidden[::-1].copy()
    return hidden, caches


def lstm_sequence_backward(
    d_hidden: np.ndarray,
    caches: list[StepCache],
    params: LstmParams,
    direction: str = "forward",
) -> tuple[LstmParams, np.ndarray]:
    """Backpropagate through a scanned sequence.

    `d_hidden` holds loss gradients w.r.t. the re-aligned hidden outputs
    (row t ↔ input position t). Returns parameter gradients plus the
    gradient w.r.t. the inputs, re-aligned the same way.
    """
    grads = params.zero_like()
    h, d = params.hidden_dim, params.input_dim
    t_steps = len(caches)
    d_inputs = np.zeros((t_steps, d))
    # Scan order: caches[0] is the first step taken, which for the
    # backward direction is the *last* input position.
    d_out = d_hidden if direction == "forward" else d_hidden[::-1]
    da_next = np.zeros(h)
    dc_next = np.zeros(h)
    for t in range(t_steps - 1, -1, -1):
        cache = caches[t]
        da = d_out[t] + da_next
        dc = da * cache.o * (1.0 - cache.tanh_c**2) + dc_next
        d_o = da * cache.tanh_c
        d_f = dc * cache.c_prev
        d_i = dc * cache.c_bar
        d_c_bar = dc * cache.i
        # Pre-activation gradients through sigmoid/tanh.
        g_f = d_f * cache.f * (1.0 - cache.f)
        g_i = d_i * cache.i * (1.0 - cache.i)
        g_c = d_c_bar * (1.0 - cache.c_bar**2)
        g_o = d_o * cache.o * (1.0 - cache.o)
        grads.W_f += np.outer(g_f, cache.z)
        grads.W_u += np.outer(g_i, cache.z)
        grads.W_c += np.outer(g_c, cache.z)
        grads.W_o += np.outer(g_o, cache.z)
        grads.b_f += g_f
        grads.b_u += g_i
        grads.b_c += g_c
        grads.b_o += g_o
        dz = params.W_f.T @ g_f + params.W_u.T @ g_i + params.W_c.T @ g_c + params.W_o.T @ g_o
        da_next = dz[:h]
        dc_next = dc * cache.f
        d_inputs[t] = dz[h:]
    if direction == "backward":
        d_inputs = d_inputs[::-1].copy()
    return grads, d_inputs

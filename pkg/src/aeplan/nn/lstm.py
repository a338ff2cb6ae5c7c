"""LSTM cell, sequence unrolling and exact backpropagation through time.

Gate block order in the stacked weights is [input, forget, cell-candidate,
output] (see kernels.py for the equations); finite-difference tests pin this
layout down.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError
from .kernels import lstm_seq_backward, lstm_seq_forward
from .layers import xavier_uniform


@dataclass
class LstmCellParams:
    input_weights: np.ndarray  # (4*hidden, in_dim)
    recurrent_weights: np.ndarray  # (4*hidden, hidden)
    bias: np.ndarray  # (4*hidden,)

    def __post_init__(self):
        self.input_weights = np.ascontiguousarray(self.input_weights, dtype=np.float64)
        self.recurrent_weights = np.ascontiguousarray(self.recurrent_weights, dtype=np.float64)
        self.bias = np.ascontiguousarray(self.bias, dtype=np.float64)
        rows = self.input_weights.shape[0]
        if rows % 4 != 0:
            raise ShapeError(f"stacked LSTM weights need 4*hidden rows, got {rows}")
        hidden = rows // 4
        if self.recurrent_weights.shape != (rows, hidden) or self.bias.shape != (rows,):
            raise ShapeError(
                "LSTM parameter shapes inconsistent: "
                f"Wx {self.input_weights.shape}, Wh {self.recurrent_weights.shape}, b {self.bias.shape}"
            )

    @property
    def hidden_dim(self) -> int:
        return self.input_weights.shape[0] // 4

    @property
    def in_dim(self) -> int:
        return self.input_weights.shape[1]

    def copy(self) -> "LstmCellParams":
        return LstmCellParams(
            self.input_weights.copy(), self.recurrent_weights.copy(), self.bias.copy()
        )


@dataclass
class LstmState:
    hidden: np.ndarray
    cell: np.ndarray

    def copy(self) -> "LstmState":
        return LstmState(self.hidden.copy(), self.cell.copy())


def zero_state(hidden_dim: int) -> LstmState:
    return LstmState(np.zeros(hidden_dim), np.zeros(hidden_dim))


def init_lstm(in_dim: int, hidden_dim: int, rng: np.random.Generator) -> LstmCellParams:
    if in_dim < 1 or hidden_dim < 1:
        raise ShapeError(f"LSTM dims must be >= 1, got in={in_dim}, hidden={hidden_dim}")
    return LstmCellParams(
        xavier_uniform(rng, 4 * hidden_dim, in_dim),
        xavier_uniform(rng, 4 * hidden_dim, hidden_dim),
        np.zeros(4 * hidden_dim),
    )


def _check_input(params: LstmCellParams, x: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (params.in_dim,):
        raise ShapeError(f"LSTM input has shape {x.shape}, cell expects ({params.in_dim},)")
    return x


def lstm_step(params: LstmCellParams, state: LstmState, x: np.ndarray) -> tuple[LstmState, np.ndarray]:
    """One LSTM step; returns the new state and the new hidden vector."""
    x = _check_input(params, x)
    if state.hidden.shape != (params.hidden_dim,) or state.cell.shape != (params.hidden_dim,):
        raise ShapeError("LSTM state dimensions do not match the cell")
    ig, fg, gg, og, cs, tcs, hs = lstm_seq_forward(
        params.input_weights,
        params.recurrent_weights,
        params.bias,
        state.hidden,
        state.cell,
        x.reshape(1, -1),
    )
    new = LstmState(hs[0].copy(), cs[0].copy())
    return new, new.hidden


@dataclass
class LstmSequenceCache:
    """Everything `backward_through_time` needs; tied to one forward pass."""

    params: LstmCellParams
    inputs: np.ndarray  # (S, in_dim)
    h0: np.ndarray
    c0: np.ndarray
    ig: np.ndarray
    fg: np.ndarray
    gg: np.ndarray
    og: np.ndarray
    cs: np.ndarray
    tcs: np.ndarray
    hs: np.ndarray


def forward_sequence(
    params: LstmCellParams, initial_state: LstmState, inputs: np.ndarray
) -> tuple[np.ndarray, LstmState, LstmSequenceCache]:
    """Apply the cell left-to-right; returns (hidden outputs, final state, cache)."""
    inputs = np.ascontiguousarray(inputs, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[0] < 1:
        raise ShapeError(f"inputs must be a nonempty (steps, in_dim) array, got {inputs.shape}")
    if inputs.shape[1] != params.in_dim:
        raise ShapeError(f"inputs have dim {inputs.shape[1]}, cell expects {params.in_dim}")
    h0 = np.ascontiguousarray(initial_state.hidden, dtype=np.float64)
    c0 = np.ascontiguousarray(initial_state.cell, dtype=np.float64)
    ig, fg, gg, og, cs, tcs, hs = lstm_seq_forward(
        params.input_weights, params.recurrent_weights, params.bias, h0, c0, inputs
    )
    cache = LstmSequenceCache(params, inputs, h0, c0, ig, fg, gg, og, cs, tcs, hs)
    final = LstmState(hs[-1].copy(), cs[-1].copy())
    return hs, final, cache


def backward_through_time(
    cache: LstmSequenceCache,
    output_gradients: np.ndarray,
    d_final_hidden: np.ndarray | None = None,
    d_final_cell: np.ndarray | None = None,
) -> dict[str, np.ndarray]:
    """Exact gradients of a scalar loss through the unrolled sequence.

    output_gradients (S, hidden) is d loss / d hidden output per step. Returns a
    bundle with parameter gradients plus 'inputs' (d loss / d x_t, needed for
    action optimization) and the initial-state gradients.
    """
    steps, hidden = cache.hs.shape
    output_gradients = np.ascontiguousarray(output_gradients, dtype=np.float64)
    if output_gradients.shape != (steps, hidden):
        raise ShapeError(
            f"output gradients shape {output_gradients.shape} does not match cached forward ({steps}, {hidden})"
        )
    dh_last = np.zeros(hidden) if d_final_hidden is None else np.asarray(d_final_hidden, dtype=np.float64)
    dc_last = np.zeros(hidden) if d_final_cell is None else np.asarray(d_final_cell, dtype=np.float64)
    dwx, dwh, db, dxs, dh0, dc0 = lstm_seq_backward(
        cache.params.input_weights,
        cache.params.recurrent_weights,
        cache.inputs,
        cache.h0,
        cache.c0,
        cache.ig,
        cache.fg,
        cache.gg,
        cache.og,
        cache.cs,
        cache.tcs,
        cache.hs,
        output_gradients,
        dh_last,
        dc_last,
    )
    return {
        "input_weights": dwx,
        "recurrent_weights": dwh,
        "bias": db,
        "inputs": dxs,
        "initial_hidden": dh0,
        "initial_cell": dc0,
    }

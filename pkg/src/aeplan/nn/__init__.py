"""Minimal differentiable core: dense layers, LSTM + BPTT, Adam."""

from .adam import AdamState, adam_update
from .layers import DenseLayer, dense_forward, init_dense, xavier_uniform
from .lstm import (
    LstmCellParams,
    LstmSequenceCache,
    LstmState,
    backward_through_time,
    forward_sequence,
    init_lstm,
    lstm_step,
    zero_state,
)

__all__ = [
    "AdamState",
    "adam_update",
    "DenseLayer",
    "dense_forward",
    "init_dense",
    "xavier_uniform",
    "LstmCellParams",
    "LstmSequenceCache",
    "LstmState",
    "backward_through_time",
    "forward_sequence",
    "init_lstm",
    "lstm_step",
    "zero_state",
]

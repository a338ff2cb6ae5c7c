"""Recurrent dynamics model: predicts per-step state deltas and rolls out
multi-step open-loop trajectories by feeding its own predictions back.

Network: LSTM over the normalized (state, action) input, a relu dense layer,
and a linear output head producing the normalized delta; the prediction is
s_{t+1} = s_t + denormalize(delta).
"""

from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .errors import ConfigError, NonFiniteStateError, ShapeError
from .nn.adam import AdamState, adam_update
from .nn.kernels import lstm_seq_backward, lstm_seq_forward, rollout_forward
from .nn.layers import DenseLayer, init_dense
from .nn.lstm import LstmCellParams, LstmState, init_lstm, zero_state

STD_FLOOR = 1e-6


@dataclass
class NormStats:
    """Per-dimension mean/std for states, actions and delta targets (training data only)."""

    state_mean: np.ndarray
    state_std: np.ndarray
    action_mean: np.ndarray
    action_std: np.ndarray
    delta_mean: np.ndarray
    delta_std: np.ndarray

    @classmethod
    def from_dataset(cls, dataset: Dataset) -> "NormStats":
        obs = np.concatenate([ep.observations for ep in dataset.episodes])
        acts = np.concatenate([ep.actions for ep in dataset.episodes])
        deltas = np.concatenate(
            [ep.observations[1:] - ep.observations[:-1] for ep in dataset.episodes]
        )

        def stats(x):
            return x.mean(axis=0), np.maximum(x.std(axis=0), STD_FLOOR)

        sm, ss = stats(obs)
        am, astd = stats(acts)
        dm, ds = stats(deltas)
        return cls(sm, ss, am, astd, dm, ds)

    def norm_state(self, s: np.ndarray) -> np.ndarray:
        return (s - self.state_mean) / self.state_std

    def norm_action(self, a: np.ndarray) -> np.ndarray:
        return (a - self.action_mean) / self.action_std

    def norm_delta(self, d: np.ndarray) -> np.ndarray:
        return (d - self.delta_mean) / self.delta_std

    def denorm_delta(self, d: np.ndarray) -> np.ndarray:
        return d * self.delta_std + self.delta_mean

    def norm_pairs(self, obs: np.ndarray, acts: np.ndarray) -> np.ndarray:
        """Stack normalized (state, action) rows into the network input layout."""
        return np.concatenate([self.norm_state(obs), self.norm_action(acts)], axis=-1)


@dataclass
class WorldModelParams:
    lstm: LstmCellParams
    hidden: DenseLayer  # relu
    output: DenseLayer  # linear
    n_obs: int
    n_act: int

    def __post_init__(self):
        if self.lstm.in_dim != self.n_obs + self.n_act:
            raise ShapeError("LSTM input dim must equal n_obs + n_act")
        if self.output.out_dim != self.n_obs:
            raise ShapeError("output layer must produce one delta per state dimension")

    def param_dict(self) -> dict[str, np.ndarray]:
        return {
            "lstm.input_weights": self.lstm.input_weights,
            "lstm.recurrent_weights": self.lstm.recurrent_weights,
            "lstm.bias": self.lstm.bias,
            "hidden.weights": self.hidden.weights,
            "hidden.bias": self.hidden.bias,
            "output.weights": self.output.weights,
            "output.bias": self.output.bias,
        }

    def copy(self) -> "WorldModelParams":
        return WorldModelParams(
            self.lstm.copy(), self.hidden.copy(), self.output.copy(), self.n_obs, self.n_act
        )


@dataclass
class WorldModelConfig:
    epochs: int = 200
    lr: float = 1e-3
    seed: int = 0
    truncation: int = 32  # truncated-BPTT segment length
    lstm_units: int = 32
    dense_units: int = 64


@dataclass
class PredictedTrajectory:
    states: np.ndarray  # (H, n_obs), state after each planned action
    costs: np.ndarray  # (H,), analytic cost at each predicted state

    def __len__(self) -> int:
        return len(self.states)

    @property
    def cumulative_cost(self) -> float:
        return float(np.sum(self.costs))


def init_world_model(n_obs: int, n_act: int, config: WorldModelConfig) -> WorldModelParams:
    rng = np.random.default_rng(config.seed)
    lstm = init_lstm(n_obs + n_act, config.lstm_units, rng)
    hidden = init_dense(config.lstm_units, config.dense_units, "relu", rng)
    output = init_dense(config.dense_units, n_obs, "linear", rng)
    return WorldModelParams(lstm, hidden, output, n_obs, n_act)


def _segments(dataset: Dataset, norm: NormStats, truncation: int):
    """Normalized (inputs, targets) pairs for truncated BPTT, per episode chunk."""
    out = []
    for ep in dataset.episodes:
        xs = norm.norm_pairs(ep.observations[:-1], ep.actions)
        ys = norm.norm_delta(ep.observations[1:] - ep.observations[:-1])
        for start in range(0, len(ep), truncation):
            seg_x = np.ascontiguousarray(xs[start : start + truncation])
            seg_y = np.ascontiguousarray(ys[start : start + truncation])
            if len(seg_x):
                out.append((seg_x, seg_y))
    return out


def _forward_segment(model: WorldModelParams, seg_x: np.ndarray):
    hd = model.lstm.hidden_dim
    h0 = np.zeros(hd)
    c0 = np.zeros(hd)
    ig, fg, gg, og, cs, tcs, hs = lstm_seq_forward(
        model.lstm.input_weights, model.lstm.recurrent_weights, model.lstm.bias, h0, c0, seg_x
    )
    pre1 = hs @ model.hidden.weights.T + model.hidden.bias
    act1 = np.maximum(pre1, 0.0)
    pred = act1 @ model.output.weights.T + model.output.bias
    return pred, (h0, c0, ig, fg, gg, og, cs, tcs, hs, pre1, act1)


def _segment_gradients(model: WorldModelParams, seg_x, seg_y):
    """Mean-squared-error loss over the segment and exact parameter gradients."""
    pred, cache = _forward_segment(model, seg_x)
    h0, c0, ig, fg, gg, og, cs, tcs, hs, pre1, act1 = cache
    resid = pred - seg_y
    n = resid.size
    loss = float(np.sum(resid * resid) / n)
    dpred = 2.0 * resid / n
    dw_out = dpred.T @ act1
    db_out = dpred.sum(axis=0)
    dact1 = dpred @ model.output.weights
    dpre1 = np.where(pre1 > 0.0, dact1, 0.0)
    dw_hid = dpre1.T @ hs
    db_hid = dpre1.sum(axis=0)
    dhs = np.ascontiguousarray(dpre1 @ model.hidden.weights)
    hidden = model.lstm.hidden_dim
    dwx, dwh, db, _, _, _ = lstm_seq_backward(
        model.lstm.input_weights,
        model.lstm.recurrent_weights,
        seg_x,
        h0,
        c0,
        ig,
        fg,
        gg,
        og,
        cs,
        tcs,
        hs,
        dhs,
        np.zeros(hidden),
        np.zeros(hidden),
    )
    grads = {
        "lstm.input_weights": dwx,
        "lstm.recurrent_weights": dwh,
        "lstm.bias": db,
        "hidden.weights": dw_hid,
        "hidden.bias": db_hid,
        "output.weights": dw_out,
        "output.bias": db_out,
    }
    return loss, grads


def train_world_model(
    dataset: Dataset, config: WorldModelConfig
) -> tuple[WorldModelParams, NormStats, list[float]]:
    """Fit normalized delta targets with Adam over shuffled truncated-BPTT segments.

    Every segment is visited once per epoch (seeded shuffle, one update per
    segment). Returns the trained parameters, the normalization stats computed
    from this dataset, and the per-epoch mean loss curve.
    """
    if not dataset.episodes:
        raise ConfigError("cannot train a world model on an empty dataset")
    if max(len(ep) for ep in dataset.episodes) <= 0:
        raise ConfigError("dataset has no transitions")
    norm = NormStats.from_dataset(dataset)
    model = init_world_model(dataset.n_obs, dataset.n_act, config)
    segments = _segments(dataset, norm, config.truncation)
    params = model.param_dict()
    opt = AdamState.init_like(params)
    rng = np.random.default_rng(config.seed)
    curve: list[float] = []
    order = np.arange(len(segments))
    for _ in range(config.epochs):
        rng.shuffle(order)
        total, count = 0.0, 0
        for idx in order:
            seg_x, seg_y = segments[idx]
            loss, grads = _segment_gradients(model, seg_x, seg_y)
            adam_update(params, grads, opt, lr=config.lr)
            total += loss * seg_y.size
            count += seg_y.size
        curve.append(total / count)
    return model, norm, curve


def one_step_mse(model: WorldModelParams, norm: NormStats, dataset: Dataset) -> float:
    """Teacher-forced one-step prediction MSE in normalized delta units."""
    total, count = 0.0, 0
    for ep in dataset.episodes:
        xs = np.ascontiguousarray(norm.norm_pairs(ep.observations[:-1], ep.actions))
        ys = norm.norm_delta(ep.observations[1:] - ep.observations[:-1])
        pred, _ = _forward_segment(model, xs)
        total += float(np.sum((pred - ys) ** 2))
        count += ys.size
    return total / count


def predict_step(
    model: WorldModelParams,
    norm: NormStats,
    state: LstmState,
    s: np.ndarray,
    a: np.ndarray,
) -> tuple[LstmState, np.ndarray]:
    """One prediction: returns the advanced recurrent state and s + delta."""
    s = np.asarray(s, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if s.shape != (model.n_obs,) or a.shape != (model.n_act,):
        raise ShapeError(
            f"predict_step got shapes {s.shape}/{a.shape}, expects ({model.n_obs},)/({model.n_act},)"
        )
    x = np.concatenate([norm.norm_state(s), norm.norm_action(a)])
    ig, fg, gg, og, cs, tcs, hs = lstm_seq_forward(
        model.lstm.input_weights,
        model.lstm.recurrent_weights,
        model.lstm.bias,
        np.ascontiguousarray(state.hidden),
        np.ascontiguousarray(state.cell),
        x.reshape(1, -1),
    )
    h = hs[0]
    pre1 = model.hidden.weights @ h + model.hidden.bias
    delta_n = model.output.weights @ np.maximum(pre1, 0.0) + model.output.bias
    s_next = s + norm.denorm_delta(delta_n)
    bad = np.flatnonzero(~np.isfinite(s_next))
    if bad.size:
        raise NonFiniteStateError(int(bad[0]))
    return LstmState(h.copy(), cs[0].copy()), s_next


def warmup_state(
    model: WorldModelParams,
    norm: NormStats,
    history_obs: np.ndarray,
    history_actions: np.ndarray,
) -> LstmState:
    """Run the LSTM over real (state, action) pairs; returns the warmed state.

    history_obs has one more row than history_actions; the final observation is
    the state predictions start from and is not consumed here.
    """
    history_obs = np.asarray(history_obs, dtype=np.float64)
    history_actions = np.asarray(history_actions, dtype=np.float64)
    if len(history_obs) != len(history_actions) + 1:
        raise ShapeError("history needs |observations| = |actions| + 1")
    if len(history_actions) == 0:
        return zero_state(model.lstm.hidden_dim)
    xs = np.ascontiguousarray(norm.norm_pairs(history_obs[:-1], history_actions))
    hidden = model.lstm.hidden_dim
    _, _, _, _, cs, _, hs = lstm_seq_forward(
        model.lstm.input_weights,
        model.lstm.recurrent_weights,
        model.lstm.bias,
        np.zeros(hidden),
        np.zeros(hidden),
        xs,
    )
    return LstmState(hs[-1].copy(), cs[-1].copy())


def rollout_states(
    model: WorldModelParams,
    norm: NormStats,
    start_state: LstmState,
    s0: np.ndarray,
    actions: np.ndarray,
    with_cache: bool = False,
):
    """Open-loop prediction from s0; returns (H+1, n_obs) raw states (row 0 = s0)."""
    actions = np.ascontiguousarray(actions, dtype=np.float64)
    if actions.ndim != 2 or actions.shape[1] != model.n_act:
        raise ShapeError(f"actions must be (H, {model.n_act}), got {actions.shape}")
    out = rollout_forward(
        model.lstm.input_weights,
        model.lstm.recurrent_weights,
        model.lstm.bias,
        model.hidden.weights,
        model.hidden.bias,
        model.output.weights,
        model.output.bias,
        norm.state_mean,
        norm.state_std,
        norm.action_mean,
        norm.action_std,
        norm.delta_mean,
        norm.delta_std,
        np.ascontiguousarray(start_state.hidden),
        np.ascontiguousarray(start_state.cell),
        np.ascontiguousarray(s0, dtype=np.float64),
        actions,
    )
    states = out[0]
    bad = np.argwhere(~np.isfinite(states))
    if bad.size:
        raise NonFiniteStateError(int(bad[0][1]), step=int(bad[0][0]))
    return out if with_cache else states


def rollout(
    model: WorldModelParams,
    norm: NormStats,
    history_obs: np.ndarray,
    history_actions: np.ndarray,
    actions: np.ndarray,
    cost_of=None,
) -> PredictedTrajectory:
    """Warm up on real history, then predict feeding outputs back as inputs.

    cost_of(obs, action) -> float supplies the per-step predicted costs; when
    omitted the costs are zero.
    """
    actions = np.asarray(actions, dtype=np.float64).reshape(-1, model.n_act)
    if len(actions) == 0:
        return PredictedTrajectory(np.zeros((0, model.n_obs)), np.zeros(0))
    state = warmup_state(model, norm, history_obs, history_actions)
    s0 = np.asarray(history_obs, dtype=np.float64)[-1]
    states = rollout_states(model, norm, state, s0, actions)
    preds = states[1:]
    if cost_of is None:
        costs = np.zeros(len(actions))
    else:
        costs = np.array([cost_of(preds[i], actions[i]) for i in range(len(actions))])
    return PredictedTrajectory(preds, costs)

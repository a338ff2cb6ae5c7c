"""Reconstruction-error uncertainty over sliding state-action windows.

A window flattens T consecutive normalized (state, action) pairs into one
vector of dimension D = T * (n_obs + n_act), laid out
[s_t, a_t, s_{t+1}, a_{t+1}, ..., s_{t+T-1}, a_{t+T-1}]. A single-hidden-layer
autoencoder (tanh encoder, linear decoder) is trained to reproduce its input;
the uncertainty score of a window is

    u = sqrt(sum of squared reconstruction residuals) / T

which is zero exactly when reconstruction is perfect. Windows the training
data never covered reconstruct poorly and score high.
"""

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ConfigError, InsufficientHistoryError, ShapeError
from .nn.adam import AdamState, adam_update
from .nn.layers import DenseLayer, init_dense
from .world_model import NormStats


@dataclass
class AutoencoderParams:
    encoder: DenseLayer  # tanh
    decoder: DenseLayer  # linear
    window_steps: int  # T
    n_obs: int
    n_act: int

    def __post_init__(self):
        d = self.window_steps * (self.n_obs + self.n_act)
        if self.encoder.in_dim != d or self.decoder.out_dim != d:
            raise ShapeError(
                f"autoencoder must map dim {d} to itself, got encoder in {self.encoder.in_dim}, "
                f"decoder out {self.decoder.out_dim}"
            )

    @property
    def input_dim(self) -> int:
        return self.window_steps * (self.n_obs + self.n_act)

    def param_dict(self) -> dict[str, np.ndarray]:
        return {
            "encoder.weights": self.encoder.weights,
            "encoder.bias": self.encoder.bias,
            "decoder.weights": self.decoder.weights,
            "decoder.bias": self.decoder.bias,
        }

    def copy(self) -> "AutoencoderParams":
        return AutoencoderParams(
            self.encoder.copy(), self.decoder.copy(), self.window_steps, self.n_obs, self.n_act
        )


@dataclass
class AutoencoderConfig:
    epochs: int = 200
    lr: float = 1e-3
    seed: int = 0
    hidden_units: int = 100
    batch_size: int = 64
    loss: str = "mse"  # "mse" (default) or "root": per-window root of summed squares


@dataclass
class UncertaintyProfile:
    per_step: np.ndarray

    @property
    def cumulative(self) -> float:
        return float(np.sum(self.per_step))

    def __len__(self) -> int:
        return len(self.per_step)


def build_windows(dataset: Dataset, window_steps: int, norm: NormStats) -> tuple[np.ndarray, int]:
    """Sliding stride-1 windows per episode, normalized; never crosses episodes.

    Returns (windows, skipped) where skipped counts episodes shorter than T.
    """
    if window_steps < 1:
        raise ConfigError(f"window length must be >= 1, got {window_steps}")
    dim = window_steps * (dataset.n_obs + dataset.n_act)
    rows: list[np.ndarray] = []
    skipped = 0
    for ep in dataset.episodes:
        if len(ep) < window_steps:
            skipped += 1
            continue
        pairs = norm.norm_pairs(ep.observations[:-1], ep.actions)
        flat = pairs.reshape(-1)
        width = pairs.shape[1]
        for start in range(len(ep) - window_steps + 1):
            rows.append(flat[start * width : (start + window_steps) * width])
    windows = np.array(rows) if rows else np.zeros((0, dim))
    return windows, skipped


def init_autoencoder(
    window_steps: int, n_obs: int, n_act: int, config: AutoencoderConfig
) -> AutoencoderParams:
    rng = np.random.default_rng(config.seed)
    dim = window_steps * (n_obs + n_act)
    encoder = init_dense(dim, config.hidden_units, "tanh", rng)
    decoder = init_dense(config.hidden_units, dim, "linear", rng)
    return AutoencoderParams(encoder, decoder, window_steps, n_obs, n_act)


def reconstruct(ae: AutoencoderParams, windows: np.ndarray) -> np.ndarray:
    """Autoencoder output for one window (D,) or a batch (K, D)."""
    windows = np.asarray(windows, dtype=np.float64)
    if windows.shape[-1] != ae.input_dim:
        raise ShapeError(f"window dim {windows.shape[-1]} != autoencoder dim {ae.input_dim}")
    enc = np.tanh(windows @ ae.encoder.weights.T + ae.encoder.bias)
    return enc @ ae.decoder.weights.T + ae.decoder.bias


def train_autoencoder(
    windows: np.ndarray, window_steps: int, n_obs: int, n_act: int, config: AutoencoderConfig
) -> AutoencoderParams:
    """Minimize reconstruction error with Adam over seeded shuffled mini-batches."""
    windows = np.asarray(windows, dtype=np.float64)
    if windows.ndim != 2 or len(windows) == 0:
        raise ConfigError("autoencoder training needs at least one window")
    ae = init_autoencoder(window_steps, n_obs, n_act, config)
    if windows.shape[1] != ae.input_dim:
        raise ShapeError(f"window dim {windows.shape[1]} != T*(n_obs+n_act) = {ae.input_dim}")
    params = ae.param_dict()
    opt = AdamState.init_like(params)
    rng = np.random.default_rng(config.seed)
    order = np.arange(len(windows))
    batch = max(1, config.batch_size)
    for _ in range(config.epochs):
        rng.shuffle(order)
        for lo in range(0, len(order), batch):
            w = windows[order[lo : lo + batch]]
            enc = np.tanh(w @ ae.encoder.weights.T + ae.encoder.bias)
            rec = enc @ ae.decoder.weights.T + ae.decoder.bias
            resid = rec - w
            if config.loss == "root":
                # per-window root of summed squares, averaged with a 1/T prefactor
                norms = np.sqrt(np.sum(resid * resid, axis=1))
                drec = resid / np.maximum(norms, 1e-12)[:, None] / (window_steps * len(w))
            else:
                drec = 2.0 * resid / resid.size
            dw_dec = drec.T @ enc
            db_dec = drec.sum(axis=0)
            denc = (drec @ ae.decoder.weights) * (1.0 - enc * enc)
            dw_enc = denc.T @ w
            db_enc = denc.sum(axis=0)
            grads = {
                "encoder.weights": dw_enc,
                "encoder.bias": db_enc,
                "decoder.weights": dw_dec,
                "decoder.bias": db_dec,
            }
            adam_update(params, grads, opt, lr=config.lr)
    return ae


def uncertainty_batch(ae: AutoencoderParams, windows: np.ndarray) -> np.ndarray:
    """Scores for a (K, D) batch of windows."""
    windows = np.asarray(windows, dtype=np.float64)
    resid = windows - reconstruct(ae, windows)
    return np.sqrt(np.sum(resid * resid, axis=-1)) / ae.window_steps


def uncertainty_u(ae: AutoencoderParams, window: np.ndarray) -> float:
    """Score one window: root of summed squared residuals over states and
    actions, divided by the window step count T."""
    window = np.asarray(window, dtype=np.float64)
    if window.shape != (ae.input_dim,):
        raise ShapeError(f"window shape {window.shape} != ({ae.input_dim},)")
    return float(uncertainty_batch(ae, window.reshape(1, -1))[0])


def uncertainty_batch_grad(ae: AutoencoderParams, windows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(scores, d score / d window) for a batch; the gradient flows both through
    the residual directly and through the autoencoder. Zero at u = 0."""
    windows = np.asarray(windows, dtype=np.float64)
    enc = np.tanh(windows @ ae.encoder.weights.T + ae.encoder.bias)
    rec = enc @ ae.decoder.weights.T + ae.decoder.bias
    resid = windows - rec
    ssum = np.sum(resid * resid, axis=-1)
    u = np.sqrt(ssum) / ae.window_steps
    v = 2.0 * resid  # d ssum / d resid
    back = ((v @ ae.decoder.weights) * (1.0 - enc * enc)) @ ae.encoder.weights
    dssum = v - back
    scale = np.zeros_like(ssum)
    nz = ssum > 0.0
    scale[nz] = 1.0 / (2.0 * ae.window_steps * np.sqrt(ssum[nz]))
    return u, dssum * scale[:, None]


def window_grad(ae: AutoencoderParams, window: np.ndarray) -> np.ndarray:
    """d uncertainty_u / d window for one window."""
    _, g = uncertainty_batch_grad(ae, np.asarray(window, dtype=np.float64).reshape(1, -1))
    return g[0]


def assemble_plan_windows(
    ae: AutoencoderParams,
    norm: NormStats,
    history_obs: np.ndarray,
    history_actions: np.ndarray,
    predicted_states: np.ndarray,
    actions: np.ndarray,
) -> np.ndarray:
    """Window matrix (H, D) for each plan step, mixing real history with predictions.

    Plan step i pairs the state the i-th action is applied from with that action:
    (current obs, a_0), then (predicted state i-1, a_i). Earlier slots fall back
    to real history pairs, which must provide at least T-1 of them.
    """
    t_win = ae.window_steps
    history_obs = np.asarray(history_obs, dtype=np.float64)
    history_actions = np.asarray(history_actions, dtype=np.float64)
    predicted_states = np.asarray(predicted_states, dtype=np.float64)
    actions = np.asarray(actions, dtype=np.float64)
    if len(history_obs) != len(history_actions) + 1:
        raise ShapeError("history needs |observations| = |actions| + 1")
    n_hist = len(history_actions)
    if n_hist < t_win - 1:
        raise InsufficientHistoryError(
            f"uncertainty windows need at least {t_win - 1} real history steps, got {n_hist}; "
            "supply warm-up steps"
        )
    horizon = len(actions)
    if len(predicted_states) != horizon:
        raise ShapeError("predicted_states must have one row per action")
    hist_pairs = norm.norm_pairs(history_obs[:-1], history_actions)
    plan_states = np.concatenate([history_obs[-1:], predicted_states[:-1]]) if horizon else predicted_states
    plan_pairs = norm.norm_pairs(plan_states, actions)
    pairs = np.concatenate([hist_pairs, plan_pairs]) if n_hist else plan_pairs
    width = pairs.shape[1]
    flat = pairs.reshape(-1)
    rows = np.empty((horizon, t_win * width))
    for i in range(horizon):
        start = n_hist + i - t_win + 1
        rows[i] = flat[start * width : (start + t_win) * width]
    return rows


def trajectory_uncertainty(
    ae: AutoencoderParams,
    norm: NormStats,
    history_obs: np.ndarray,
    history_actions: np.ndarray,
    predicted_states: np.ndarray,
    actions: np.ndarray,
) -> UncertaintyProfile:
    """Per-step uncertainty of a planned trajectory (real history fills the
    leading window slots; predictions and planned actions fill the rest)."""
    if len(np.asarray(actions)) == 0:
        return UncertaintyProfile(np.zeros(0))
    rows = assemble_plan_windows(ae, norm, history_obs, history_actions, predicted_states, actions)
    return UncertaintyProfile(uncertainty_batch(ae, rows))

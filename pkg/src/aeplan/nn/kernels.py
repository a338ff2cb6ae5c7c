"""Hot numeric kernels: LSTM sequence passes and fused prediction rollouts.

Every function here is numba-compatible numpy (plain loops over time, dot
products, elementwise math) and is jitted through `backend.jit_kernel` unless
the numpy fallback is forced. All arrays are float64 and C-contiguous.

Gate block layout inside the stacked LSTM weight rows is fixed as
[input, forget, cell-candidate, output], each block `hidden` rows tall.
Gates use the logistic sigmoid; candidate and cell output use tanh:

    z = Wx @ x + Wh @ h_prev + b
    i, f, o = sigmoid(z_i), sigmoid(z_f), sigmoid(z_o);  g = tanh(z_g)
    c = f * c_prev + i * g
    h = o * tanh(c)
"""

import numpy as np

from ..backend import jit_kernel


@jit_kernel
def lstm_seq_forward(wx, wh, b, h0, c0, xs):
    """Run an LSTM left-to-right over xs (S, in_dim).

    Returns per-step gate activations and states, enough to run the exact
    backward pass: (i, f, g, o, c, tanh_c, h), each (S, hidden).
    """
    steps = xs.shape[0]
    hidden = h0.shape[0]
    ig = np.empty((steps, hidden))
    fg = np.empty((steps, hidden))
    gg = np.empty((steps, hidden))
    og = np.empty((steps, hidden))
    cs = np.empty((steps, hidden))
    tcs = np.empty((steps, hidden))
    hs = np.empty((steps, hidden))
    h = h0.copy()
    c = c0.copy()
    for t in range(steps):
        z = np.dot(wx, xs[t]) + np.dot(wh, h) + b
        i = 1.0 / (1.0 + np.exp(-z[0:hidden]))
        f = 1.0 / (1.0 + np.exp(-z[hidden : 2 * hidden]))
        g = np.tanh(z[2 * hidden : 3 * hidden])
        o = 1.0 / (1.0 + np.exp(-z[3 * hidden : 4 * hidden]))
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        ig[t] = i
        fg[t] = f
        gg[t] = g
        og[t] = o
        cs[t] = c
        tcs[t] = tc
        hs[t] = h
    return ig, fg, gg, og, cs, tcs, hs


@jit_kernel
def lstm_seq_backward(wx, wh, xs, h0, c0, ig, fg, gg, og, cs, tcs, hs, dhs, dh_last, dc_last):
    """Exact reverse pass for `lstm_seq_forward`.

    dhs (S, hidden) is the loss gradient w.r.t. each per-step hidden output;
    dh_last/dc_last flow into the final state from outside the sequence.
    Returns (dwx, dwh, db, dxs, dh0, dc0).
    """
    steps = xs.shape[0]
    in_dim = xs.shape[1]
    hidden = h0.shape[0]
    dwx = np.zeros((4 * hidden, in_dim))
    dwh = np.zeros((4 * hidden, hidden))
    db = np.zeros(4 * hidden)
    dxs = np.empty((steps, in_dim))
    dh_next = dh_last.copy()
    dc_next = dc_last.copy()
    dz = np.empty(4 * hidden)
    for t in range(steps - 1, -1, -1):
        i = ig[t]
        f = fg[t]
        g = gg[t]
        o = og[t]
        tc = tcs[t]
        if t > 0:
            c_prev = cs[t - 1]
            h_prev = hs[t - 1]
        else:
            c_prev = c0
            h_prev = h0
        dh = dhs[t] + dh_next
        do = dh * tc
        dc = dc_next + dh * o * (1.0 - tc * tc)
        dz[0:hidden] = (dc * g) * i * (1.0 - i)
        dz[hidden : 2 * hidden] = (dc * c_prev) * f * (1.0 - f)
        dz[2 * hidden : 3 * hidden] = (dc * i) * (1.0 - g * g)
        dz[3 * hidden : 4 * hidden] = do * o * (1.0 - o)
        dwx += dz.reshape(-1, 1) * xs[t].reshape(1, -1)
        dwh += dz.reshape(-1, 1) * h_prev.reshape(1, -1)
        db += dz
        dxs[t] = np.dot(dz, wx)
        dh_next = np.dot(dz, wh)
        dc_next = dc * f
    return dwx, dwh, db, dxs, dh_next, dc_next


@jit_kernel
def rollout_forward(
    wx, wh, b, w1, b1, w2, b2,
    mu_s, sd_s, mu_a, sd_a, mu_d, sd_d,
    h0, c0, s0, acts,
):
    """Predict `acts.shape[0]` steps ahead by feeding predictions back as inputs.

    Per step: normalize (state, action), LSTM step, relu hidden layer (w1, b1),
    linear output (w2, b2) giving a normalized state delta, then
    s' = s + delta * sd_d + mu_d.

    Returns raw predicted states (H+1, n_obs) with row 0 = s0, plus caches for
    the backward pass: xs, gates, cell/hidden traces and relu pre-activations.
    """
    horizon = acts.shape[0]
    n_act = acts.shape[1]
    n_obs = s0.shape[0]
    hidden = h0.shape[0]
    units = b1.shape[0]
    in_dim = n_obs + n_act
    states = np.empty((horizon + 1, n_obs))
    states[0] = s0
    xs = np.empty((horizon, in_dim))
    ig = np.empty((horizon, hidden))
    fg = np.empty((horizon, hidden))
    gg = np.empty((horizon, hidden))
    og = np.empty((horizon, hidden))
    cs = np.empty((horizon, hidden))
    tcs = np.empty((horizon, hidden))
    hs = np.empty((horizon, hidden))
    pre1s = np.empty((horizon, units))
    h = h0.copy()
    c = c0.copy()
    s = s0.copy()
    for t in range(horizon):
        for k in range(n_obs):
            xs[t, k] = (s[k] - mu_s[k]) / sd_s[k]
        for k in range(n_act):
            xs[t, n_obs + k] = (acts[t, k] - mu_a[k]) / sd_a[k]
        z = np.dot(wx, xs[t]) + np.dot(wh, h) + b
        i = 1.0 / (1.0 + np.exp(-z[0:hidden]))
        f = 1.0 / (1.0 + np.exp(-z[hidden : 2 * hidden]))
        g = np.tanh(z[2 * hidden : 3 * hidden])
        o = 1.0 / (1.0 + np.exp(-z[3 * hidden : 4 * hidden]))
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        pre1 = np.dot(w1, h) + b1
        act1 = np.maximum(pre1, 0.0)
        delta = np.dot(w2, act1) + b2
        s = s + delta * sd_d + mu_d
        states[t + 1] = s
        ig[t] = i
        fg[t] = f
        gg[t] = g
        og[t] = o
        cs[t] = c
        tcs[t] = tc
        hs[t] = h
        pre1s[t] = pre1
    return states, xs, ig, fg, gg, og, cs, tcs, hs, pre1s


@jit_kernel
def rollout_backward(
    wx, wh, w1, w2,
    sd_s, sd_a, sd_d,
    h0, c0,
    xs, ig, fg, gg, og, cs, tcs, hs, pre1s,
    dstates,
):
    """Gradient of a rollout-based scalar w.r.t. the action sequence.

    dstates (H+1, n_obs) carries the external loss gradient for every predicted
    state (row 0 belongs to the fixed start state and is returned, not used).
    Model parameters are treated as constants; gradients flow through both the
    network inputs and the state feedback path. Returns (dacts, ds0) where
    dacts excludes any direct (non-rollout) dependence of the loss on actions.
    """
    horizon = xs.shape[0]
    n_obs = sd_s.shape[0]
    n_act = sd_a.shape[0]
    hidden = h0.shape[0]
    ds = dstates.copy()
    dacts = np.empty((horizon, n_act))
    dh_next = np.zeros(hidden)
    dc_next = np.zeros(hidden)
    dz = np.empty(4 * hidden)
    for t in range(horizon - 1, -1, -1):
        i = ig[t]
        f = fg[t]
        g = gg[t]
        o = og[t]
        tc = tcs[t]
        if t > 0:
            c_prev = cs[t - 1]
        else:
            c_prev = c0
        ds_next = ds[t + 1]
        ds[t] += ds_next  # feedback: s_{t+1} = s_t + ...
        ddelta = ds_next * sd_d
        du = np.dot(ddelta, w2)
        dpre = np.where(pre1s[t] > 0.0, du, 0.0)
        dh = np.dot(dpre, w1) + dh_next
        do = dh * tc
        dc = dc_next + dh * o * (1.0 - tc * tc)
        dz[0:hidden] = (dc * g) * i * (1.0 - i)
        dz[hidden : 2 * hidden] = (dc * c_prev) * f * (1.0 - f)
        dz[2 * hidden : 3 * hidden] = (dc * i) * (1.0 - g * g)
        dz[3 * hidden : 4 * hidden] = do * o * (1.0 - o)
        dx = np.dot(dz, wx)
        ds[t] += dx[0:n_obs] / sd_s
        dacts[t] = dx[n_obs : n_obs + n_act] / sd_a
        dh_next = np.dot(dz, wh)
        dc_next = dc * f
    return dacts, ds[0]

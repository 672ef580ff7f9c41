"""Pure numpy reference implementations of the hot-loop kernels.

Shared conventions with the compiled backend: float64 C-contiguous
arrays, batch axis first. LSTM gate blocks are ordered i, f, g, o along
the last axis of the fused weight matrices.
"""
from __future__ import annotations

import numpy as np
from scipy.special import expit as _sigmoid


def conv1d_forward(x, w, b):
    """x (B,L,Ci), w (K,Ci,F), b (F,) -> (B, L-K+1, F), no padding, stride 1."""
    k = w.shape[0]
    windows = np.lib.stride_tricks.sliding_window_view(x, k, axis=1)
    return np.einsum("blck,kcf->blf", windows, w) + b


def conv1d_backward(x, w, dy):
    """Gradients of conv1d_forward w.r.t. input, weights and bias."""
    k = w.shape[0]
    windows = np.lib.stride_tricks.sliding_window_view(x, k, axis=1)
    dw = np.einsum("blck,blf->kcf", windows, dy)
    db = dy.sum(axis=(0, 1))
    padded = np.pad(dy, ((0, 0), (k - 1, k - 1), (0, 0)))
    dy_windows = np.lib.stride_tricks.sliding_window_view(padded, k, axis=1)
    dx = np.einsum("btfk,kcf->btc", dy_windows, w[::-1])
    return dx, dw, db


def maxpool1d_forward(x, pool):
    """Non-overlapping max pooling; trailing remainder dropped.

    Returns the pooled values and the absolute source index of each
    maximum (first index on ties).
    """
    b, length, c = x.shape
    lp = length // pool
    blocks = x[:, : lp * pool, :].reshape(b, lp, pool, c)
    within = blocks.argmax(axis=2)
    y = np.take_along_axis(blocks, within[:, :, None, :], axis=2).squeeze(2)
    idx = within + np.arange(lp)[None, :, None] * pool
    return y, idx


def maxpool1d_backward(dy, idx, length):
    """Route each pooled gradient to its argmax source position."""
    b, _, c = dy.shape
    dx = np.zeros((b, length, c))
    np.put_along_axis(dx, idx, dy, axis=1)
    return dx


def lstm_forward(x, wx, wh, b):
    """Full-sequence LSTM pass from zero initial state.

    x (B,T,Ci), wx (Ci,4H), wh (H,4H), b (4H,) -> hidden states h
    (B,T,H), cell states c (B,T,H) and post-activation gates (B,T,4H).
    """
    bsz, steps, _ = x.shape
    h_units = wh.shape[0]
    h = np.empty((bsz, steps, h_units))
    c = np.empty((bsz, steps, h_units))
    gates = np.empty((bsz, steps, 4 * h_units))
    h_prev = np.zeros((bsz, h_units))
    c_prev = np.zeros((bsz, h_units))
    for t in range(steps):
        a = x[:, t] @ wx + h_prev @ wh + b
        i = _sigmoid(a[:, :h_units])
        f = _sigmoid(a[:, h_units:2 * h_units])
        g = np.tanh(a[:, 2 * h_units:3 * h_units])
        o = _sigmoid(a[:, 3 * h_units:])
        c_prev = f * c_prev + i * g
        h_prev = o * np.tanh(c_prev)
        gates[:, t, :h_units] = i
        gates[:, t, h_units:2 * h_units] = f
        gates[:, t, 2 * h_units:3 * h_units] = g
        gates[:, t, 3 * h_units:] = o
        h[:, t] = h_prev
        c[:, t] = c_prev
    return h, c, gates


def lstm_backward(x, wx, wh, h, c, gates, dh_out):
    """Backpropagation through time for lstm_forward.

    dh_out (B,T,H) carries the upstream gradient on every hidden state
    (zero rows where only the last state feeds the next layer).
    """
    bsz, steps, _ = x.shape
    h_units = wh.shape[0]
    dx = np.empty_like(x)
    dwx = np.zeros_like(wx)
    dwh = np.zeros_like(wh)
    db = np.zeros(4 * h_units)
    dh_next = np.zeros((bsz, h_units))
    dc_next = np.zeros((bsz, h_units))
    for t in range(steps - 1, -1, -1):
        i = gates[:, t, :h_units]
        f = gates[:, t, h_units:2 * h_units]
        g = gates[:, t, 2 * h_units:3 * h_units]
        o = gates[:, t, 3 * h_units:]
        c_prev = c[:, t - 1] if t > 0 else np.zeros((bsz, h_units))
        h_prev = h[:, t - 1] if t > 0 else np.zeros((bsz, h_units))
        tc = np.tanh(c[:, t])
        dh = dh_out[:, t] + dh_next
        do = dh * tc
        dc = dh * o * (1.0 - tc * tc) + dc_next
        da = np.concatenate([
            dc * g * i * (1.0 - i),
            dc * c_prev * f * (1.0 - f),
            dc * i * (1.0 - g * g),
            do * o * (1.0 - o),
        ], axis=1)
        dx[:, t] = da @ wx.T
        dwx += x[:, t].T @ da
        dwh += h_prev.T @ da
        db += da.sum(axis=0)
        dh_next = da @ wh.T
        dc_next = dc * f
    return dx, dwx, dwh, db

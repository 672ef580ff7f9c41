"""Kernel backends against slow explicit-loop oracles and each other.

The oracles here use nothing but scalar loops so they share no code
path with either backend.
"""
import numpy as np
import pytest

from megazord.nn import kernels
from megazord.nn._kernels_py import (
    conv1d_backward,
    conv1d_forward,
    lstm_backward,
    lstm_forward,
    maxpool1d_backward,
    maxpool1d_forward,
)

HAVE_CYTHON = "cython" in kernels.available_backends()


def _sig(z):
    return 1.0 / (1.0 + np.exp(-z))


# ---------------------------------------------------------------- oracles


def conv_forward_oracle(x, w, b):
    bsz, length, ci = x.shape
    k, _, f = w.shape
    y = np.zeros((bsz, length - k + 1, f))
    for n in range(bsz):
        for t in range(length - k + 1):
            for j in range(f):
                acc = b[j]
                for dk in range(k):
                    for ch in range(ci):
                        acc += x[n, t + dk, ch] * w[dk, ch, j]
                y[n, t, j] = acc
    return y


def conv_backward_oracle(x, w, dy):
    bsz, length, ci = x.shape
    k, _, f = w.shape
    dx = np.zeros_like(x)
    dw = np.zeros_like(w)
    db = np.zeros(f)
    for n in range(bsz):
        for t in range(length - k + 1):
            for j in range(f):
                g = dy[n, t, j]
                db[j] += g
                for dk in range(k):
                    for ch in range(ci):
                        dw[dk, ch, j] += x[n, t + dk, ch] * g
                        dx[n, t + dk, ch] += w[dk, ch, j] * g
    return dx, dw, db


def pool_forward_oracle(x, pool):
    bsz, length, c = x.shape
    lp = length // pool
    y = np.zeros((bsz, lp, c))
    idx = np.zeros((bsz, lp, c), dtype=np.int64)
    for n in range(bsz):
        for t in range(lp):
            for ch in range(c):
                best = t * pool
                for s in range(t * pool, (t + 1) * pool):
                    if x[n, s, ch] > x[n, best, ch]:
                        best = s
                y[n, t, ch] = x[n, best, ch]
                idx[n, t, ch] = best
    return y, idx


def lstm_forward_oracle(x, wx, wh, b):
    bsz, steps, _ = x.shape
    hn = wh.shape[0]
    h = np.zeros((bsz, steps, hn))
    c = np.zeros((bsz, steps, hn))
    gates = np.zeros((bsz, steps, 4 * hn))
    for n in range(bsz):
        h_prev = np.zeros(hn)
        c_prev = np.zeros(hn)
        for t in range(steps):
            a = x[n, t] @ wx + h_prev @ wh + b
            i, f = _sig(a[:hn]), _sig(a[hn:2 * hn])
            g, o = np.tanh(a[2 * hn:3 * hn]), _sig(a[3 * hn:])
            c_prev = f * c_prev + i * g
            h_prev = o * np.tanh(c_prev)
            gates[n, t] = np.concatenate([i, f, g, o])
            h[n, t] = h_prev
            c[n, t] = c_prev
    return h, c, gates


def rand_lstm_case(rng, bsz=3, steps=4, ci=2, hn=5):
    x = rng.standard_normal((bsz, steps, ci))
    wx = rng.standard_normal((ci, 4 * hn)) * 0.5
    wh = rng.standard_normal((hn, 4 * hn)) * 0.5
    b = rng.standard_normal(4 * hn) * 0.1
    return x, wx, wh, b


# ------------------------------------------------------- python vs oracle


def test_conv_forward_matches_loop_oracle():
    rng = np.random.default_rng(14)
    x = rng.standard_normal((2, 9, 3))
    w = rng.standard_normal((4, 3, 5))
    b = rng.standard_normal(5)
    np.testing.assert_allclose(conv1d_forward(x, w, b),
                               conv_forward_oracle(x, w, b), atol=1e-12)


def test_conv_backward_matches_loop_oracle():
    rng = np.random.default_rng(15)
    x = rng.standard_normal((2, 9, 3))
    w = rng.standard_normal((4, 3, 5))
    dy = rng.standard_normal((2, 6, 5))
    for got, want in zip(conv1d_backward(x, w, dy), conv_backward_oracle(x, w, dy)):
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_pool_forward_matches_loop_oracle():
    rng = np.random.default_rng(16)
    x = rng.standard_normal((3, 11, 2))  # remainder of 1 dropped at pool=2
    y, idx = maxpool1d_forward(x, 2)
    ref_y, ref_idx = pool_forward_oracle(x, 2)
    np.testing.assert_allclose(y, ref_y)
    np.testing.assert_array_equal(idx, ref_idx)
    assert y.shape == (3, 5, 2)


def test_pool_ties_take_first_index():
    x = np.zeros((1, 4, 1))
    _, idx = maxpool1d_forward(x, 2)
    np.testing.assert_array_equal(idx[0, :, 0], [0, 2])


def test_pool_backward_routes_to_argmax():
    x = np.array([[[1.0], [5.0], [2.0], [0.0]]])
    y, idx = maxpool1d_forward(x, 2)
    dy = np.array([[[10.0], [20.0]]])
    dx = maxpool1d_backward(dy, idx, 4)
    np.testing.assert_allclose(dx, [[[0.0], [10.0], [20.0], [0.0]]])


def test_lstm_forward_matches_loop_oracle():
    rng = np.random.default_rng(17)
    case = rand_lstm_case(rng)
    for got, want in zip(lstm_forward(*case), lstm_forward_oracle(*case)):
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_lstm_backward_matches_finite_differences():
    # independent check: perturb every input entry, compare loss gradient
    rng = np.random.default_rng(18)
    x, wx, wh, b = rand_lstm_case(rng, bsz=2, steps=3, ci=2, hn=3)

    def loss(xv):
        h, _, _ = lstm_forward(xv, wx, wh, b)
        return float(np.sum(h * weights))

    weights = rng.standard_normal((2, 3, 3))
    h, c, gates = lstm_forward(x, wx, wh, b)
    dx, _, _, _ = lstm_backward(x, wx, wh, h, c, gates, weights)
    eps = 1e-6
    for index in np.ndindex(x.shape):
        bumped = x.copy()
        bumped[index] += eps
        dipped = x.copy()
        dipped[index] -= eps
        numeric = (loss(bumped) - loss(dipped)) / (2 * eps)
        assert dx[index] == pytest.approx(numeric, abs=1e-7)


# ------------------------------------------------------- backend parity


@pytest.mark.skipif(not HAVE_CYTHON, reason="compiled backend not built")
def test_backend_parity_all_kernels():
    from megazord.nn import _ckernels
    rng = np.random.default_rng(19)
    for _ in range(5):
        x = rng.standard_normal((4, 12, 3))
        w = rng.standard_normal((3, 3, 6))
        b = rng.standard_normal(6)
        y_py = conv1d_forward(x, w, b)
        np.testing.assert_allclose(_ckernels.conv1d_forward(x, w, b), y_py, atol=1e-12)
        dy = rng.standard_normal(y_py.shape)
        for got, want in zip(_ckernels.conv1d_backward(x, w, dy),
                             conv1d_backward(x, w, dy)):
            np.testing.assert_allclose(got, want, atol=1e-12)

        y_py, idx_py = maxpool1d_forward(x, 2)
        y_c, idx_c = _ckernels.maxpool1d_forward(x, 2)
        np.testing.assert_allclose(y_c, y_py)
        np.testing.assert_array_equal(idx_c, idx_py)
        dyp = rng.standard_normal(y_py.shape)
        np.testing.assert_allclose(_ckernels.maxpool1d_backward(dyp, idx_py, 12),
                                   maxpool1d_backward(dyp, idx_py, 12), atol=1e-12)

        xs, wx, wh, bias = rand_lstm_case(rng, bsz=4, steps=6, ci=3, hn=7)
        fw_py = lstm_forward(xs, wx, wh, bias)
        fw_c = _ckernels.lstm_forward(xs, wx, wh, bias)
        for got, want in zip(fw_c, fw_py):
            np.testing.assert_allclose(got, want, atol=1e-12)
        dh = rng.standard_normal(fw_py[0].shape)
        bw_py = lstm_backward(xs, wx, wh, *fw_py, dh)
        bw_c = _ckernels.lstm_backward(xs, wx, wh, *fw_py, dh)
        for got, want in zip(bw_c, bw_py):
            np.testing.assert_allclose(got, want, atol=1e-12)


# ------------------------------------------------------- backend switch


def test_backend_selection_roundtrip():
    initial = kernels.active_backend()
    try:
        assert kernels.use_backend("python") == "python"
        assert kernels.active_backend() == "python"
        auto = kernels.use_backend("auto")
        assert auto == ("cython" if HAVE_CYTHON else "python")
        with pytest.raises(ValueError):
            kernels.use_backend("fortran")
    finally:
        kernels.use_backend(initial)


def test_dispatch_uses_active_backend():
    rng = np.random.default_rng(20)
    x = rng.standard_normal((1, 6, 2))
    w = rng.standard_normal((3, 2, 4))
    b = rng.standard_normal(4)
    initial = kernels.active_backend()
    try:
        results = {}
        for name in kernels.available_backends():
            kernels.use_backend(name)
            results[name] = kernels.conv1d_forward(x, w, b)
        base = results.pop("python")
        for other in results.values():
            np.testing.assert_allclose(other, base, atol=1e-12)
    finally:
        kernels.use_backend(initial)

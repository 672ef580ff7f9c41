"""Analytic backward passes against central finite differences."""
import numpy as np
import pytest

from gradcheck import check_layer_input_grads, check_network_grads
from megazord.nn.layers import LSTM, Conv1D, Dense, Flatten, MaxPool1D
from megazord.nn.network import Network

SEEDS = range(10)


def dense_net(seed):
    return Network([Dense(5, "relu"), Dense(1)], (10,), seed=seed), (10,)


def conv_net(seed):
    return Network([Conv1D(4, 3, "relu"), Flatten(), Dense(1)], (10, 1), seed=seed), (10, 1)


def pool_net(seed):
    return Network([Conv1D(3, 3, "linear"), MaxPool1D(2), Flatten(), Dense(1)],
                   (10, 1), seed=seed), (10, 1)


def lstm_net(seed):
    return Network([LSTM(3, return_sequences=True), LSTM(3), Dense(1)],
                   (10, 1), seed=seed), (10, 1)


@pytest.mark.parametrize("builder", [dense_net, conv_net, pool_net, lstm_net])
def test_parameter_gradients_match_finite_differences(builder):
    for seed in SEEDS:
        net, shape = builder(seed)
        rng = np.random.default_rng(1000 + seed)
        x = rng.standard_normal((4,) + shape)
        y = rng.standard_normal(4)
        violation = check_network_grads(net, x, y)
        assert violation <= 0.0, f"{builder.__name__} seed {seed}: {violation:.3e}"


def layer_case(kind, seed):
    rng = np.random.default_rng(2000 + seed)
    if kind == "dense":
        layer = Dense(4, "relu")
        shape = (6,)
    elif kind == "conv1d":
        layer = Conv1D(3, 3, "relu")
        shape = (8, 2)
    elif kind == "maxpool1d":
        layer = MaxPool1D(2)
        shape = (8, 2)
    elif kind == "lstm_seq":
        layer = LSTM(3, return_sequences=True)
        shape = (5, 2)
    else:
        layer = LSTM(3, return_sequences=False)
        shape = (5, 2)
    out_shape = layer.initialize(shape, rng)
    x = rng.standard_normal((3,) + shape)
    dy = rng.standard_normal((3,) + out_shape)
    return layer, x, dy


@pytest.mark.parametrize("kind", ["dense", "conv1d", "maxpool1d", "lstm_seq", "lstm_last"])
def test_input_gradients_match_finite_differences(kind):
    for seed in SEEDS:
        layer, x, dy = layer_case(kind, seed)
        violation = check_layer_input_grads(layer, x, dy)
        assert violation <= 0.0, f"{kind} seed {seed}: {violation:.3e}"


def test_gradients_identical_across_backends():
    from megazord.nn import kernels
    if "cython" not in kernels.available_backends():
        pytest.skip("compiled backend not built")
    initial = kernels.active_backend()
    rng = np.random.default_rng(21)
    x = rng.standard_normal((4, 10, 1))
    y = rng.standard_normal(4)
    try:
        grads = {}
        for name in kernels.available_backends():
            kernels.use_backend(name)
            net, _ = lstm_net(3)
            net.backward(x, y)
            grads[name] = np.concatenate([g.ravel() for g in net.gradients()])
        np.testing.assert_allclose(grads["cython"], grads["python"], atol=1e-12)
    finally:
        kernels.use_backend(initial)

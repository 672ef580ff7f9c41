"""From-scratch neural engine: layers, networks, Adam, training loop.

Hot kernels (conv1d, maxpool1d, LSTM) run on a compiled Cython backend
when built, with a numerically equivalent numpy fallback; see
``megazord.nn.kernels``.
"""
from .builders import build_cnn_forecaster, build_lstm_forecaster
from .layers import LSTM, Conv1D, Dense, Flatten, MaxPool1D
from .network import Network, backward, forward
from .optim import Adam
from .training import TrainConfig, make_supervised_windows, train

__all__ = [
    "Adam", "Conv1D", "Dense", "Flatten", "LSTM", "MaxPool1D", "Network",
    "TrainConfig", "backward", "build_cnn_forecaster", "build_lstm_forecaster",
    "forward", "make_supervised_windows", "train",
]

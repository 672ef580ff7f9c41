"""Kernel backend selection.

The compiled extension is used when importable; otherwise the numpy
fallback. Override with MEGAZORD_KERNELS=python|cython|auto (asking for
cython when the extension is absent is an error, silence would hide a
broken build).
"""
from __future__ import annotations

import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}
try:
    from . import _ckernels  # type: ignore[attr-defined]
    _BACKENDS["cython"] = _ckernels
except ImportError:
    _ckernels = None

_KERNEL_NAMES = ("conv1d_forward", "conv1d_backward", "maxpool1d_forward",
                 "maxpool1d_backward", "lstm_forward", "lstm_backward")

_active_name = "python"
_active = _kernels_py


def available_backends() -> tuple:
    return tuple(sorted(_BACKENDS))


def active_backend() -> str:
    return _active_name


def use_backend(name: str) -> str:
    """Select a kernel backend by name; 'auto' prefers the compiled one."""
    global _active, _active_name
    if name == "auto":
        name = "cython" if "cython" in _BACKENDS else "python"
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; available: {available_backends()}")
    _active = _BACKENDS[name]
    _active_name = name
    return name


def conv1d_forward(x, w, b):
    return _active.conv1d_forward(x, w, b)


def conv1d_backward(x, w, dy):
    return _active.conv1d_backward(x, w, dy)


def maxpool1d_forward(x, pool):
    return _active.maxpool1d_forward(x, pool)


def maxpool1d_backward(dy, idx, length):
    return _active.maxpool1d_backward(dy, idx, length)


def lstm_forward(x, wx, wh, b):
    return _active.lstm_forward(x, wx, wh, b)


def lstm_backward(x, wx, wh, h, c, gates, dh_out):
    return _active.lstm_backward(x, wx, wh, h, c, gates, dh_out)


use_backend(os.environ.get("MEGAZORD_KERNELS", "auto"))

"""Kernel backend selection.

The hot inner loops (convolutions, biquad recursion) exist twice: a compiled
Cython extension and a numpy reference. The compiled backend is used when it
imported cleanly; PPGKIT_KERNELS=c|py forces one side (handy for the
benchmark and for debugging). Both satisfy the contracts documented in
_numpy_ref.
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy_ref

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_choice = os.environ.get("PPGKIT_KERNELS", "auto").lower()
if _choice == "py":
    _impl = _numpy_ref
elif _choice == "c":
    if _ckernels is None:
        raise ImportError(
            "PPGKIT_KERNELS=c requested but the compiled extension is not built")
    _impl = _ckernels
elif _choice == "auto":
    _impl = _ckernels if _ckernels is not None else _numpy_ref
else:
    raise ValueError(f"PPGKIT_KERNELS must be auto, c or py, got {_choice!r}")

BACKEND = "c" if _impl is _ckernels else "py"


def get_backend(name: str):
    """Return a specific backend module ('c' or 'py'); used by the benchmark."""
    if name == "py":
        return _numpy_ref
    if name == "c":
        if _ckernels is None:
            raise ImportError("compiled kernel backend is not built")
        return _ckernels
    raise ValueError(name)


def _c(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a)


def conv1d_forward(x, w, b, stride, pad_left, out_len):
    return _impl.conv1d_forward(_c(x), _c(w), _c(b), stride, pad_left, out_len)


def conv1d_backward(x, w, gy, stride, pad_left):
    return _impl.conv1d_backward(_c(x), _c(w), _c(gy), stride, pad_left)


def conv2d_forward(x, w, b, stride, pad_top, pad_left, out_h, out_w):
    return _impl.conv2d_forward(_c(x), _c(w), _c(b), stride, pad_top, pad_left,
                                out_h, out_w)


def conv2d_backward(x, w, gy, stride, pad_top, pad_left):
    return _impl.conv2d_backward(_c(x), _c(w), _c(gy), stride, pad_top, pad_left)


def biquad_df2t(x, b0, b1, b2, a1, a2):
    x = np.ascontiguousarray(x, dtype=np.float64)
    return _impl.biquad_df2t(x, float(b0), float(b1), float(b2),
                             float(a1), float(a2))

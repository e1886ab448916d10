"""Numpy reference implementations of the compute kernels.

Semantics are the contract for both backends: cross-correlation with
implicit zero padding, and a direct-form II transposed biquad recursion.
The compiled backend in _ckernels.pyx mirrors these exactly (up to
floating-point summation order).
"""

from __future__ import annotations

import numpy as np


def _padded_windows_1d(x: np.ndarray, kernel: int, stride: int, pad_left: int,
                       out_len: int) -> np.ndarray:
    """Return windows[b, c, t, k] = x_padded[b, c, t*stride + k]."""
    length = x.shape[2]
    pad_right = max(0, (out_len - 1) * stride + kernel - pad_left - length)
    xp = np.pad(x, ((0, 0), (0, 0), (pad_left, pad_right)))
    win = np.lib.stride_tricks.sliding_window_view(xp, kernel, axis=2)
    return win[:, :, ::stride][:, :, :out_len]


def conv1d_forward(x, w, b, stride, pad_left, out_len):
    win = _padded_windows_1d(x, w.shape[2], stride, pad_left, out_len)
    y = np.einsum("bctk,ock->bot", win, w, optimize=True)
    y += b[None, :, None]
    return np.ascontiguousarray(y)


def conv1d_backward(x, w, gy, stride, pad_left):
    batch, cin, length = x.shape
    kernel = w.shape[2]
    out_len = gy.shape[2]
    win = _padded_windows_1d(x, kernel, stride, pad_left, out_len)

    gb = gy.sum(axis=(0, 2))
    gw = np.einsum("bot,bctk->ock", gy, win, optimize=True)

    gwin = np.einsum("bot,ock->bctk", gy, w, optimize=True)
    pad_right = max(0, (out_len - 1) * stride + kernel - pad_left - length)
    gxp = np.zeros((batch, cin, length + pad_left + pad_right), dtype=x.dtype)
    for k in range(kernel):
        gxp[:, :, k:k + out_len * stride:stride] += gwin[:, :, :, k]
    gx = np.ascontiguousarray(gxp[:, :, pad_left:pad_left + length])
    return gx, np.ascontiguousarray(gw), np.ascontiguousarray(gb)


def _padded_windows_2d(x, kh, kw, stride, pad_top, pad_left, out_h, out_w):
    h, w_ = x.shape[2], x.shape[3]
    pad_bot = max(0, (out_h - 1) * stride + kh - pad_top - h)
    pad_right = max(0, (out_w - 1) * stride + kw - pad_left - w_)
    xp = np.pad(x, ((0, 0), (0, 0), (pad_top, pad_bot), (pad_left, pad_right)))
    win = np.lib.stride_tricks.sliding_window_view(xp, (kh, kw), axis=(2, 3))
    return win[:, :, ::stride, ::stride][:, :, :out_h, :out_w], xp.shape


def conv2d_forward(x, w, b, stride, pad_top, pad_left, out_h, out_w):
    win, _ = _padded_windows_2d(x, w.shape[2], w.shape[3], stride,
                                pad_top, pad_left, out_h, out_w)
    y = np.einsum("bchwij,ocij->bohw", win, w, optimize=True)
    y += b[None, :, None, None]
    return np.ascontiguousarray(y)


def conv2d_backward(x, w, gy, stride, pad_top, pad_left):
    batch, cin, h, w_ = x.shape
    kh, kw = w.shape[2], w.shape[3]
    out_h, out_w = gy.shape[2], gy.shape[3]
    win, xp_shape = _padded_windows_2d(x, kh, kw, stride, pad_top, pad_left,
                                       out_h, out_w)

    gb = gy.sum(axis=(0, 2, 3))
    gw = np.einsum("bohw,bchwij->ocij", gy, win, optimize=True)

    gwin = np.einsum("bohw,ocij->bchwij", gy, w, optimize=True)
    gxp = np.zeros(xp_shape, dtype=x.dtype)
    for i in range(kh):
        for j in range(kw):
            gxp[:, :, i:i + out_h * stride:stride,
                j:j + out_w * stride:stride] += gwin[:, :, :, :, i, j]
    gx = np.ascontiguousarray(
        gxp[:, :, pad_top:pad_top + h, pad_left:pad_left + w_])
    return gx, np.ascontiguousarray(gw), np.ascontiguousarray(gb)


def biquad_df2t(x, b0, b1, b2, a1, a2):
    """Causal biquad, direct form II transposed, zero initial state."""
    y = np.empty(len(x), dtype=np.float64)
    z1 = 0.0
    z2 = 0.0
    for n, xn in enumerate(x):
        yn = b0 * xn + z1
        z1 = b1 * xn - a1 * yn + z2
        z2 = b2 * xn - a2 * yn
        y[n] = yn
    return y

# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: 1-D/2-D cross-correlation (forward + backward) and the
biquad recursion. Same contracts as _numpy_ref; see that module."""

import numpy as np

cimport cython


ctypedef fused real:
    float
    double


cdef inline Py_ssize_t _imax(Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    return a if a > b else b

cdef inline Py_ssize_t _imin(Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    return a if a < b else b


def conv1d_forward(real[:, :, ::1] x, real[:, :, ::1] w, real[::1] b,
                   int stride, int pad_left, int out_len):
    cdef Py_ssize_t nb = x.shape[0], cin = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t cout = w.shape[0], kernel = w.shape[2]
    cdef Py_ssize_t n, o, c, t, k, k0, k1, start
    cdef real acc

    if real is float:
        y_arr = np.empty((nb, cout, out_len), dtype=np.float32)
    else:
        y_arr = np.empty((nb, cout, out_len), dtype=np.float64)
    cdef real[:, :, ::1] y = y_arr

    with nogil:
        for n in range(nb):
            for o in range(cout):
                for t in range(out_len):
                    y[n, o, t] = b[o]
                for c in range(cin):
                    for t in range(out_len):
                        start = t * stride - pad_left
                        k0 = _imax(0, -start)
                        k1 = _imin(kernel, length - start)
                        acc = 0
                        for k in range(k0, k1):
                            acc = acc + x[n, c, start + k] * w[o, c, k]
                        y[n, o, t] += acc
    return y_arr


def conv1d_backward(real[:, :, ::1] x, real[:, :, ::1] w, real[:, :, ::1] gy,
                    int stride, int pad_left):
    cdef Py_ssize_t nb = x.shape[0], cin = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t cout = w.shape[0], kernel = w.shape[2]
    cdef Py_ssize_t out_len = gy.shape[2]
    cdef Py_ssize_t n, o, c, t, k, k0, k1, start
    cdef real g

    if real is float:
        dtype = np.float32
    else:
        dtype = np.float64
    gx_arr = np.zeros((nb, cin, length), dtype=dtype)
    gw_arr = np.zeros((cout, cin, kernel), dtype=dtype)
    gb_arr = np.zeros(cout, dtype=dtype)
    cdef real[:, :, ::1] gx = gx_arr
    cdef real[:, :, ::1] gw = gw_arr
    cdef real[::1] gb = gb_arr

    with nogil:
        for n in range(nb):
            for o in range(cout):
                for t in range(out_len):
                    g = gy[n, o, t]
                    gb[o] += g
                    start = t * stride - pad_left
                    k0 = _imax(0, -start)
                    k1 = _imin(kernel, length - start)
                    for c in range(cin):
                        for k in range(k0, k1):
                            gw[o, c, k] += g * x[n, c, start + k]
                            gx[n, c, start + k] += g * w[o, c, k]
    return gx_arr, gw_arr, gb_arr


def conv2d_forward(real[:, :, :, ::1] x, real[:, :, :, ::1] w, real[::1] b,
                   int stride, int pad_top, int pad_left, int out_h, int out_w):
    cdef Py_ssize_t nb = x.shape[0], cin = x.shape[1]
    cdef Py_ssize_t h = x.shape[2], width = x.shape[3]
    cdef Py_ssize_t cout = w.shape[0], kh = w.shape[2], kw = w.shape[3]
    cdef Py_ssize_t n, o, c, ti, tj, i, j, i0, i1, j0, j1, si, sj
    cdef real acc

    if real is float:
        y_arr = np.empty((nb, cout, out_h, out_w), dtype=np.float32)
    else:
        y_arr = np.empty((nb, cout, out_h, out_w), dtype=np.float64)
    cdef real[:, :, :, ::1] y = y_arr

    with nogil:
        for n in range(nb):
            for o in range(cout):
                for ti in range(out_h):
                    for tj in range(out_w):
                        y[n, o, ti, tj] = b[o]
                for c in range(cin):
                    for ti in range(out_h):
                        si = ti * stride - pad_top
                        i0 = _imax(0, -si)
                        i1 = _imin(kh, h - si)
                        for tj in range(out_w):
                            sj = tj * stride - pad_left
                            j0 = _imax(0, -sj)
                            j1 = _imin(kw, width - sj)
                            acc = 0
                            for i in range(i0, i1):
                                for j in range(j0, j1):
                                    acc = acc + x[n, c, si + i, sj + j] * w[o, c, i, j]
                            y[n, o, ti, tj] += acc
    return y_arr


def conv2d_backward(real[:, :, :, ::1] x, real[:, :, :, ::1] w,
                    real[:, :, :, ::1] gy, int stride, int pad_top, int pad_left):
    cdef Py_ssize_t nb = x.shape[0], cin = x.shape[1]
    cdef Py_ssize_t h = x.shape[2], width = x.shape[3]
    cdef Py_ssize_t cout = w.shape[0], kh = w.shape[2], kw = w.shape[3]
    cdef Py_ssize_t out_h = gy.shape[2], out_w = gy.shape[3]
    cdef Py_ssize_t n, o, c, ti, tj, i, j, i0, i1, j0, j1, si, sj
    cdef real g

    if real is float:
        dtype = np.float32
    else:
        dtype = np.float64
    gx_arr = np.zeros((nb, cin, h, width), dtype=dtype)
    gw_arr = np.zeros((cout, cin, kh, kw), dtype=dtype)
    gb_arr = np.zeros(cout, dtype=dtype)
    cdef real[:, :, :, ::1] gx = gx_arr
    cdef real[:, :, :, ::1] gw = gw_arr
    cdef real[::1] gb = gb_arr

    with nogil:
        for n in range(nb):
            for o in range(cout):
                for ti in range(out_h):
                    si = ti * stride - pad_top
                    i0 = _imax(0, -si)
                    i1 = _imin(kh, h - si)
                    for tj in range(out_w):
                        sj = tj * stride - pad_left
                        j0 = _imax(0, -sj)
                        j1 = _imin(kw, width - sj)
                        g = gy[n, o, ti, tj]
                        gb[o] += g
                        for c in range(cin):
                            for i in range(i0, i1):
                                for j in range(j0, j1):
                                    gw[o, c, i, j] += g * x[n, c, si + i, sj + j]
                                    gx[n, c, si + i, sj + j] += g * w[o, c, i, j]
    return gx_arr, gw_arr, gb_arr


def biquad_df2t(double[::1] x, double b0, double b1, double b2,
                double a1, double a2):
    cdef Py_ssize_t n, length = x.shape[0]
    y_arr = np.empty(length, dtype=np.float64)
    cdef double[::1] y = y_arr
    cdef double z1 = 0.0, z2 = 0.0, xn, yn

    with nogil:
        for n in range(length):
            xn = x[n]
            yn = b0 * xn + z1
            z1 = b1 * xn - a1 * yn + z2
            z2 = b2 * xn - a2 * yn
            y[n] = yn
    return y_arr

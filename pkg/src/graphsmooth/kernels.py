"""Grid kernels that dominate filter runtime.

Each kernel has an explicit-loop ``*_numba`` version and a vectorized
``*_numpy`` version; the unprefixed name dispatches according to
:mod:`graphsmooth._jit`. The two paths agree to rounding (tests hold them to
1e-10 relative), and each path on its own is bitwise reproducible.

All arrays are 2D float64 images indexed ``[row, col]``.
"""

import math

import numpy as np

from ._jit import USE_NUMBA, njit, prange


def window_offsets(radius):
    """(di, dj) offsets of a square window, row-major, center included."""
    r = np.arange(-radius, radius + 1)
    di, dj = np.meshgrid(r, r, indexing="ij")
    return np.column_stack([di.ravel(), dj.ravel()])


# -- bilateral weights -------------------------------------------------------


# w_ij = w_ji, so the weight stored at pixel p for offset k is also the weight
# at p + offset(k) for the mirrored offset K - 1 - k. Only the first half of
# the window is evaluated; the center weight is exactly 1.


@njit(cache=True, parallel=True)
def bilateral_weights_numba(g, radius, sigma_d, sigma_r):
    rows, cols = g.shape
    width = 2 * radius + 1
    n_off = width * width
    out = np.zeros((n_off, rows, cols))
    inv_d = 1.0 / (2.0 * sigma_d * sigma_d)
    inv_r = 1.0 / (2.0 * sigma_r * sigma_r)
    for i in prange(rows):
        out[n_off // 2, i, :] = 1.0
        for k in range(n_off // 2):
            di = k // width - radius
            dj = k % width - radius
            ii = i + di
            if ii < 0 or ii >= rows:
                continue
            spatial = math.exp(-(di * di + dj * dj) * inv_d)
            for j in range(max(0, -dj), min(cols, cols - dj)):
                dg = g[i, j] - g[ii, j + dj]
                w = spatial * math.exp(-dg * dg * inv_r)
                out[k, i, j] = w
                out[n_off - 1 - k, ii, j + dj] = w
    return out


def bilateral_weights_numpy(g, radius, sigma_d, sigma_r):
    rows, cols = g.shape
    offsets = window_offsets(radius)
    n_off = len(offsets)
    out = np.zeros((n_off, rows, cols))
    out[n_off // 2] = 1.0
    inv_d = 1.0 / (2.0 * sigma_d * sigma_d)
    inv_r = 1.0 / (2.0 * sigma_r * sigma_r)
    for k in range(n_off // 2):
        di, dj = offsets[k]
        pair = _overlap(rows, cols, di, dj)
        if pair is None:
            continue
        dst, src = pair
        dg = g[dst] - g[src]
        w = math.exp(-(di * di + dj * dj) * inv_d) * np.exp(-dg * dg * inv_r)
        out[k][dst] = w
        out[n_off - 1 - k][src] = w
    return out


def _overlap(rows, cols, di, dj):
    """Slices pairing pixel (i, j) with its in-image neighbor (i+di, j+dj).

    Returns None when the shifted window misses the image entirely.
    """
    if abs(di) >= rows or abs(dj) >= cols:
        return None
    dst = (slice(max(0, -di), rows - max(0, di)), slice(max(0, -dj), cols - max(0, dj)))
    src = (slice(max(0, di), rows + min(0, di)), slice(max(0, dj), cols + min(0, dj)))
    return dst, src


# -- stencil application -----------------------------------------------------


@njit(cache=True, parallel=True)
def stencil_apply_numba(weights, v, radius):
    rows, cols = v.shape
    width = 2 * radius + 1
    out = np.zeros((rows, cols))
    for i in prange(rows):
        for k in range(width * width):
            di = k // width - radius
            dj = k % width - radius
            ii = i + di
            if ii < 0 or ii >= rows:
                continue
            for j in range(max(0, -dj), min(cols, cols - dj)):
                out[i, j] += weights[k, i, j] * v[ii, j + dj]
    return out


def stencil_apply_numpy(weights, v, radius):
    rows, cols = v.shape
    out = np.zeros((rows, cols))
    for k, (di, dj) in enumerate(window_offsets(radius)):
        pair = _overlap(rows, cols, di, dj)
        if pair is None:
            continue
        dst, src = pair
        out[dst] += weights[k][dst] * v[src]
    return out


# -- box (truncated window) sums ---------------------------------------------


@njit(cache=True, parallel=True)
def box_sum_numba(x, radius):
    rows, cols = x.shape
    tmp = np.zeros((rows, cols))
    for i in prange(rows):
        for j in range(cols):
            acc = 0.0
            for jj in range(max(0, j - radius), min(cols, j + radius + 1)):
                acc += x[i, jj]
            tmp[i, j] = acc
    out = np.zeros((rows, cols))
    for i in prange(rows):
        lo = max(0, i - radius)
        hi = min(rows, i + radius + 1)
        for j in range(cols):
            acc = 0.0
            for ii in range(lo, hi):
                acc += tmp[ii, j]
            out[i, j] = acc
    return out


def box_sum_numpy(x, radius):
    return _box_sum_axis(_box_sum_axis(x, radius, 1), radius, 0)


def _box_sum_axis(x, radius, axis):
    n = x.shape[axis]
    pad = [(0, 0), (0, 0)]
    pad[axis] = (1, 0)
    c = np.pad(np.cumsum(x, axis=axis), pad)
    idx = np.arange(n)
    hi = np.minimum(idx + radius + 1, n)
    lo = np.maximum(idx - radius, 0)
    return np.take(c, hi, axis=axis) - np.take(c, lo, axis=axis)


# -- TV Laplacian on grids ---------------------------------------------------


@njit(cache=True, parallel=True)
def tv_apply_l_numba(coeff, v):
    rows, cols = v.shape
    out = np.zeros((rows, cols))
    for i in prange(rows):
        for j in range(cols):
            acc = 0.0
            if i < rows - 1:
                acc -= coeff[i, j] * (v[i + 1, j] - v[i, j])
            if i > 0:
                acc += coeff[i - 1, j] * (v[i, j] - v[i - 1, j])
            if j < cols - 1:
                acc -= coeff[i, j] * (v[i, j + 1] - v[i, j])
            if j > 0:
                acc += coeff[i, j - 1] * (v[i, j] - v[i, j - 1])
            out[i, j] = acc
    return out


def tv_apply_l_numpy(coeff, v):
    # G^T (C .* G v) along rows plus the same along columns.
    out = np.zeros_like(v)
    fr = coeff[:-1, :] * (v[1:, :] - v[:-1, :])
    out[:-1, :] -= fr
    out[1:, :] += fr
    fc = coeff[:, :-1] * (v[:, 1:] - v[:, :-1])
    out[:, :-1] -= fc
    out[:, 1:] += fc
    return out


if USE_NUMBA:
    bilateral_weights = bilateral_weights_numba
    stencil_apply = stencil_apply_numba
    box_sum = box_sum_numba
    tv_apply_l = tv_apply_l_numba
else:
    bilateral_weights = bilateral_weights_numpy
    stencil_apply = stencil_apply_numpy
    box_sum = box_sum_numpy
    tv_apply_l = tv_apply_l_numpy

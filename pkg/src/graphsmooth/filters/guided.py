"""Guided image filter on rectangular grids.

One application is the usual box-filter pipeline with truncated-window
means (divided by the number of in-image pixels). For a fixed guidance it is
linear in the input, with matrix

    S_pq = 1/n_p * sum_k 1/n_k * (1 + (g_p - mu_k)(g_q - mu_k) / (var_k + eps))

over windows ``k`` holding both ``p`` and ``q``, where ``n_p`` is the pixel
count of the window centered at ``p``. ``S`` itself is not symmetric near the
border, but ``S = D^-1 W`` with ``D = diag(n_p / w^2)`` and a symmetric ``W``,
and ``W <= D`` in the PSD order because every window block is bounded by
``n_k I``. Away from the border ``D = I`` and ``W = S``.
"""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..core import BoundFilter, FilterOperator, Grid2D, Signal
from ..errors import TopologyError, ValidationError
from .bilateral import _check_window


@dataclass(frozen=True)
class GuidedParams:
    window_width: int = 5
    epsilon: float = 1e-4

    def __post_init__(self):
        _check_window(self.window_width)
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValidationError(f"epsilon must be positive and finite, got {self.epsilon}")


def mean_filter(x, window_width: int):
    """Truncated-window mean with the given odd window width.

    Accepts a grid ``Signal`` (returns a Signal) or a 2D array (returns an array).
    """
    _check_window(window_width)
    if isinstance(x, Signal):
        if not isinstance(x.topology, Grid2D):
            raise TopologyError("the mean filter needs a Grid2D signal")
        return x.with_values(mean_filter(x.as_image(), window_width))
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise TopologyError("the mean filter needs a 2D image")
    r = window_width // 2
    counts = kernels.box_sum(np.ones(x.shape), r)
    return kernels.box_sum(np.ascontiguousarray(x), r) / counts


class GuidedFilter(FilterOperator):
    def __init__(self, topology, params: GuidedParams | None = None):
        if not isinstance(topology, Grid2D):
            raise TopologyError("the guided filter is only defined on Grid2D topologies")
        self.topology = topology
        self.params = params or GuidedParams()

    def _bind(self, g):
        return _BoundGuided(g.reshape(self.topology.shape), self.params)


class _BoundGuided(BoundFilter):
    def __init__(self, g, params):
        self.g = np.ascontiguousarray(g)
        self.radius = params.window_width // 2
        self.counts = kernels.box_sum(np.ones(g.shape), self.radius)
        self.mean_g = self._mean(self.g)
        var_g = self._mean(self.g * self.g) - self.mean_g * self.mean_g
        self.denom = var_g + params.epsilon
        self.degree = (self.counts / params.window_width**2).ravel()

    def _mean(self, x):
        return kernels.box_sum(x, self.radius) / self.counts

    def apply_w(self, v):
        return self.degree * self.smooth(v)

    def smooth(self, v):
        x = np.ascontiguousarray(v.reshape(self.g.shape))
        mean_x = self._mean(x)
        cov_gx = self._mean(self.g * x) - self.mean_g * mean_x
        a = cov_gx / self.denom
        b = mean_x - a * self.mean_g
        return (self._mean(a) * self.g + self._mean(b)).ravel()


def guided_smooth(g, x, params: GuidedParams | None = None) -> np.ndarray:
    """One guided-filter application to image ``x`` with guidance image ``g``."""
    g = np.asarray(g, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if g.shape != x.shape or g.ndim != 2:
        raise TopologyError("guidance and input must be 2D images of the same shape")
    filt = GuidedFilter(Grid2D(*g.shape), params)
    return filt.smooth(g, x).reshape(g.shape)

"""Bilateral filter evaluated directly over each neighborhood."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..core import BoundFilter, FilterOperator, GeneralGraph, Grid2D
from ..errors import ValidationError


@dataclass(frozen=True)
class BilateralParams:
    window_width: int = 5
    sigma_d: float = 1.0
    sigma_r: float = 0.2

    def __post_init__(self):
        _check_window(self.window_width)
        for name in ("sigma_d", "sigma_r"):
            sigma = float(getattr(self, name))
            # the weights divide by 2 sigma^2, which must stay a finite float
            if not (sigma > 0 and math.isfinite(2.0 * sigma * sigma)):
                raise ValidationError(f"{name} must be positive and below 1e150, got {sigma}")


def _check_window(width):
    if int(width) != width or width < 1 or width % 2 == 0:
        raise ValidationError(f"window width must be an odd positive integer, got {width}")


def bilateral_weight(dist: float, dg: float, params: BilateralParams) -> float:
    """Spatial Gaussian times range Gaussian, in (0, 1]."""
    return math.exp(-(dist * dist) / (2.0 * params.sigma_d**2)) * math.exp(
        -(dg * dg) / (2.0 * params.sigma_r**2)
    )


class BilateralFilter(FilterOperator):
    """Self-guided bilateral filter.

    On a grid, the neighborhood of a pixel is the ``window_width`` square
    centered on it (cut at the image border) with Euclidean pixel distances.
    On a general graph, the neighbors are the edge endpoints, using the edge
    distances. In both cases a node is its own neighbor with weight 1.
    """

    def __init__(self, topology, params: BilateralParams | None = None):
        self.topology = topology
        self.params = params or BilateralParams()

    def _bind(self, g):
        if isinstance(self.topology, Grid2D):
            return _BoundGrid(g.reshape(self.topology.shape), self.params)
        return _BoundGraph(g, self.topology, self.params)


class _BoundGrid(BoundFilter):
    def __init__(self, g2d, params):
        self.shape = g2d.shape
        self.radius = params.window_width // 2
        self.weights = kernels.bilateral_weights(
            np.ascontiguousarray(g2d), self.radius, float(params.sigma_d), float(params.sigma_r)
        )
        self.degree = kernels.stencil_apply(self.weights, np.ones(self.shape), self.radius).ravel()

    def apply_w(self, v):
        v2d = np.ascontiguousarray(v.reshape(self.shape))
        return kernels.stencil_apply(self.weights, v2d, self.radius).ravel()


class _BoundGraph(BoundFilter):
    def __init__(self, g, graph: GeneralGraph, params):
        self.n = graph.n_nodes
        self.i = graph.edges[:, 0]
        self.j = graph.edges[:, 1]
        d = graph.distances
        dg = g[self.i] - g[self.j]
        self.w = np.exp(-(d * d) / (2.0 * params.sigma_d**2)) * np.exp(
            -(dg * dg) / (2.0 * params.sigma_r**2)
        )
        self.degree = self.apply_w(np.ones(self.n))

    def apply_w(self, v):
        out = v.copy()
        out += np.bincount(self.i, self.w * v[self.j], minlength=self.n)
        out += np.bincount(self.j, self.w * v[self.i], minlength=self.n)
        return out

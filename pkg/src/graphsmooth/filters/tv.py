"""Total-variation filter written as a graph Laplacian.

``L(g) = grad^T diag(C) grad`` with forward differences (zero last row and
column, so Neumann boundaries come for free), ``D = I`` and ``W = I - L``.
The diffusion coefficient shrinks across edges of the guidance:

* 2D grids: ``C = eps / (eps + |grad g|) / 8`` with the isotropic gradient
  magnitude;
* 1D signals (a grid with a single row or column, or a general graph):
  ``C = eps / (eps + |grad g|) / 4``.

These scalings keep the diagonal of ``W`` nonnegative, so a smoothing step is
a convex combination of neighbors.
"""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..core import BoundFilter, FilterOperator, GeneralGraph, Grid2D, Signal
from ..errors import ValidationError


@dataclass(frozen=True)
class TVParams:
    epsilon: float = 1e-3

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValidationError(f"epsilon must be positive and finite, got {self.epsilon}")


def forward_diff(x, axis):
    """Bidiagonal gradient along ``axis``: x[k+1] - x[k], zero in the last slot."""
    out = np.zeros_like(x)
    n = x.shape[axis]
    if n > 1:
        hi = [slice(None)] * x.ndim
        lo = [slice(None)] * x.ndim
        hi[axis] = slice(1, n)
        lo[axis] = slice(0, n - 1)
        out[tuple(lo)] = x[tuple(hi)] - x[tuple(lo)]
    return out


def grid_coeff(g2d, epsilon):
    gr = forward_diff(g2d, 0)
    gc = forward_diff(g2d, 1)
    scale = 0.25 if min(g2d.shape) == 1 else 0.125
    return scale * (epsilon / (epsilon + np.sqrt(gr * gr + gc * gc)))


def edge_gradient(v, graph: GeneralGraph):
    i, j = graph.edges[:, 0], graph.edges[:, 1]
    return (v[j] - v[i]) / graph.distances


def graph_coeff_scale(graph: GeneralGraph) -> float:
    """Factor in (0, 1] that caps every diagonal entry of L at 1/2.

    For a chain with unit spacing it is 1, so the 1D formula is unchanged;
    high-degree or short-edge nodes shrink all coefficients together.
    """
    if len(graph.edges) == 0:
        return 1.0
    inv_d2 = 1.0 / graph.distances**2
    load = np.bincount(graph.edges[:, 0], inv_d2, minlength=graph.n_nodes)
    load += np.bincount(graph.edges[:, 1], inv_d2, minlength=graph.n_nodes)
    return min(1.0, 2.0 / load.max())


def graph_coeff(g, graph: GeneralGraph, epsilon):
    _check_distances(graph)
    grad = edge_gradient(g, graph)
    return 0.25 * graph_coeff_scale(graph) * (epsilon / (epsilon + np.abs(grad)))


def _check_distances(graph):
    if np.any(graph.distances <= 0):
        raise ValidationError("the TV filter needs strictly positive edge distances")


def tv_coeff(g, params: TVParams | None = None) -> np.ndarray:
    """Diffusion coefficients for guidance ``g``.

    ``g`` may be a Signal (grid or graph), a 2D image, or a flat array taken
    as a 1D signal on a unit-spaced chain. Grid inputs give one coefficient
    per pixel; graph inputs give one per edge.
    """
    eps = (params or TVParams()).epsilon
    if isinstance(g, Signal):
        if isinstance(g.topology, Grid2D):
            return grid_coeff(g.as_image(), eps)
        return graph_coeff(g.values, g.topology, eps)
    g = np.asarray(g, dtype=np.float64)
    if g.ndim == 1:
        g = g[:, None]
    return grid_coeff(g, eps)


class TVFilter(FilterOperator):
    def __init__(self, topology, params: TVParams | None = None):
        self.topology = topology
        self.params = params or TVParams()
        if isinstance(topology, GeneralGraph):
            _check_distances(topology)

    def _bind(self, g):
        if isinstance(self.topology, Grid2D):
            return _BoundGrid(grid_coeff(g.reshape(self.topology.shape), self.params.epsilon))
        return _BoundGraph(graph_coeff(g, self.topology, self.params.epsilon), self.topology)


class _BoundTV(BoundFilter):
    def apply_w(self, v):
        return v - self.apply_l(v)

    def smooth(self, x):
        return self.apply_w(x)


class _BoundGrid(_BoundTV):
    def __init__(self, coeff):
        self.coeff = coeff
        self.degree = np.ones(coeff.size)

    def apply_l(self, v):
        v2d = np.ascontiguousarray(v.reshape(self.coeff.shape))
        return kernels.tv_apply_l(self.coeff, v2d).ravel()


class _BoundGraph(_BoundTV):
    def __init__(self, coeff, graph):
        self.coeff = coeff
        self.graph = graph
        self.degree = np.ones(graph.n_nodes)

    def apply_l(self, v):
        graph = self.graph
        flux = self.coeff * edge_gradient(v, graph) / graph.distances
        n = graph.n_nodes
        return np.bincount(graph.edges[:, 1], flux, minlength=n) - np.bincount(
            graph.edges[:, 0], flux, minlength=n
        )

import math

import numpy as np
import pytest

from graphsmooth import BilateralFilter, BilateralParams, Grid2D, ValidationError, path_graph
from graphsmooth.filters import bilateral_weight

from conftest import random_graph, random_grid
from oracles import bilateral_dense_graph, bilateral_dense_grid, dense_from_apply

P = BilateralParams(5, 1.0, 0.2)


class TestWeight:
    def test_identity(self):
        assert bilateral_weight(0.0, 0.0, P) == 1.0

    def test_spatial(self):
        assert bilateral_weight(1.0, 0.0, P) == pytest.approx(math.exp(-0.5), rel=1e-15)

    def test_range(self):
        assert bilateral_weight(0.0, 0.2, P) == pytest.approx(0.6065306597, rel=1e-9)

    @pytest.mark.parametrize("kwargs", [dict(window_width=4), dict(sigma_d=0.0), dict(sigma_r=-1.0)])
    def test_bad_params(self, kwargs):
        with pytest.raises(ValidationError):
            BilateralParams(**kwargs)


def test_two_node_graph():
    filt = BilateralFilter(path_graph(2), P)
    g = np.zeros(2)
    e = math.exp(-0.5)
    np.testing.assert_allclose(filt.apply_w(g, [1.0, 0.0]), [1.0, e], rtol=1e-15)
    np.testing.assert_allclose(filt.degree(g), [1 + e, 1 + e], rtol=1e-15)


@pytest.mark.parametrize("seed", range(8))
def test_grid_matches_dense_formula(seed):
    rng = np.random.default_rng(seed)
    grid = random_grid(rng)
    width = int(rng.choice([1, 3, 5]))
    params = BilateralParams(width, float(rng.uniform(0.5, 2)), float(rng.uniform(0.05, 0.5)))
    g = rng.random(grid.shape)
    W = bilateral_dense_grid(g, width, params.sigma_d, params.sigma_r)
    filt = BilateralFilter(grid, params)
    bound = filt.bind(g)
    assert np.abs(dense_from_apply(bound.apply_w, grid.n_nodes) - W).max() <= 1e-12
    np.testing.assert_allclose(bound.degree, W.sum(axis=1), rtol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_graph_matches_dense_formula(seed):
    rng = np.random.default_rng(seed)
    graph = random_graph(rng, int(rng.integers(2, 17)))
    g = rng.random(graph.n_nodes)
    W = bilateral_dense_graph(g, graph.n_nodes, graph.edges, graph.distances, 1.0, 0.2)
    bound = BilateralFilter(graph, P).bind(g)
    assert np.abs(dense_from_apply(bound.apply_w, graph.n_nodes) - W).max() <= 1e-12


def test_degree_includes_self_weight(rng):
    g = rng.random((6, 6)) * 100  # huge range differences: only the self term survives
    deg = BilateralFilter(Grid2D(6, 6), P).degree(g)
    assert np.all(deg >= 1.0)


def test_maximum_principle(rng):
    grid = Grid2D(9, 7)
    g = rng.random(grid.shape)
    x = rng.random(grid.n_nodes)
    y = BilateralFilter(grid, P).smooth(g, x)
    assert y.min() >= x.min() - 1e-15 and y.max() <= x.max() + 1e-15

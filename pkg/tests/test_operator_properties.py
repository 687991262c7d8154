"""Contract properties shared by every filter, on random small topologies."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphsmooth import BilateralParams, GuidedParams, TVParams, kernels, make_filter
from graphsmooth.filters import BilateralFilter, GuidedFilter, TVFilter

from conftest import random_graph, random_grid
from oracles import dense_from_apply

seeds = st.integers(0, 2**32 - 1)


def make_case(kind, seed, graph=False):
    rng = np.random.default_rng(seed)
    if graph:
        topo = random_graph(rng, int(rng.integers(2, 17)))
    else:
        topo = random_grid(rng)
    if kind == "bilateral":
        filt = BilateralFilter(topo, BilateralParams(int(rng.choice([3, 5])), 1.0, 0.2))
    elif kind == "guided":
        filt = GuidedFilter(topo, GuidedParams(int(rng.choice([3, 5])), 1e-3))
    else:
        filt = TVFilter(topo, TVParams(1e-3))
    g = rng.random(topo.n_nodes)
    return rng, filt, g


CASES = [("bilateral", False), ("guided", False), ("tv", False), ("bilateral", True), ("tv", True)]
IDS = [f"{k}-{'graph' if gr else 'grid'}" for k, gr in CASES]


@pytest.mark.parametrize("kind,graph", CASES, ids=IDS)
@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_linear_in_v(kind, graph, seed):
    rng, filt, g = make_case(kind, seed, graph)
    bound = filt.bind(g)
    u, v = rng.standard_normal((2, g.size))
    lhs = bound.apply_w(2.5 * u - 1.5 * v)
    rhs = 2.5 * bound.apply_w(u) - 1.5 * bound.apply_w(v)
    assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, np.abs(rhs).max())


@pytest.mark.parametrize("kind,graph", CASES, ids=IDS)
@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_w_symmetric(kind, graph, seed):
    rng, filt, g = make_case(kind, seed, graph)
    bound = filt.bind(g)
    u, v = rng.standard_normal((2, g.size))
    gap = abs(u @ bound.apply_w(v) - v @ bound.apply_w(u))
    assert gap <= 1e-10 * np.linalg.norm(u) * np.linalg.norm(v)


@pytest.mark.parametrize("kind,graph", CASES, ids=IDS)
@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_laplacian_psd(kind, graph, seed):
    rng, filt, g = make_case(kind, seed, graph)
    bound = filt.bind(g)
    for v in rng.standard_normal((100, g.size)):
        assert v @ bound.apply_l(v) >= -1e-10


@pytest.mark.parametrize("kind,graph", CASES, ids=IDS)
@settings(max_examples=25, deadline=None)
@given(seed=seeds, c=st.floats(-2, 2))
def test_constant_fixed_point(kind, graph, seed, c):
    _, filt, g = make_case(kind, seed, graph)
    out = filt.smooth(g, np.full(g.size, c))
    assert np.abs(out - c).max() <= 1e-10
    assert np.all(filt.degree(g) > 0)


@pytest.mark.parametrize("kind,graph", CASES, ids=IDS)
@pytest.mark.parametrize("seed", range(4))
def test_dense_assembly_consistent(kind, graph, seed):
    rng, filt, g = make_case(kind, seed, graph)
    bound = filt.bind(g)
    W = dense_from_apply(bound.apply_w, g.size)
    for v in rng.standard_normal((5, g.size)):
        assert np.abs(W @ v - bound.apply_w(v)).max() <= 1e-12 * max(1.0, np.abs(W @ v).max())


@pytest.mark.parametrize("kind", ["bilateral", "tv"])
@pytest.mark.parametrize("graph", [False, True])
@pytest.mark.parametrize("seed", range(5))
def test_maximum_principle(kind, graph, seed):
    rng, filt, g = make_case(kind, seed, graph)
    x = rng.random(g.size)
    y = filt.smooth(g, x)
    assert y.min() >= x.min() - 1e-14 and y.max() <= x.max() + 1e-14


@pytest.mark.parametrize("kind", ["bilateral", "guided", "tv"])
def test_finite_output(kind, rng):
    _, filt, g = make_case(kind, 7)
    x = rng.standard_normal(g.size) * 1e3
    assert np.all(np.isfinite(filt.smooth(g * 1e3, x)))


@pytest.mark.parametrize("kind", ["bilateral", "guided", "tv"])
def test_numba_and_numpy_paths_agree(kind, monkeypatch, rng):
    topo = random_grid(rng, 40)
    params = {"bilateral": {}, "guided": {"window_width": 7}, "tv": {}}[kind]
    filt = make_filter(kind, topo, **params)
    g, v = rng.random((2, topo.n_nodes))
    results = {}
    for path in ("numba", "numpy"):
        for name in ("bilateral_weights", "stencil_apply", "box_sum", "tv_apply_l"):
            monkeypatch.setattr(kernels, name, getattr(kernels, f"{name}_{path}"))
        bound = filt.bind(g)
        results[path] = (bound.apply_w(v), bound.degree)
    for a, b in zip(results["numba"], results["numpy"]):
        assert np.abs(a - b).max() <= 1e-10 * max(1.0, np.abs(b).max())


def test_env_flag_selects_numpy():
    env = dict(os.environ, GRAPHSMOOTH_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import graphsmooth as g; print(g.backend_name())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"

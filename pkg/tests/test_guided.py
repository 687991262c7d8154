import numpy as np
import pytest

from graphsmooth import GuidedFilter, GuidedParams, Grid2D, Signal, TopologyError, ValidationError
from graphsmooth import path_graph
from graphsmooth.filters import guided_smooth, mean_filter

from conftest import random_grid
from oracles import dense_from_apply, guided_dense

IMG = np.arange(1.0, 10.0).reshape(3, 3)


class TestMeanFilter:
    def test_constant(self):
        np.testing.assert_allclose(mean_filter(np.full((4, 5), 0.3), 3), 0.3, rtol=1e-15)

    def test_center(self):
        assert mean_filter(IMG, 3)[1, 1] == pytest.approx(5.0)

    def test_corner_uses_truncated_window(self):
        assert mean_filter(IMG, 3)[0, 0] == pytest.approx(3.0)  # mean of 1, 2, 4, 5

    def test_signal_in_signal_out(self):
        out = mean_filter(Signal.from_image(IMG), 3)
        assert isinstance(out, Signal)
        assert out.as_image()[1, 1] == pytest.approx(5.0)

    def test_rejects_graph(self):
        with pytest.raises(TopologyError):
            mean_filter(Signal(np.zeros(3), path_graph(3)), 3)


class TestGuided:
    def test_constant_fixed(self):
        c = np.full((6, 6), 0.42)
        np.testing.assert_allclose(guided_smooth(c, c, GuidedParams(3, 0.01)), 0.42, atol=1e-14)

    def test_superposition(self, rng):
        g, x1, x2 = rng.random((3, 10, 8))
        p = GuidedParams(5, 1e-3)
        lhs = guided_smooth(g, 2 * x1 + 3 * x2, p)
        rhs = 2 * guided_smooth(g, x1, p) + 3 * guided_smooth(g, x2, p)
        assert np.abs(lhs - rhs).max() <= 1e-10 * np.abs(rhs).max()

    def test_requires_grid(self):
        with pytest.raises(TopologyError):
            GuidedFilter(path_graph(4))

    def test_rejects_bad_epsilon(self):
        with pytest.raises(ValidationError):
            GuidedParams(5, 0.0)

    def test_smooth_is_the_box_filter_pipeline(self, rng):
        # straight transcription of the algorithm with an independent box mean
        g, x = rng.random((2, 7, 9))
        w, eps = 3, 1e-2

        def fmean(a):
            out = np.empty_like(a)
            for i in range(a.shape[0]):
                for j in range(a.shape[1]):
                    out[i, j] = a[max(0, i - 1) : i + 2, max(0, j - 1) : j + 2].mean()
            return out

        mg, mx = fmean(g), fmean(x)
        a = (fmean(g * x) - mg * mx) / (fmean(g * g) - mg * mg + eps)
        b = mx - a * mg
        ref = fmean(a) * g + fmean(b)
        np.testing.assert_allclose(guided_smooth(g, x, GuidedParams(w, eps)), ref, atol=1e-13)


@pytest.mark.parametrize("seed", range(8))
def test_matches_dense_weight_formula(seed):
    rng = np.random.default_rng(seed)
    grid = random_grid(rng)
    params = GuidedParams(int(rng.choice([1, 3, 5])), float(10 ** rng.uniform(-4, -1)))
    g = rng.random(grid.shape)
    S = guided_dense(g, params.window_width, params.epsilon)
    bound = GuidedFilter(grid, params).bind(g)
    assert np.abs(dense_from_apply(bound.smooth, grid.n_nodes) - S).max() <= 1e-10
    W = dense_from_apply(bound.apply_w, grid.n_nodes)
    assert np.abs(W - bound.degree[:, None] * S).max() <= 1e-10


def test_degree_is_one_in_interior(rng):
    grid = Grid2D(9, 9)
    deg = GuidedFilter(grid, GuidedParams(5, 1e-4)).degree(rng.random(81)).reshape(9, 9)
    assert np.all(deg[2:-2, 2:-2] == 1.0)
    assert deg[0, 0] == pytest.approx(9 / 25)


def test_boundary_symmetry_defect(rng):
    """Symmetric everywhere with the window-fraction degree; report what D = I would give."""
    grid = Grid2D(8, 8)
    g = rng.random(grid.shape)
    bound = GuidedFilter(grid, GuidedParams(5, 1e-3)).bind(g)
    W = dense_from_apply(bound.apply_w, grid.n_nodes)
    S = dense_from_apply(bound.smooth, grid.n_nodes)
    ours = np.abs(W - W.T).max()
    naive = np.abs(S - S.T).max()
    print(f"guided W symmetry defect: window-fraction D {ours:.2e}, D = I {naive:.2e}")
    assert ours <= 1e-12
    # interior-supported vectors see no defect either way
    inner = np.zeros(grid.shape, dtype=bool)
    inner[2:-2, 2:-2] = True
    idx = np.flatnonzero(inner)
    assert np.abs(S[np.ix_(idx, idx)] - S[np.ix_(idx, idx)].T).max() <= 1e-12

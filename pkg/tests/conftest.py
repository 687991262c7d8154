import numpy as np
import pytest

from graphsmooth import GeneralGraph, Grid2D, graph_from_pairs
from graphsmooth.bench import NoiseSpec, add_noise, phantom

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0]), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_graph(rng, n, p=0.35, positions=True) -> GeneralGraph:
    """Random connected-ish graph with distances from random 2D positions."""
    pos = rng.random((n, 2)) * 3
    pairs = [(i, i + 1) for i in range(n - 1)]  # spanning chain
    for i in range(n):
        for j in range(i + 2, n):
            if rng.random() < p:
                pairs.append((i, j))
    pairs = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    d = np.linalg.norm(pos[pairs[:, 0]] - pos[pairs[:, 1]], axis=1) + 0.05
    return graph_from_pairs(n, pairs, d, pos if positions else None)


def random_grid(rng, max_side=8) -> Grid2D:
    return Grid2D(int(rng.integers(1, max_side + 1)), int(rng.integers(1, max_side + 1)))


@pytest.fixture(scope="session")
def phantom512():
    return phantom(512)


@pytest.fixture(scope="session")
def noisy512(phantom512):
    return add_noise(phantom512, NoiseSpec(mean=0.0, variance=0.01, seed=0, clip=True))

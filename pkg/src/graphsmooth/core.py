"""Signals, topologies and the filter-operator contract.

A smoothing filter is described by a symmetric weight matrix ``W(g)`` and a
positive diagonal ``D(g)`` built from a guidance signal ``g``. Filters never
assemble these matrices; they expose ``W(g) @ v`` and ``diag(D(g))``, and the
graph Laplacian ``L(g) = D(g) - W(g)`` is derived from the two.

Operators work on flat float64 arrays in row-major pixel order. ``Signal`` is
the validated container used at API boundaries (files, drivers, reports).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from .errors import TopologyError, ValidationError


@dataclass(frozen=True)
class Grid2D:
    """Rectangular pixel grid, stored row-major."""

    rows: int
    cols: int

    def __post_init__(self):
        if int(self.rows) != self.rows or int(self.cols) != self.cols:
            raise ValidationError("grid dimensions must be integers")
        if self.rows < 1 or self.cols < 1:
            raise ValidationError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")

    @property
    def n_nodes(self) -> int:
        return self.rows * self.cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)


@dataclass(frozen=True, eq=False)
class GeneralGraph:
    """Undirected graph with a spatial distance on every edge.

    ``edges`` is an (E, 2) integer array with ``i < j`` in every row,
    ``distances`` holds the matching ``||p_i - p_j||`` values and
    ``positions`` optionally keeps node coordinates of shape (N, dim).
    """

    n_nodes: int
    edges: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))
    distances: np.ndarray = field(default_factory=lambda: np.zeros(0))
    positions: np.ndarray | None = None

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValidationError("a graph needs at least one node")
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        dist = np.asarray(self.distances, dtype=np.float64).reshape(-1)
        if len(dist) != len(edges):
            raise ValidationError(f"{len(edges)} edges but {len(dist)} distances")
        if len(edges):
            if edges.min() < 0 or edges.max() >= self.n_nodes:
                raise ValidationError("edge endpoint outside 0..N-1")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValidationError("self-loops are not allowed")
            if np.any(edges[:, 0] > edges[:, 1]):
                raise ValidationError("edges must be stored with i < j")
            if len(np.unique(edges, axis=0)) != len(edges):
                raise ValidationError("duplicate edges")
        if not np.all(np.isfinite(dist)) or np.any(dist < 0):
            raise ValidationError("edge distances must be finite and >= 0")
        pos = self.positions
        if pos is not None:
            pos = np.asarray(pos, dtype=np.float64)
            if pos.ndim == 1:
                pos = pos[:, None]
            if pos.shape[0] != self.n_nodes:
                raise ValidationError("positions must have one row per node")
            pos.setflags(write=False)
        edges.setflags(write=False)
        dist.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "distances", dist)
        object.__setattr__(self, "positions", pos)

    @property
    def dim(self) -> int:
        return 0 if self.positions is None else self.positions.shape[1]

    def node_degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n_nodes)

    def __eq__(self, other):
        if not isinstance(other, GeneralGraph):
            return NotImplemented
        if self is other:
            return True
        same_pos = (self.positions is None and other.positions is None) or (
            self.positions is not None
            and other.positions is not None
            and np.array_equal(self.positions, other.positions)
        )
        return (
            self.n_nodes == other.n_nodes
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.distances, other.distances)
            and same_pos
        )

    __hash__ = object.__hash__


Topology = Grid2D | GeneralGraph


def path_graph(n: int, spacing: float = 1.0) -> GeneralGraph:
    """1D chain 0-1-...-(n-1) with equal spacing."""
    i = np.arange(n - 1)
    return GeneralGraph(
        n,
        np.column_stack([i, i + 1]),
        np.full(n - 1, float(spacing)),
        positions=np.arange(n, dtype=np.float64) * spacing,
    )


def graph_from_pairs(n_nodes, pairs, distances, positions=None) -> GeneralGraph:
    """Build a GeneralGraph from unordered pairs, normalizing each to i < j."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return GeneralGraph(n_nodes, np.sort(pairs, axis=1), distances, positions)


@dataclass(frozen=True, eq=False)
class Signal:
    """Real intensities attached to a topology.

    ``values`` is always a read-only flat float64 array; grid signals are
    stored row-major.
    """

    values: np.ndarray
    topology: Topology

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64).reshape(-1)
        if vals.size != self.topology.n_nodes:
            raise TopologyError(
                f"signal has {vals.size} values but topology has {self.topology.n_nodes} nodes"
            )
        if not np.all(np.isfinite(vals)):
            raise ValidationError("signal values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    @classmethod
    def from_image(cls, image) -> Signal:
        image = np.asarray(image, dtype=np.float64)
        if image.ndim != 2:
            raise ValidationError(f"expected a 2D image, got shape {image.shape}")
        return cls(image, Grid2D(*image.shape))

    def as_image(self) -> np.ndarray:
        if not isinstance(self.topology, Grid2D):
            raise TopologyError("only grid signals can be viewed as images")
        return self.values.reshape(self.topology.shape)

    def with_values(self, values) -> Signal:
        return Signal(values, self.topology)


def dot(u, v) -> float:
    """Inner product with a fixed reduction order.

    Uses numpy's pairwise summation of the elementwise product, which for
    contiguous float64 input is deterministic and independent of BLAS
    threading (unlike ``np.dot``).
    """
    u = _values(u)
    v = _values(v)
    if u.shape != v.shape:
        raise ValidationError(f"length mismatch: {u.size} vs {v.size}")
    return float(np.add.reduce(u * v))


def _values(x) -> np.ndarray:
    if isinstance(x, Signal):
        return x.values
    return np.asarray(x, dtype=np.float64).reshape(-1)


class BoundFilter(ABC):
    """A filter with its guidance frozen: a fixed linear operator."""

    #: diag(D(g)) as a flat array, strictly positive.
    degree: np.ndarray

    @abstractmethod
    def apply_w(self, v: np.ndarray) -> np.ndarray:
        """Return ``W(g) @ v`` for a flat array ``v``."""

    def smooth(self, x: np.ndarray) -> np.ndarray:
        return self.apply_w(x) / self.degree

    def apply_l(self, v: np.ndarray) -> np.ndarray:
        return self.degree * v - self.apply_w(v)


class FilterOperator(ABC):
    """A self-guided smoothing filter defined on one topology.

    Subclasses implement :meth:`bind`, which precomputes everything that
    depends only on the guidance. The two-argument methods are conveniences
    that bind and apply in one go.
    """

    topology: Topology

    @abstractmethod
    def _bind(self, g: np.ndarray) -> BoundFilter: ...

    def bind(self, g) -> BoundFilter:
        return self._bind(self.check(g))

    def check(self, x) -> np.ndarray:
        """Return ``x`` as a flat float64 array, checking it lives on our topology."""
        if isinstance(x, Signal):
            if x.topology != self.topology:
                raise TopologyError("signal topology differs from the filter topology")
            return x.values
        arr = np.asarray(x, dtype=np.float64).reshape(-1)
        if arr.size != self.topology.n_nodes:
            raise TopologyError(
                f"expected {self.topology.n_nodes} values, got {arr.size}"
            )
        return arr

    def apply_w(self, g, v) -> np.ndarray:
        return self.bind(g).apply_w(self.check(v))

    def degree(self, g) -> np.ndarray:
        return self.bind(g).degree

    def smooth(self, g, x) -> np.ndarray:
        return self.bind(g).smooth(self.check(x))

    def apply_l(self, g, v) -> np.ndarray:
        return self.bind(g).apply_l(self.check(v))


def apply_l(filt: FilterOperator, g, v) -> np.ndarray:
    """``L(g) v = D(g) v - W(g) v``."""
    return filt.apply_l(g, v)

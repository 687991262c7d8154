"""Self-guided smoothing filters on graphs with accelerated iteration."""

__version__ = "0.1.0"

from ._jit import backend_name
from .accel import AccelConfig, DenoiseReport, run, run_nesterov, run_pcg, run_repeated
from .core import (
    BoundFilter,
    FilterOperator,
    GeneralGraph,
    Grid2D,
    Signal,
    apply_l,
    dot,
    graph_from_pairs,
    path_graph,
)
from .errors import FormatError, GraphSmoothError, NumericError, TopologyError, ValidationError
from .filters import (
    BilateralFilter,
    BilateralParams,
    GuidedFilter,
    GuidedParams,
    TVFilter,
    TVParams,
    make_filter,
)
from .metrics import psnr

__all__ = [
    "AccelConfig",
    "BilateralFilter",
    "BilateralParams",
    "BoundFilter",
    "DenoiseReport",
    "FilterOperator",
    "FormatError",
    "GeneralGraph",
    "GraphSmoothError",
    "Grid2D",
    "GuidedFilter",
    "GuidedParams",
    "NumericError",
    "Signal",
    "TVFilter",
    "TVParams",
    "TopologyError",
    "ValidationError",
    "apply_l",
    "backend_name",
    "dot",
    "graph_from_pairs",
    "make_filter",
    "path_graph",
    "psnr",
    "run",
    "run_nesterov",
    "run_pcg",
    "run_repeated",
]

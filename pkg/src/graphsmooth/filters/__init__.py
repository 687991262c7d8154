from ..errors import ValidationError
from .bilateral import BilateralFilter, BilateralParams, bilateral_weight
from .guided import GuidedFilter, GuidedParams, guided_smooth, mean_filter
from .tv import TVFilter, TVParams, tv_coeff

FILTERS = {
    "bilateral": (BilateralFilter, BilateralParams),
    "guided": (GuidedFilter, GuidedParams),
    "tv": (TVFilter, TVParams),
}


def make_filter(kind, topology, **params):
    """Build a filter by name, e.g. ``make_filter("tv", grid, epsilon=1e-3)``."""
    try:
        cls, param_cls = FILTERS[kind]
    except KeyError:
        raise ValidationError(f"unknown filter {kind!r}; choose from {sorted(FILTERS)}") from None
    try:
        p = param_cls(**params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for the {kind} filter: {exc}") from None
    return cls(topology, p)


__all__ = [
    "BilateralFilter",
    "BilateralParams",
    "GuidedFilter",
    "GuidedParams",
    "TVFilter",
    "TVParams",
    "bilateral_weight",
    "guided_smooth",
    "make_filter",
    "mean_filter",
    "tv_coeff",
]

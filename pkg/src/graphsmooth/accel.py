"""Iteration drivers for self-guided filters.

Every driver spends its budget in *basic filter calls*: one evaluation of
``W(g) v`` for some guidance ``g``. That is the unit in which the drivers are
compared, so a report always carries the exact number of calls made.

* :func:`run_repeated`: ``x <- D(x)^-1 W(x) x``.
* :func:`run_pcg`: conjugate gradients on ``L(y) u = 0`` preconditioned by
  ``D(y)``, restarted every ``k_max`` calls with fresh guidance.
* :func:`run_nesterov`: the plain step taken at the extrapolated point
  ``y + beta_k (y - y_old)``, ``beta_k = (k - 1) / (k + 2)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import FilterOperator, Signal, dot
from .errors import NumericError, ValidationError
from .metrics import psnr

KINDS = ("repeated", "pcg", "nesterov")


@dataclass(frozen=True)
class AccelConfig:
    kind: str = "repeated"
    k_max: int = 1
    l_max: int = 1
    gamma_tol: float = 1e-14
    curvature_tol: float = 1e-14

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown driver {self.kind!r}; choose from {KINDS}")
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise ValidationError(f"k_max must be a positive integer, got {self.k_max}")
        if int(self.l_max) != self.l_max or self.l_max < 1:
            raise ValidationError(f"l_max must be a positive integer, got {self.l_max}")
        if self.kind == "pcg" and self.k_max < 2:
            raise ValidationError("pcg needs k_max >= 2")
        if self.gamma_tol < 0 or self.curvature_tol < 0:
            raise ValidationError("breakdown tolerances must be >= 0")

    @property
    def budget(self) -> int:
        """Nominal number of basic filter calls."""
        return self.k_max * self.l_max if self.kind == "pcg" else self.k_max


@dataclass
class DenoiseReport:
    output: Signal
    basic_filter_calls: int
    psnr_trace: list[tuple[int, float]] | None = None
    elapsed: float = 0.0
    #: PCG only: ||r|| at each restart head and after every update.
    residual_norms: list[float] = field(default_factory=list)

    @property
    def final_psnr(self) -> float | None:
        return self.psnr_trace[-1][1] if self.psnr_trace else None

    def best(self) -> tuple[int, float] | None:
        """(calls, psnr) of the best iterate seen, or None without a reference."""
        if not self.psnr_trace:
            return None
        return max(self.psnr_trace, key=lambda cp: cp[1])

    def calls_to_reach(self, target: float) -> int | None:
        """Fewest calls after which the trace PSNR is >= target."""
        for calls, value in self.psnr_trace or ():
            if value >= target:
                return calls
        return None


class _Budget:
    """Counts basic filter calls and records the PSNR trace."""

    def __init__(self, reference, callback):
        self.calls = 0
        self.reference = reference
        self.trace = [] if reference is not None else None
        self.callback = callback

    def record(self, y):
        if self.trace is not None:
            self.trace.append((self.calls, psnr(self.reference, y)))
        if self.callback is not None:
            self.callback(self.calls, y)


def _start(filt, x0, reference):
    x = filt.check(x0).copy()
    ref = None if reference is None else filt.check(reference)
    return x, ref


def _check_finite(y, where):
    if not np.all(np.isfinite(y)):
        raise NumericError(f"non-finite values ({where})")


def run_repeated(
    filt: FilterOperator,
    x0,
    k_max: int,
    *,
    reference=None,
    callback: Callable | None = None,
) -> DenoiseReport:
    """Apply the self-guided filter ``k_max`` times."""
    AccelConfig("repeated", k_max)
    t0 = time.perf_counter()
    x, ref = _start(filt, x0, reference)
    budget = _Budget(ref, callback)
    for k in range(1, k_max + 1):
        x = filt.bind(x).smooth(x)
        budget.calls += 1
        _check_finite(x, f"step {k}")
        budget.record(x)
    return DenoiseReport(
        Signal(x, filt.topology), budget.calls, budget.trace, time.perf_counter() - t0
    )


def nesterov_beta(k: int) -> float:
    return (k - 1) / (k + 2)


def run_nesterov(
    filt: FilterOperator,
    x0,
    k_max: int,
    *,
    reference=None,
    callback: Callable | None = None,
    momentum: Callable[[int], float] = nesterov_beta,
) -> DenoiseReport:
    """Nesterov-accelerated self-guided filtering.

    The guidance of step ``k`` is the extrapolated point ``t``, not ``y``.
    ``momentum`` maps the 1-based step index to beta; it exists mainly so
    tests can switch the extrapolation off.
    """
    AccelConfig("nesterov", k_max)
    t0 = time.perf_counter()
    y, ref = _start(filt, x0, reference)
    budget = _Budget(ref, callback)
    y_old = y
    for k in range(1, k_max + 1):
        beta = momentum(k)
        t = y + beta * (y - y_old)
        y_old = y
        y = filt.bind(t).smooth(t)
        budget.calls += 1
        _check_finite(y, f"step {k}")
        budget.record(y)
    return DenoiseReport(
        Signal(y, filt.topology), budget.calls, budget.trace, time.perf_counter() - t0
    )


def run_pcg(
    filt: FilterOperator,
    x0,
    k_max: int,
    l_max: int,
    *,
    gamma_tol: float = 1e-14,
    curvature_tol: float = 1e-14,
    reference=None,
    callback: Callable | None = None,
    frozen_guidance=None,
) -> DenoiseReport:
    """Restarted preconditioned conjugate gradients.

    Each of the ``l_max`` restarts freezes the guidance at the current
    iterate, spends one call on the residual ``W y - D y`` and up to
    ``k_max - 1`` calls on search directions. An inner loop stops early when
    ``gamma`` falls to ``gamma_tol`` times the first ``gamma`` of the run or
    when ``p^T q <= curvature_tol * p^T p``; the next restart still happens.

    ``frozen_guidance`` pins the guidance for every restart, turning the
    driver into textbook PCG on a fixed linear system.
    """
    AccelConfig("pcg", k_max, l_max, gamma_tol, curvature_tol)
    t0 = time.perf_counter()
    y, ref = _start(filt, x0, reference)
    budget = _Budget(ref, callback)
    residuals = []
    fixed_op = None if frozen_guidance is None else filt.bind(frozen_guidance)
    gamma_first = None
    for restart in range(1, l_max + 1):
        op = fixed_op if fixed_op is not None else filt.bind(y)
        d = op.degree
        r = op.apply_w(y) - d * y
        budget.calls += 1
        _check_finite(r, f"restart {restart}, residual")
        residuals.append(math.sqrt(dot(r, r)))
        budget.record(y)
        gamma_old = 0.0
        p = None
        for k in range(1, k_max):
            s = r / d
            gamma = dot(s, r)
            if gamma_first is None:
                gamma_first = gamma
            if gamma <= 0.0 or gamma <= gamma_tol * gamma_first:
                break
            p = s if k == 1 else s + (gamma / gamma_old) * p
            q = d * p - op.apply_w(p)
            budget.calls += 1
            _check_finite(q, f"restart {restart}, step {k}")
            pq = dot(p, q)
            if not pq > curvature_tol * dot(p, p):
                budget.record(y)
                break
            alpha = gamma / pq
            y = y + alpha * p
            r = r - alpha * q
            gamma_old = gamma
            _check_finite(y, f"restart {restart}, step {k}")
            residuals.append(math.sqrt(dot(r, r)))
            budget.record(y)
    return DenoiseReport(
        Signal(y, filt.topology),
        budget.calls,
        budget.trace,
        time.perf_counter() - t0,
        residuals,
    )


def run(filt: FilterOperator, x0, config: AccelConfig, **kwargs) -> DenoiseReport:
    """Dispatch on ``config.kind``."""
    if config.kind == "repeated":
        return run_repeated(filt, x0, config.k_max, **kwargs)
    if config.kind == "nesterov":
        return run_nesterov(filt, x0, config.k_max, **kwargs)
    return run_pcg(
        filt,
        x0,
        config.k_max,
        config.l_max,
        gamma_tol=config.gamma_tol,
        curvature_tol=config.curvature_tol,
        **kwargs,
    )

"""Karcher-mean solvers with per-iteration traces.

Three solvers share the same stopping rule (Frobenius norm of the
unnormalized gradient sum below ``grad_tol``, default ``1e-10 * n``):

* :func:`mm_solve` — parameter-free majorization-minimization; each step
  minimizes the surrogate in closed form and the objective never
  increases.
* :func:`gd_linesearch_solve` — gradient descent along the exponential
  map with backtracking line search; every inner probe counts as one
  trace record.
* :func:`gd_fixed_step_solve` — the same update with a constant step;
  no descent guarantee, with a divergence guard.
"""

import math
from dataclasses import dataclass, field
from time import perf_counter
from typing import List, Optional

import numpy as np

from .errors import DomainError
from .karcher import Ensemble, _f12, grad_sum, objective, surrogate_minimizer
from .spd_core import check_spd, exp_m, sqrt_m, sym

DEFAULT_MAX_ITERS = 500
DEFAULT_GRAD_TOL_PER_MAT = 1e-10
DIVERGENCE_FACTOR = 1e6

STATUS_CONVERGED = "converged"
STATUS_MAX_ITERS = "max_iters"
STATUS_LINE_SEARCH_STALLED = "line_search_stalled"
STATUS_DIVERGED = "diverged"


@dataclass(frozen=True)
class SolverConfig:
    """Iteration caps, tolerances, and step-size policy.

    ``grad_tol`` applies to the unnormalized gradient sum; when ``None``
    it defaults to ``1e-10 * n`` at solve time (the sum scales with n).
    ``nu`` and ``c`` drive the line-search step sizes c^j · nu, j ≥ 1.
    """

    max_iters: int = DEFAULT_MAX_ITERS
    grad_tol: Optional[float] = None
    nu: float = 1.0
    c: float = 0.5
    ls_max_j: int = 60

    def __post_init__(self):
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")
        if self.grad_tol is not None and self.grad_tol <= 0:
            raise DomainError("grad_tol must be positive")
        if self.nu <= 0:
            raise DomainError("nu must be positive")
        if not 0 < self.c < 1:
            raise DomainError("c must lie in (0, 1)")
        if self.ls_max_j < 1:
            raise DomainError("ls_max_j must be >= 1")

    def effective_grad_tol(self, n: int) -> float:
        if self.grad_tol is not None:
            return self.grad_tol
        return DEFAULT_GRAD_TOL_PER_MAT * n


@dataclass(frozen=True)
class TraceRecord:
    """One iteration of a solver run.

    ``grad_norm`` is ‖Σᵢ log(X^{-1/2} Aᵢ X^{-1/2})‖_F (unnormalized sum)
    and ``log_error`` its natural log.
    """

    iter: int
    objective: float
    grad_norm: float
    log_error: float
    elapsed: float


@dataclass(frozen=True)
class SolverResult:
    """Final iterate plus per-iteration trace.

    ``converged`` implies the final grad_norm is below the effective
    tolerance; ``status`` names the stopping reason otherwise.
    """

    mean: np.ndarray
    trace: List[TraceRecord] = field(repr=False)
    converged: bool = False
    iters_used: int = 0
    status: str = STATUS_MAX_ITERS


def _log_error(grad_norm: float) -> float:
    return math.log(grad_norm) if grad_norm > 0 else float("-inf")


class _Tracer:
    def __init__(self):
        self.t0 = perf_counter()
        self.trace: List[TraceRecord] = []

    def record(self, e: Ensemble, x, f_val=None, gnorm=None):
        if f_val is None:
            f_val = objective(e, x)
        if gnorm is None:
            gnorm = float(np.linalg.norm(grad_sum(e, x)))
        self.trace.append(TraceRecord(
            iter=len(self.trace),
            objective=f_val,
            grad_norm=gnorm,
            log_error=_log_error(gnorm),
            elapsed=perf_counter() - self.t0,
        ))
        return f_val, gnorm


def arithmetic_mean_init(e: Ensemble) -> np.ndarray:
    """Arithmetic mean (1/n) Σ Aᵢ, the common starting iterate."""
    return sym(np.mean(e.mats, axis=0))


def mm_solve(e: Ensemble, cfg: SolverConfig, x0) -> SolverResult:
    """Majorization-minimization fixed-point iteration.

    Each iterate is the closed-form minimizer of the surrogate built at
    the previous one; the objective trace is nonincreasing.
    """
    x = check_spd(x0)
    tol = cfg.effective_grad_tol(e.n)
    tracer = _Tracer()
    for k in range(cfg.max_iters + 1):
        _, gnorm = tracer.record(e, x)
        if gnorm < tol:
            return SolverResult(mean=x, trace=tracer.trace, converged=True,
                                iters_used=k, status=STATUS_CONVERGED)
        if k == cfg.max_iters:
            break
        c1, c2 = _f12(e, x)
        x = surrogate_minimizer(c1, c2)
    return SolverResult(mean=x, trace=tracer.trace, converged=False,
                        iters_used=cfg.max_iters, status=STATUS_MAX_ITERS)


def _exp_step(x, sqrt_x, step, d):
    return sym(sqrt_x @ exp_m(step * d) @ sqrt_x)


def gd_linesearch_solve(e: Ensemble, cfg: SolverConfig, x0) -> SolverResult:
    """Gradient descent with backtracking line search.

    Trial steps c^j · nu (smallest j ≥ 0 whose objective does not
    exceed the current one) are taken along the exponential map.
    Accepting ties matters near convergence: once objective differences
    fall below float64 resolution a strict-decrease rule deadlocks while
    the iterate can still contract the gradient norm by orders of
    magnitude. Every inner probe appends one trace record, so
    ``max_iters`` caps the total probe count; if every probe up to
    ``ls_max_j`` increases the objective the run stops with status
    ``line_search_stalled``.
    """
    x = check_spd(x0)
    tol = cfg.effective_grad_tol(e.n)
    tracer = _Tracer()
    f_cur, gnorm = tracer.record(e, x)
    if gnorm < tol:
        return SolverResult(mean=x, trace=tracer.trace, converged=True,
                            iters_used=0, status=STATUS_CONVERGED)
    while True:
        d = grad_sum(e, x) / e.n
        sqrt_x = sqrt_m(x)
        accepted = False
        for j in range(cfg.ls_max_j + 1):
            if len(tracer.trace) > cfg.max_iters:
                return SolverResult(mean=x, trace=tracer.trace, converged=False,
                                    iters_used=len(tracer.trace) - 1,
                                    status=STATUS_MAX_ITERS)
            x_trial = _exp_step(x, sqrt_x, cfg.c**j * cfg.nu, d)
            f_trial = objective(e, x_trial)
            if f_trial <= f_cur:
                x = x_trial
                f_cur, gnorm = tracer.record(e, x, f_val=f_trial)
                accepted = True
                break
            tracer.record(e, x, f_val=f_cur, gnorm=gnorm)
        if not accepted:
            return SolverResult(mean=x, trace=tracer.trace, converged=False,
                                iters_used=len(tracer.trace) - 1,
                                status=STATUS_LINE_SEARCH_STALLED)
        if gnorm < tol:
            return SolverResult(mean=x, trace=tracer.trace, converged=True,
                                iters_used=len(tracer.trace) - 1,
                                status=STATUS_CONVERGED)
        if len(tracer.trace) > cfg.max_iters:
            return SolverResult(mean=x, trace=tracer.trace, converged=False,
                                iters_used=len(tracer.trace) - 1,
                                status=STATUS_MAX_ITERS)


def gd_fixed_step_solve(e: Ensemble, cfg: SolverConfig, x0) -> SolverResult:
    """Gradient descent with the constant step ``nu``.

    The trace may be nonmonotone; the run stops with status ``diverged``
    once the objective exceeds 1e6 times its initial value.
    """
    x = check_spd(x0)
    tol = cfg.effective_grad_tol(e.n)
    tracer = _Tracer()
    f0 = None
    for k in range(cfg.max_iters + 1):
        f_val, gnorm = tracer.record(e, x)
        if f0 is None:
            f0 = f_val
        if gnorm < tol:
            return SolverResult(mean=x, trace=tracer.trace, converged=True,
                                iters_used=k, status=STATUS_CONVERGED)
        if f_val > DIVERGENCE_FACTOR * f0:
            return SolverResult(mean=x, trace=tracer.trace, converged=False,
                                iters_used=k, status=STATUS_DIVERGED)
        if k == cfg.max_iters:
            break
        d = grad_sum(e, x) / e.n
        x = _exp_step(x, sqrt_m(x), cfg.nu, d)
    return SolverResult(mean=x, trace=tracer.trace, converged=False,
                        iters_used=cfg.max_iters, status=STATUS_MAX_ITERS)

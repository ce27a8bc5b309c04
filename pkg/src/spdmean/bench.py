"""Benchmark harness: ensemble generators and repeated-run experiments.

Ensembles are built as ``A_i = U_i S_i U_i^T`` with ``U_i`` obtained by
orthonormalizing a matrix of uniform(0,1) entries and ``S_i`` a sampled
or fixed spectrum. An experiment runs every configured solver on
``runs`` independently generated instances and reports, per solver and
iteration index, the mean logarithmic error; runs that converge early
are padded by repeating their final value.

Randomness uses numpy's PCG64: run ``r`` draws from the child stream
``SeedSequence(seed).spawn(runs)[r]``, so reports are deterministic for
a given spec and unaffected by any parallel scheduling of runs.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import DomainError
from .karcher import Ensemble
from .solvers import (
    SolverConfig,
    SolverResult,
    arithmetic_mean_init,
    gd_fixed_step_solve,
    gd_linesearch_solve,
    mm_solve,
)
from .spd_core import sym

SOLVER_KINDS = ("mm", "gd-ls", "gd-fixed")


@dataclass(frozen=True)
class SpectrumSpec:
    """Eigenvalue model for generated matrices.

    kind "uniform": dim draws from uniform(lo, hi), 0 < lo < hi.
    kind "geometric": the fixed series 10^0, 10^a, ..., 10^{(dim-1)a}.
    kind "explicit": the given values verbatim (length dim).
    """

    kind: str
    dim: int
    lo: Optional[float] = None
    hi: Optional[float] = None
    a: Optional[float] = None
    values: Optional[Sequence[float]] = None

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("spectrum dim must be >= 1")
        if self.kind == "uniform":
            if self.lo is None or self.hi is None or not 0 < self.lo < self.hi:
                raise DomainError("uniform spectrum requires 0 < lo < hi")
        elif self.kind == "geometric":
            if self.a is None or self.a <= 0:
                raise DomainError("geometric spectrum requires a > 0")
        elif self.kind == "explicit":
            if self.values is None or len(self.values) != self.dim:
                raise DomainError("explicit spectrum requires dim values")
            if any(v <= 0 for v in self.values):
                raise DomainError("explicit spectrum values must be positive")
        else:
            raise DomainError(f"unknown spectrum kind {self.kind!r}")

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "uniform":
            return rng.uniform(self.lo, self.hi, size=self.dim)
        if self.kind == "geometric":
            return 10.0 ** (self.a * np.arange(self.dim))
        return np.asarray(self.values, dtype=float)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "dim": self.dim}
        if self.kind == "uniform":
            d.update(lo=self.lo, hi=self.hi)
        elif self.kind == "geometric":
            d.update(a=self.a)
        else:
            d.update(values=list(map(float, self.values)))
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumSpec":
        known = {"kind", "dim", "lo", "hi", "a", "values"}
        unknown = set(d) - known
        if unknown:
            raise DomainError(f"unknown spectrum fields: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class SolverSpec:
    """A solver kind plus its configuration for one experiment column."""

    kind: str
    config: SolverConfig = field(default_factory=SolverConfig)
    id: Optional[str] = None

    def __post_init__(self):
        if self.kind not in SOLVER_KINDS:
            raise DomainError(f"unknown solver kind {self.kind!r}")

    @property
    def solver_id(self) -> str:
        if self.id is not None:
            return self.id
        if self.kind == "mm":
            return "mm"
        return f"{self.kind}-nu{self.config.nu:g}"

    def run(self, e: Ensemble, x0) -> SolverResult:
        fn = {"mm": mm_solve, "gd-ls": gd_linesearch_solve,
              "gd-fixed": gd_fixed_step_solve}[self.kind]
        return fn(e, self.config, x0)

    def to_dict(self) -> dict:
        cfg = self.config
        d = {"kind": self.kind, "max_iters": cfg.max_iters,
             "grad_tol": cfg.grad_tol, "nu": cfg.nu, "c": cfg.c,
             "ls_max_j": cfg.ls_max_j}
        if self.id is not None:
            d["id"] = self.id
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SolverSpec":
        d = dict(d)
        kind = d.pop("kind", None)
        if kind is None:
            raise DomainError("solver spec requires a 'kind' field")
        ident = d.pop("id", None)
        known = {"max_iters", "grad_tol", "nu", "c", "ls_max_j"}
        unknown = set(d) - known
        if unknown:
            raise DomainError(f"unknown solver fields: {sorted(unknown)}")
        return cls(kind=kind, config=SolverConfig(**d), id=ident)


@dataclass(frozen=True)
class ExperimentSpec:
    """A full simulation regime: instance shape, spectrum, runs, solvers."""

    n: int
    p: int
    spectrum: SpectrumSpec
    solvers: List[SolverSpec]
    scale_first_by: float = 1.0
    runs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise DomainError("n and p must be >= 1")
        if self.runs < 1:
            raise DomainError("runs must be >= 1")
        if self.scale_first_by <= 0:
            raise DomainError("scale_first_by must be positive")
        if self.spectrum.dim != self.p:
            raise DomainError("spectrum dim must equal p")
        if not self.solvers:
            raise DomainError("at least one solver is required")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "spectrum": self.spectrum.to_dict(),
            "scale_first_by": self.scale_first_by,
            "runs": self.runs,
            "seed": self.seed,
            "solvers": [s.to_dict() for s in self.solvers],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        d = dict(d)
        known = {"n", "p", "spectrum", "scale_first_by", "runs", "seed",
                 "solvers"}
        unknown = set(d) - known
        if unknown:
            raise DomainError(f"unknown experiment fields: {sorted(unknown)}")
        try:
            spectrum = SpectrumSpec.from_dict(d.pop("spectrum"))
        except KeyError:
            raise DomainError("experiment spec requires a 'spectrum' field")
        except TypeError as exc:
            raise DomainError(f"invalid spectrum: {exc}") from exc
        solvers_raw = d.pop("solvers", None)
        if not solvers_raw:
            raise DomainError("experiment spec requires a 'solvers' list")
        solvers = [SolverSpec.from_dict(s) for s in solvers_raw]
        try:
            return cls(spectrum=spectrum, solvers=solvers, **d)
        except TypeError as exc:
            raise DomainError(f"invalid experiment spec: {exc}") from exc


def random_orthogonal(p: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal basis of a matrix of independent uniform(0,1) entries.

    Mirrors the generator used for the simulation regimes (orth of a
    uniform random square matrix, via SVD); not Haar-distributed.
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    m = rng.uniform(size=(p, p))
    u, _, _ = np.linalg.svd(m)
    return u


def generate_ensemble(spec: ExperimentSpec, rng: np.random.Generator) -> Ensemble:
    """Draw one problem instance A_i = U_i S_i U_i^T per the spec."""
    mats = []
    for i in range(spec.n):
        u = random_orthogonal(spec.p, rng)
        s = spec.spectrum.sample(rng)
        a = sym((u * s) @ u.T)
        if i == 0:
            a = a * spec.scale_first_by
        mats.append(a)
    return Ensemble.from_matrices(mats)


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregated traces of one experiment.

    ``mean_log_error`` has one row per iteration index and one column
    per solver (mean over successful runs, early runs padded with their
    final value). ``results`` keeps the full per-run traces; ``errors``
    collects per-run failure messages without aborting the experiment.
    """

    spec: ExperimentSpec
    solver_ids: List[str]
    mean_log_error: np.ndarray
    results: Dict[str, List[Optional[SolverResult]]]
    errors: List[str]


def _padded(values: List[float], length: int) -> List[float]:
    return values + [values[-1]] * (length - len(values))


def run_experiment(spec: ExperimentSpec) -> ExperimentReport:
    """Run every configured solver on ``runs`` generated instances."""
    ids = [s.solver_id for s in spec.solvers]
    if len(set(ids)) != len(ids):
        raise DomainError(f"duplicate solver ids: {ids}")
    results: Dict[str, List[Optional[SolverResult]]] = {i: [] for i in ids}
    errors: List[str] = []
    children = np.random.SeedSequence(spec.seed).spawn(spec.runs)
    for r in range(spec.runs):
        rng = np.random.Generator(np.random.PCG64(children[r]))
        ensemble = generate_ensemble(spec, rng)
        x0 = arithmetic_mean_init(ensemble)
        for solver in spec.solvers:
            try:
                res = solver.run(ensemble, x0)
            except Exception as exc:  # keep remaining runs alive
                errors.append(f"run {r} solver {solver.solver_id}: {exc}")
                res = None
            results[solver.solver_id].append(res)
    length = max((len(res.trace) for runs in results.values()
                  for res in runs if res is not None), default=0)
    mean_rows = np.full((length, len(ids)), np.nan)
    for col, ident in enumerate(ids):
        traces = [_padded([t.log_error for t in res.trace], length)
                  for res in results[ident] if res is not None]
        if traces:
            mean_rows[:, col] = np.mean(np.array(traces), axis=0)
    return ExperimentReport(spec=spec, solver_ids=ids,
                            mean_log_error=mean_rows, results=results,
                            errors=errors)


def report_to_csv(report: ExperimentReport) -> str:
    """CSV text: header ``iter,<id>,...``, 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iter"] + report.solver_ids)
    for k, row in enumerate(report.mean_log_error):
        writer.writerow([k] + [f"{v:.17g}" for v in row])
    return buf.getvalue()


def write_report(report: ExperimentReport, out_base: str) -> None:
    """Write ``<out_base>.csv`` and the spec sidecar ``<out_base>.json``."""
    with open(out_base + ".csv", "w") as fh:
        fh.write(report_to_csv(report))
    with open(out_base + ".json", "w") as fh:
        json.dump(report.spec.to_dict(), fh, indent=2)
        fh.write("\n")

"""Multistart projected gradient ascent for pairwise-angle energies.

Maximizes the energy of N uniformly weighted points on S^d under the
kernel lambda0(rho)**alpha at a fixed finite alpha.  Each start draws an
i.i.d. uniform configuration from its own spawned random stream, runs an
optional simulated-annealing warmup, then strict-improvement gradient
ascent with a backtracking line search on the sphere (step along the
tangent gradient, renormalize).  Runs are reproducible: results depend
only on (d, N, alpha, params), never on worker count or scheduling.
"""

from __future__ import annotations

import csv
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import repeat

import numpy as np

from . import geometry
from .errors import DomainError, StructureError
from .geometry import ALPHA_INFINITY, check_alpha
from .measures import LineConfig, WeightMode, conjectured_maximizer, energy, equivalent

__all__ = [
    "AlphaOneWarning",
    "DegeneratePairWarning",
    "OptRun",
    "OptimizerParams",
    "SweepRow",
    "alpha_sweep",
    "energy_gradient",
    "optimize",
    "resolve_workers",
    "write_optrun_csv",
    "write_sweep_csv",
]

#: Environment variable capping the optimizer's process count.
THREADS_ENV_VAR = "ANGLEOPT_THREADS"


class DegeneratePairWarning(UserWarning):
    """A pair sits exactly at rho in {0, pi} where the alpha = 1 energy has
    no derivative; its contribution to the gradient is taken as 0."""


class AlphaOneWarning(UserWarning):
    """alpha = 1 maximizers are not unique in general; equivalence verdicts
    against the even frame may legitimately be false."""


@dataclass(frozen=True)
class OptimizerParams:
    """Knobs for one multistart run.  All fields participate in seeding
    reproducibility via ``master_seed``."""

    n_starts: int = 20
    max_iters: int = 500
    step_init: float = 0.5
    step_decay: float = 0.5
    grad_tol: float = 1e-9
    anneal: bool = False
    anneal_temp_init: float = 0.05
    anneal_cooling: float = 0.95
    master_seed: int = 2024

    def __post_init__(self):
        if not isinstance(self.n_starts, int) or self.n_starts < 1:
            raise StructureError(f"n_starts must be a positive integer, got {self.n_starts!r}")
        if not isinstance(self.max_iters, int) or self.max_iters < 1:
            raise StructureError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if not self.step_init > 0:
            raise StructureError("step_init must be positive")
        if not 0 < self.step_decay < 1:
            raise StructureError("step_decay must lie in (0, 1)")
        if not 0 < self.grad_tol < 1:
            raise StructureError("grad_tol must lie in (0, 1)")
        if not self.anneal_temp_init > 0:
            raise StructureError("anneal_temp_init must be positive")
        if not 0 < self.anneal_cooling < 1:
            raise StructureError("anneal_cooling must lie in (0, 1)")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise StructureError("master_seed must be a nonnegative integer")

    def to_json_obj(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_obj(cls, obj) -> "OptimizerParams":
        if not isinstance(obj, dict):
            raise StructureError("optimizer params JSON must be an object")
        known = set(cls.__dataclass_fields__)
        unknown = set(obj) - known
        if unknown:
            raise StructureError(f"unknown optimizer params: {sorted(unknown)}")
        return cls(**obj)


@dataclass
class OptRun:
    """Everything one multistart run produced."""

    d: int
    n_points: int
    alpha: float
    params: OptimizerParams
    best_energy: float
    best_start: int
    per_start_energies: list[float]
    converged_flags: list[bool]
    best_config: LineConfig

    @property
    def converged_fraction(self) -> float:
        return sum(self.converged_flags) / len(self.converged_flags)


@dataclass(frozen=True)
class SweepRow:
    """One alpha of a sweep, compared against the even frame configuration."""

    alpha: float
    d: int
    n_points: int
    best_energy: float
    conjectured_energy: float
    gap: float
    equivalent: bool
    converged_fraction: float
    seed: int


def resolve_workers() -> int:
    """Worker count: ANGLEOPT_THREADS when set, else machine parallelism."""
    env = os.environ.get(THREADS_ENV_VAR)
    if env is not None:
        try:
            v = int(env)
        except ValueError:
            raise DomainError(f"{THREADS_ENV_VAR} must be an integer, got {env!r}") from None
        if v < 1:
            raise DomainError(f"{THREADS_ENV_VAR} must be >= 1, got {v}")
        return v
    return os.cpu_count() or 1


def _as_points_matrix(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        X = np.array(points, dtype=float)
    else:
        rows = []
        for p in points:
            rows.append(p.coords if isinstance(p, geometry.UnitVector) else np.asarray(p, float))
        X = np.vstack(rows)
    if X.ndim != 2 or X.shape[1] < 2:
        raise DomainError("points must form an (N, d+1) stack with d >= 1")
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    if np.any(norms < 1e-12):
        raise DomainError("zero vector in point stack")
    return X / norms


def _points_energy(X: np.ndarray, alpha: float) -> float:
    """Energy of uniform weights 1/N on the rows of X."""
    n = X.shape[0]
    K = geometry.kernel_matrix(X, alpha=alpha)
    return float(K.sum()) / (2.0 * n * n)


def energy_gradient(points, alpha) -> np.ndarray:
    """Riemannian gradient of the uniform-weight energy at each point.

    Returns an (N, d+1) stack of tangent vectors (row i is orthogonal to
    point i).  Pairs lying exactly at rho in {0, pi} contribute nothing;
    at the kink rho = pi/2 the slope is taken one-sidedly from the acute
    side (-2/pi), matching the descent direction of min(t, pi - t) there.
    """
    a = check_alpha(alpha, finite=True)
    X = _as_points_matrix(points)
    n = X.shape[0]
    if n == 1:
        return np.zeros_like(X)
    G = np.clip(X @ X.T, -1.0, 1.0)
    snapped = np.abs(G) >= 1.0 - geometry._PARALLEL_SNAP
    Gs = np.where(snapped, np.sign(G), G)
    rho = np.arccos(Gs)
    lam = 2.0 * np.arccos(np.abs(Gs)) / math.pi
    slope = np.where(rho < math.pi / 2.0, 2.0 / math.pi, -2.0 / math.pi)
    sin_rho = np.sqrt(np.maximum(0.0, 1.0 - Gs * Gs))
    off_degenerate = snapped & ~np.eye(n, dtype=bool)
    if a == 1.0 and np.any(off_degenerate):
        warnings.warn(
            "pair at rho in {0, pi} with alpha = 1: energy has no derivative "
            "there, contribution treated as 0",
            DegeneratePairWarning,
            stacklevel=2,
        )
    dead = snapped | np.eye(n, dtype=bool)
    # d/drho lam^a = a lam^(a-1) slope; ambient d rho/d x_i = -x_j / sin rho.
    with np.errstate(divide="ignore", invalid="ignore"):
        coeff = (a / (n * n)) * np.power(lam, a - 1.0) * slope / sin_rho
    coeff[dead] = 0.0
    ambient = -(coeff @ X)
    radial = np.einsum("ij,ij->i", ambient, X)
    return ambient - radial[:, None] * X


def _ascent(X: np.ndarray, alpha: float, params: OptimizerParams, record_history: bool = False):
    """Strict-improvement gradient ascent with backtracking line search.

    Stops when no step down to grad_tol * step_init improves the energy
    (converged) or when max_iters is exhausted (not converged).
    """
    E = _points_energy(X, alpha)
    floor = params.grad_tol * params.step_init
    history = [E] if record_history else None
    converged = False
    for _ in range(params.max_iters):
        g = energy_gradient(X, alpha)
        step = params.step_init
        improved = False
        while step >= floor:
            cand = X + step * g
            cand /= np.linalg.norm(cand, axis=1, keepdims=True)
            Ec = _points_energy(cand, alpha)
            if Ec > E:
                X, E = cand, Ec
                if history is not None:
                    history.append(E)
                improved = True
                break
            step *= params.step_decay
        if not improved:
            converged = True
            break
    return X, E, converged, history


def _anneal_phase(X: np.ndarray, alpha: float, params: OptimizerParams, rng) -> np.ndarray:
    """Single-point Metropolis warmup with geometric cooling."""
    E = _points_energy(X, alpha)
    temp = params.anneal_temp_init
    n, m = X.shape
    for _ in range(params.max_iters):
        i = int(rng.integers(n))
        v = X[i] + math.sqrt(temp) * rng.standard_normal(m)
        norm = float(np.linalg.norm(v))
        accept_draw = float(rng.random())  # drawn unconditionally: keeps the
        # stream aligned whether or not the proposal is degenerate/accepted
        if norm >= 1e-12:
            cand = X.copy()
            cand[i] = v / norm
            Ec = _points_energy(cand, alpha)
            if Ec >= E or accept_draw < math.exp((Ec - E) / temp):
                X, E = cand, Ec
        temp = max(temp * params.anneal_cooling, 1e-12)
    return X


def _run_start(d: int, n_points: int, alpha: float, params: OptimizerParams, start_index: int):
    """One start, seeded by (master_seed, start_index) only."""
    ss = np.random.SeedSequence(params.master_seed, spawn_key=(start_index,))
    rng = np.random.default_rng(ss)
    X = rng.standard_normal((n_points, d + 1))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    if params.anneal:
        X = _anneal_phase(X, alpha, params, rng)
    X, E, converged, _ = _ascent(X, alpha, params)
    return start_index, float(E), bool(converged), X


def optimize(d: int, n_points: int, alpha, params: OptimizerParams | None = None,
             workers: int = 1) -> OptRun:
    """Multistart maximization of the uniform-weight energy on S^d.

    Deterministic in (d, n_points, alpha, params): identical inputs give
    bitwise identical results for any worker count.  The reported best is
    the maximum over starts, ties resolved to the lowest start index, and
    its configuration is folded to canonical antipodal representatives.
    """
    a = check_alpha(alpha, finite=True)
    if not (isinstance(d, int) and isinstance(n_points, int)):
        raise DomainError("d and n_points must be integers")
    if d < 1 or n_points < 1:
        raise DomainError(f"need d >= 1 and n_points >= 1, got d={d}, n_points={n_points}")
    if a == 1.0:
        warnings.warn(
            "alpha = 1: the maximizer is not unique in general; equivalence "
            "verdicts are informational only",
            AlphaOneWarning,
            stacklevel=2,
        )
    if params is None:
        params = OptimizerParams()
    workers = max(int(workers), 1)
    indices = list(range(params.n_starts))
    if workers == 1 or params.n_starts == 1:
        results = [_run_start(d, n_points, a, params, i) for i in indices]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, params.n_starts)) as ex:
            results = list(
                ex.map(_run_start, repeat(d), repeat(n_points), repeat(a), repeat(params), indices)
            )
    results.sort(key=lambda r: r[0])
    energies = [r[1] for r in results]
    flags = [r[2] for r in results]
    best_start = energies.index(max(energies))
    X_best = results[best_start][3]
    share = Fraction(1, n_points)
    best_config = LineConfig(
        [(row, share) for row in X_best], WeightMode.PROBABILITY
    ).folded()
    return OptRun(
        d=d,
        n_points=n_points,
        alpha=a,
        params=params,
        best_energy=energies[best_start],
        best_start=best_start,
        per_start_energies=energies,
        converged_flags=flags,
        best_config=best_config,
    )


def alpha_sweep(d: int, n_points: int, alphas, params: OptimizerParams | None = None,
                workers: int = 1, equiv_tol: float = 1e-4) -> list[SweepRow]:
    """Run ``optimize`` at each alpha and compare against the even frame.

    ``gap = conjectured - best``; a gap below -1e-6 would be a numerical
    counterexample to the even frame being maximal.  ``alphas`` must be
    finite, >= 1, and sorted ascending.
    """
    if params is None:
        params = OptimizerParams()
    alist = [check_alpha(a, finite=True) for a in alphas]
    if not alist:
        raise DomainError("need at least one alpha")
    if any(b < a for a, b in zip(alist, alist[1:])):
        raise DomainError("alphas must be sorted ascending")
    conj = conjectured_maximizer(d, n_points).to_probability()
    conj_energy = float(energy(conj, ALPHA_INFINITY))
    rows = []
    for a in alist:
        run = optimize(d, n_points, a, params=params, workers=workers)
        verdict = equivalent(run.best_config, conj, tol=equiv_tol)
        rows.append(
            SweepRow(
                alpha=a,
                d=d,
                n_points=n_points,
                best_energy=run.best_energy,
                conjectured_energy=conj_energy,
                gap=conj_energy - run.best_energy,
                equivalent=verdict,
                converged_fraction=run.converged_fraction,
                seed=params.master_seed,
            )
        )
    return rows


def _fmt(v: float) -> str:
    # repr is the shortest exact round-trip form, identical across runs.
    return repr(float(v))


def write_sweep_csv(rows: list[SweepRow], path, comment: str | None = None) -> None:
    """Sweep rows as CSV: alpha,d,N,best_energy,conjectured_energy,gap,
    equivalent,converged_fraction,seed.  Optional leading '# ...' line."""
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "alpha",
                "d",
                "N",
                "best_energy",
                "conjectured_energy",
                "gap",
                "equivalent",
                "converged_fraction",
                "seed",
            ]
        )
        for r in rows:
            writer.writerow(
                [
                    _fmt(r.alpha),
                    r.d,
                    r.n_points,
                    _fmt(r.best_energy),
                    _fmt(r.conjectured_energy),
                    _fmt(r.gap),
                    "true" if r.equivalent else "false",
                    _fmt(r.converged_fraction),
                    r.seed,
                ]
            )


def write_optrun_csv(run: OptRun, path, comment: str | None = None) -> None:
    """Per-start rows of one run: d,N,alpha,start,energy,converged,seed."""
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["d", "N", "alpha", "start", "energy", "converged", "seed"])
        for i, (e, flag) in enumerate(zip(run.per_start_energies, run.converged_flags)):
            writer.writerow(
                [
                    run.d,
                    run.n_points,
                    _fmt(run.alpha),
                    i,
                    _fmt(e),
                    "true" if flag else "false",
                    run.params.master_seed,
                ]
            )

"""Maximisation of the outcome mutual information over local Gaussian measurements.

The search is deterministic: an exhaustive coarse grid over ``(theta_i, t_i)``
followed by Nelder-Mead refinement of the best few grid points. The
refinement runs on ``(theta_i, u_i)`` with ``t_i = sin(u_i)^2`` so it is
unconstrained; ``t = 0`` and ``t = 1`` are stationary points in ``u``, which
keeps homodyne optima exactly reachable.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy.optimize import minimize

from .core import GaussianStateError, as_covariance, check_physical
from .measurement import MeasurementPlan, mi_batch, outcome_covariance_batch, plan_mi

MAX_MODES = 8
REGIME_TOL = 1e-6
# snapping to t in {0, 1/2, 1} and theta to 0 is accepted only if MI does not drop
_SNAP_WINDOW = 1e-4
_SNAP_SLACK = 1e-12
_TIE_TOL = 1e-10
_GRID_CHUNK = 20_000


class Regime(enum.Enum):
    HOMODYNE = "homodyne"
    HETERODYNE = "heterodyne"
    INTERIOR = "interior"


class OptimizationBudgetError(RuntimeError):
    """The evaluation budget is too small for the coarse grid."""


@dataclass(frozen=True)
class SearchOptions:
    """Knobs of the coarse-grid + Nelder-Mead search.

    theta_points, t_points:
        Grid densities per mode. Phases are ``k pi / theta_points`` and
        transmissivities ``linspace(0, 1, t_points)``.
    max_evaluations:
        Total objective evaluations allowed (grid plus refinement).
    refine_starts:
        Number of distinct grid maxima handed to Nelder-Mead.
    fatol, xatol:
        Nelder-Mead absolute tolerances on MI (bits) and on the parameters.
    """

    theta_points: int = 8
    t_points: int = 5
    max_evaluations: int = 2_000_000
    refine_starts: int = 6
    fatol: float = 1e-10
    xatol: float = 1e-8
    simplex_step: float = 0.15

    def __post_init__(self):
        if self.theta_points < 1 or self.t_points < 2:
            raise ValueError("need theta_points >= 1 and t_points >= 2")
        if self.refine_starts < 1:
            raise ValueError("refine_starts must be positive")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "SearchOptions":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown search options: {sorted(unknown)}")
        return cls(**obj)


@dataclass(frozen=True)
class OptimizationResult:
    j_g: float
    plan: MeasurementPlan
    regime: Regime
    evaluations: int
    converged: bool


def classify_regime(ts, tol: float = REGIME_TOL) -> Regime:
    ts = np.asarray(ts)
    if np.all(np.minimum(np.abs(ts), np.abs(ts - 1.0)) <= tol):
        return Regime.HOMODYNE
    if np.all(np.abs(ts - 0.5) <= tol):
        return Regime.HETERODYNE
    return Regime.INTERIOR


class _Objective:
    """MI as a function of (theta, u) with an evaluation counter."""

    def __init__(self, V: np.ndarray, expand=None):
        self.V = V
        self.expand = expand or (lambda x: x)
        self.count = 0

    def params(self, x):
        x = self.expand(np.asarray(x, dtype=float))
        k = x.size // 2
        return x[:k], np.sin(x[k:]) ** 2

    def mi(self, thetas, ts) -> float:
        self.count += 1
        value = float(mi_batch(outcome_covariance_batch(self.V, thetas, ts)))
        return value if np.isfinite(value) else -np.inf

    def __call__(self, x) -> float:
        return -self.mi(*self.params(x))


def _grid(n: int, options: SearchOptions):
    thetas = np.arange(options.theta_points) * np.pi / options.theta_points
    ts = np.linspace(0.0, 1.0, options.t_points)
    single = np.array(list(itertools.product(thetas, ts)))
    return single, len(single) ** n


def _evaluate_grid(V: np.ndarray, n: int, single: np.ndarray, symmetric: bool):
    """MI on the full product grid (or the diagonal of it when symmetric)."""
    if symmetric:
        th = np.repeat(single[:, :1], n, axis=1)
        tt = np.repeat(single[:, 1:], n, axis=1)
        return th, tt, mi_batch(outcome_covariance_batch(V, th, tt))
    combos = np.array(list(itertools.product(range(len(single)), repeat=n)))
    th = single[combos, 0]
    tt = single[combos, 1]
    values = np.empty(len(combos))
    for lo in range(0, len(combos), _GRID_CHUNK):
        hi = lo + _GRID_CHUNK
        values[lo:hi] = mi_batch(outcome_covariance_batch(V, th[lo:hi], tt[lo:hi]))
    return th, tt, values


def _pick_starts(values: np.ndarray, k: int) -> list[int]:
    """Indices of the ``k`` best grid points with pairwise distinct MI values.

    Grid points related by a symmetry of the state share their MI; one
    representative each is enough.
    """
    order = np.argsort(-np.nan_to_num(values, nan=-np.inf), kind="stable")
    picked, seen = [], []
    for i in order:
        if not np.isfinite(values[i]):
            break
        if any(abs(values[i] - s) <= 1e-9 for s in seen):
            continue
        picked.append(int(i))
        seen.append(values[i])
        if len(picked) == k:
            break
    return picked


def _snap(obj: _Objective, thetas: np.ndarray, ts: np.ndarray):
    """Move parameters onto exact homodyne/heterodyne/zero-phase values when free."""
    best = obj.mi(thetas, ts)
    thetas, ts = thetas.copy(), ts.copy()
    for arr, targets in ((ts, (0.0, 0.5, 1.0)), (thetas, (0.0, np.pi))):
        for i in range(arr.size):
            for target in targets:
                if abs(arr[i] - target) <= _SNAP_WINDOW and arr[i] != target:
                    trial = arr.copy()
                    trial[i] = target % np.pi if arr is thetas else target
                    cand = (trial, ts) if arr is thetas else (thetas, trial)
                    value = obj.mi(*cand)
                    if value >= best - _SNAP_SLACK:
                        arr[i] = trial[i]
                        best = max(best, value)
    return thetas, ts


def _tie_key(candidate):
    """Prefer larger total transmissivity, then phases closest to zero."""
    plan = candidate[1]
    phase = np.minimum(plan.thetas, np.pi - plan.thetas)
    return (-round(float(np.sum(plan.ts)), 9), round(float(np.sum(phase)), 9))


def _search(V, options: SearchOptions | None, symmetric: bool) -> OptimizationResult:
    options = options or SearchOptions()
    V = check_physical(V)
    n = V.n
    if n > MAX_MODES:
        raise GaussianStateError(f"at most {MAX_MODES} modes are supported, got {n}")
    single, full_size = _grid(n, options)
    grid_size = len(single) if symmetric else full_size
    if grid_size > options.max_evaluations:
        raise OptimizationBudgetError(
            f"coarse grid needs {grid_size} evaluations, budget is {options.max_evaluations}"
        )
    th, tt, values = _evaluate_grid(V.matrix, n, single, symmetric)
    evaluations = grid_size

    if symmetric:
        expand = lambda x: np.concatenate([np.repeat(x[:1], n), np.repeat(x[1:], n)])  # noqa: E731
    else:
        expand = None
    obj = _Objective(V.matrix, expand)
    dim = 2 if symmetric else 2 * n

    candidates = []
    for idx in _pick_starts(values, options.refine_starts):
        if symmetric:
            x0 = np.array([th[idx, 0], np.arcsin(np.sqrt(tt[idx, 0]))])
        else:
            x0 = np.concatenate([th[idx], np.arcsin(np.sqrt(tt[idx]))])
        budget = options.max_evaluations - evaluations - obj.count
        if budget <= 0:
            break
        simplex = np.vstack([x0, x0 + options.simplex_step * np.eye(dim)])
        res = minimize(
            obj,
            x0,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": options.xatol,
                "fatol": options.fatol,
                "maxfev": budget,
                "adaptive": dim > 2,
            },
        )
        x = res.x if -res.fun >= values[idx] else x0
        thetas, ts = obj.params(x)
        thetas, ts = _snap(obj, np.mod(thetas, np.pi), np.clip(ts, 0.0, 1.0))
        plan = MeasurementPlan.from_arrays(thetas, ts)
        candidates.append((plan_mi(V, plan), plan, bool(res.success)))

    evaluations += obj.count
    top = max(c[0] for c in candidates)
    # exact grid plans tied with the refined optimum give canonical phases
    tied = np.flatnonzero(values >= top - _TIE_TOL)
    if tied.size:
        phase = np.minimum(th[tied], np.pi - th[tied]).sum(axis=1)
        idx = tied[np.lexsort((phase, -tt[tied].sum(axis=1)))[0]]
        plan = MeasurementPlan.from_arrays(th[idx], tt[idx])
        candidates.append((plan_mi(V, plan), plan, True))
    top = max(c[0] for c in candidates)
    ties = [c for c in candidates if c[0] >= top - _TIE_TOL]
    j_g, plan, converged = min(ties, key=_tie_key)
    return OptimizationResult(
        j_g=j_g,
        plan=plan,
        regime=classify_regime(plan.ts),
        evaluations=evaluations,
        converged=converged,
    )


def maximize_mi(V, options: SearchOptions | None = None) -> OptimizationResult:
    """Gaussian multipartite classical correlations of ``V`` and the best plan.

    Searches all ``2n`` measurement parameters. Among plans whose MI agrees
    to 1e-10 the one with the largest total transmissivity is reported, so
    symmetric states give ``t = (1, ..., 1)`` rather than ``(0, ..., 0)``;
    remaining ties go to the smallest phases.
    """
    return _search(V, options, symmetric=False)


def is_permutation_symmetric(V, tol: float = 1e-9) -> bool:
    V = as_covariance(V)
    m = V.matrix
    for i, j in itertools.combinations(range(V.n), 2):
        perm = list(range(V.n))
        perm[i], perm[j] = j, i
        idx = [q for k in perm for q in (2 * k, 2 * k + 1)]
        if np.max(np.abs(m[np.ix_(idx, idx)] - m)) > tol:
            return False
    return True


def maximize_mi_symmetric(V, options: SearchOptions | None = None) -> OptimizationResult:
    """As :func:`maximize_mi` with one common ``(theta, t)`` for all modes.

    Only valid for states invariant under mode permutations.
    """
    if not is_permutation_symmetric(V):
        raise GaussianStateError("state is not invariant under mode permutations")
    return _search(V, options, symmetric=True)

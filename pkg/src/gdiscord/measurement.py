"""Local Gaussian measurements and the classical mutual information of their outcomes.

Each mode ``i`` is rotated by ``theta_i``, mixed with vacuum on a beam
splitter of transmissivity ``t_i``, and both outputs are detected: the
transmitted port in Q, the reflected port in P. The outcome pair is

    Q_out = sqrt(t) (Q cos(theta) + P sin(theta)) + vacuum noise of variance 1 - t
    P_out = sqrt(1 - t) (-Q sin(theta) + P cos(theta)) + vacuum noise of variance t

so ``t = 1`` is homodyne detection of the rotated Q quadrature, ``t = 0``
homodyne of the rotated P quadrature and ``t = 1/2`` heterodyne detection.
Swapping the output ports is the same as ``t -> 1 - t``. The rotation sign
is a convention; every state built in this package is symmetric under
``theta -> -theta`` so either choice gives the same correlations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import GaussianStateError, as_covariance, condition

_HALF_LOG2_2PIE = 0.5 * np.log2(2 * np.pi * np.e)


@dataclass(frozen=True)
class MeasurementPlan:
    """Per-mode measurement settings ``(theta_i, t_i)``.

    Phases are stored modulo pi since the outcome statistics are pi-periodic.
    """

    params: tuple[tuple[float, float], ...]

    def __post_init__(self):
        cleaned = []
        for pair in self.params:
            theta, t = (float(x) for x in pair)
            if not (np.isfinite(theta) and np.isfinite(t)):
                raise GaussianStateError("measurement parameters must be finite")
            if not 0.0 <= t <= 1.0:
                raise GaussianStateError(f"transmissivity {t} outside [0, 1]")
            theta = float(np.mod(theta, np.pi))
            if np.pi - theta < 1e-12:
                theta = 0.0
            cleaned.append((theta, t))
        if not cleaned:
            raise GaussianStateError("measurement plan is empty")
        object.__setattr__(self, "params", tuple(cleaned))

    @classmethod
    def from_arrays(cls, thetas, ts) -> "MeasurementPlan":
        return cls(tuple(zip(np.atleast_1d(thetas), np.atleast_1d(ts))))

    @classmethod
    def homodyne(cls, n: int, theta: float = 0.0) -> "MeasurementPlan":
        return cls(((theta, 1.0),) * n)

    @classmethod
    def heterodyne(cls, n: int) -> "MeasurementPlan":
        return cls(((0.0, 0.5),) * n)

    @property
    def n(self) -> int:
        return len(self.params)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([p[0] for p in self.params])

    @property
    def ts(self) -> np.ndarray:
        return np.array([p[1] for p in self.params])

    def to_json(self) -> dict:
        return {"params": [{"theta": th, "t": t} for th, t in self.params]}

    @classmethod
    def from_json(cls, obj: dict) -> "MeasurementPlan":
        try:
            return cls(tuple((p["theta"], p["t"]) for p in obj["params"]))
        except (KeyError, TypeError) as exc:
            raise GaussianStateError(
                'plan JSON needs {"params": [{"theta": ..., "t": ...}, ...]}'
            ) from exc


def measurement_maps(thetas, ts):
    """Batched linear maps and added vacuum noise of local measurements.

    ``thetas`` and ``ts`` have shape ``(..., n)``. Returns ``(M, N)`` with
    ``M`` of shape ``(..., 2n, 2n)`` and ``N`` the diagonal of the injected
    noise, shape ``(..., 2n)``.
    """
    thetas = np.asarray(thetas, dtype=float)
    ts = np.asarray(ts, dtype=float)
    c, s = np.cos(thetas), np.sin(thetas)
    a, b = np.sqrt(ts), np.sqrt(1.0 - ts)
    n = thetas.shape[-1]
    M = np.zeros(thetas.shape[:-1] + (2 * n, 2 * n))
    idx = np.arange(n)
    M[..., 2 * idx, 2 * idx] = a * c
    M[..., 2 * idx, 2 * idx + 1] = a * s
    M[..., 2 * idx + 1, 2 * idx] = -b * s
    M[..., 2 * idx + 1, 2 * idx + 1] = b * c
    N = np.zeros(thetas.shape[:-1] + (2 * n,))
    N[..., 0::2] = 1.0 - ts
    N[..., 1::2] = ts
    return M, N


def outcome_covariance_batch(V: np.ndarray, thetas, ts) -> np.ndarray:
    """``M V M^T + N`` for a batch of plans given as arrays."""
    M, N = measurement_maps(thetas, ts)
    sigma = M @ V @ np.swapaxes(M, -1, -2)
    i = np.arange(sigma.shape[-1])
    sigma[..., i, i] += N
    return sigma


def outcome_covariance(V, plan: MeasurementPlan) -> np.ndarray:
    """Covariance of the ``2n`` classical outcomes ``(Q_out1, P_out1, ...)``."""
    V = as_covariance(V)
    if plan.n != V.n:
        raise GaussianStateError(f"plan has {plan.n} modes but the state has {V.n}")
    sigma = outcome_covariance_batch(V.matrix, plan.thetas, plan.ts)
    return 0.5 * (sigma + sigma.T)


def differential_entropy(variance: float) -> float:
    """Differential entropy in bits of a normal variable, ``1/2 log2(2 pi e var)``."""
    if not variance > 0:
        raise GaussianStateError(f"variance must be positive, got {variance}")
    return float(_HALF_LOG2_2PIE + 0.5 * np.log2(variance))


def mi_batch(sigma: np.ndarray) -> np.ndarray:
    """Multipartite MI (bits) of a batch of outcome covariances.

    Uses ``1/2 log2(prod_i det S_ii / det S)`` with ``S_ii`` the per-mode
    2x2 blocks.
    """
    sign, logdet = np.linalg.slogdet(sigma)
    n = sigma.shape[-1] // 2
    blocks = 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        for i in range(n):
            q, p = 2 * i, 2 * i + 1
            blocks = blocks + np.log(
                sigma[..., q, q] * sigma[..., p, p] - sigma[..., q, p] * sigma[..., p, q]
            )
    out = 0.5 * (blocks - logdet) / np.log(2.0)
    return np.where(sign > 0, out, np.nan)


def classical_mi(sigma) -> float:
    """Mutual information in bits between the per-mode outcome pairs."""
    S = np.asarray(sigma, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        raise GaussianStateError(f"bad outcome covariance shape {S.shape}")
    try:
        np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise GaussianStateError("outcome covariance is not positive definite") from exc
    return float(mi_batch(S))


def conditional_entropy_terms(sigma) -> list[tuple[float, float]]:
    """Per-mode ``(H(A_i), H(A_i | A_{i-1} ... A_1))`` in bits.

    Each entropy is split into its Q_out and P_out-given-Q_out parts, each of
    which is a one-dimensional differential entropy of a conditional
    variance.
    """
    S = np.asarray(sigma, dtype=float)
    n = S.shape[0] // 2
    terms = []
    for i in range(n):
        q, p = 2 * i, 2 * i + 1
        past = list(range(2 * i))
        h = differential_entropy(condition(S, [q], [])[0, 0]) + differential_entropy(
            condition(S, [p], [q])[0, 0]
        )
        h_cond = differential_entropy(condition(S, [q], past)[0, 0]) + differential_entropy(
            condition(S, [p], [q] + past)[0, 0]
        )
        terms.append((h, h_cond))
    return terms


def classical_mi_chain(sigma) -> float:
    """Multipartite MI as the telescoping sum ``sum_i H(A_i) - H(A_i | A_<i)``.

    Independent of :func:`classical_mi`; the two must agree.
    """
    S = np.asarray(sigma, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        raise GaussianStateError(f"bad outcome covariance shape {S.shape}")
    return float(sum(h - hc for h, hc in conditional_entropy_terms(S)[1:]))


def plan_mi(V, plan: MeasurementPlan) -> float:
    return classical_mi(outcome_covariance(V, plan))

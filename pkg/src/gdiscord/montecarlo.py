"""Monte-Carlo cross-check of the analytic outcome statistics.

Outcomes are drawn from the zero-mean normal law with the analytic outcome
covariance, and the MI is re-estimated with the Gaussian plug-in estimator.
Sampling uses numpy's PCG64 generator; the seed is split into one stream per
chunk of ``CHUNK`` draws, so a batch depends only on ``(seed, m)``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import GaussianStateError
from .measurement import MeasurementPlan, classical_mi, outcome_covariance

RNG_ALGORITHM = "PCG64"
CHUNK = 100_000
JACKKNIFE_BLOCKS = 20


@dataclass(frozen=True)
class SampleBatch:
    data: np.ndarray
    seed: int
    algorithm: str = RNG_ALGORITHM

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1] // 2


@dataclass(frozen=True)
class MIEstimate:
    value: float
    stderr: float
    m: int


def sample_outcomes(
    V, plan: MeasurementPlan, m: int, seed: int = 0, jobs: int = 1
) -> SampleBatch:
    """Draw ``m`` outcome vectors of the measurement ``plan`` on ``V``."""
    if m < 2:
        raise GaussianStateError("need at least two samples")
    sigma = outcome_covariance(V, plan)
    try:
        L = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise GaussianStateError("outcome covariance is not positive definite") from exc
    sizes = [CHUNK] * (m // CHUNK) + ([m % CHUNK] if m % CHUNK else [])
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    dim = sigma.shape[0]

    def draw(k):
        rng = np.random.Generator(np.random.PCG64(streams[k]))
        return rng.standard_normal((sizes[k], dim)) @ L.T

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(draw, range(len(sizes))))
    else:
        parts = [draw(k) for k in range(len(sizes))]
    return SampleBatch(np.concatenate(parts), int(seed))


def _covariance_from_sums(count, s1, s2):
    mean = s1 / count
    return (s2 - count * np.outer(mean, mean)) / (count - 1)


def estimate_mi(batch: SampleBatch, blocks: int = JACKKNIFE_BLOCKS) -> MIEstimate:
    """Plug-in MI estimate with a delete-one-block jackknife standard error."""
    x = batch.data
    m, dim = x.shape
    if m < 10 * dim * dim:
        raise GaussianStateError(f"need at least {10 * dim * dim} samples, got {m}")
    edges = np.linspace(0, m, blocks + 1).astype(int)
    counts = np.diff(edges)
    s1 = np.array([x[a:b].sum(axis=0) for a, b in zip(edges[:-1], edges[1:])])
    s2 = np.array([x[a:b].T @ x[a:b] for a, b in zip(edges[:-1], edges[1:])])
    t1, t2 = s1.sum(axis=0), s2.sum(axis=0)
    try:
        full = classical_mi(_covariance_from_sums(m, t1, t2))
        loo = np.array(
            [
                classical_mi(_covariance_from_sums(m - counts[b], t1 - s1[b], t2 - s2[b]))
                for b in range(blocks)
            ]
        )
    except GaussianStateError as exc:
        raise GaussianStateError("empirical covariance is degenerate") from exc
    se = np.sqrt((blocks - 1) / blocks * np.sum((loo - loo.mean()) ** 2))
    return MIEstimate(float(full), float(se), m)


def validate(V, plan: MeasurementPlan, m: int, seed: int = 0, n_sigma: float = 5.0) -> dict:
    """Analytic MI against its Monte-Carlo estimate, as a JSON-ready summary."""
    analytic = classical_mi(outcome_covariance(V, plan))
    est = estimate_mi(sample_outcomes(V, plan, m, seed))
    z = abs(est.value - analytic) / est.stderr if est.stderr > 0 else float("inf")
    return {
        "analytic_mi": analytic,
        "estimated_mi": est.value,
        "stderr": est.stderr,
        "z": z,
        "n_sigma": n_sigma,
        "pass": bool(z <= n_sigma),
        "m": m,
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "plan": plan.to_json(),
    }

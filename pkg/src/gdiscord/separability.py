"""Entanglement tests for two- and three-mode Gaussian states.

Three-mode verdicts are PPT tests across the three ``1|23`` bipartitions.
Each test is exact for its bipartition, but a state passing all of them can
in principle still be bound entangled; no full three-way separability
algorithm is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import GaussianStateError, as_covariance, make_covariance, symplectic_eigenvalues

BOUNDARY_TOL = 1e-9
_FORM_TOL = 1e-9


@dataclass(frozen=True)
class SeparabilityVerdict:
    """Outcome of an entanglement test.

    ``witness`` is a signed margin, negative for entangled states. When
    ``|witness| <= 1e-9`` the state sits on the boundary of the test: it is
    reported with ``boundary=True`` and ``entangled=False``.
    """

    entangled: bool
    method: str
    witness: float
    boundary: bool = False

    @classmethod
    def from_witness(cls, witness: float, method: str) -> "SeparabilityVerdict":
        witness = float(witness)
        if abs(witness) <= BOUNDARY_TOL:
            return cls(False, method, witness, boundary=True)
        return cls(witness < 0, method, witness)

    @property
    def label(self):
        return "boundary" if self.boundary else self.entangled

    def to_json(self) -> dict:
        return {"entangled": self.label, "method": self.method, "witness": self.witness}


def is_standard_form(V, tol: float = _FORM_TOL) -> bool:
    """Two-mode state with no Q-P correlations, Q-correlated and P-anticorrelated."""
    V = as_covariance(V)
    if V.n != 2:
        return False
    m = V.matrix
    qp = [m[0, 1], m[2, 3], m[0, 3], m[1, 2]]
    return max(abs(x) for x in qp) <= tol and m[0, 2] >= -tol and m[1, 3] <= tol


def duan_criterion(V) -> SeparabilityVerdict:
    """Duan's sum-of-variances test for standard-form two-mode states.

    The witness is ``Var((Q1 - Q2)/sqrt2) + Var((P1 + P2)/sqrt2) - 2``.
    For symmetric states it is necessary and sufficient.
    """
    V = as_covariance(V)
    if not is_standard_form(V):
        raise GaussianStateError(
            "Duan test needs a two-mode state with diagonal blocks, "
            "Q-correlation >= 0 >= P-correlation"
        )
    m = V.matrix
    var_q = 0.5 * (m[0, 0] + m[2, 2]) - m[0, 2]
    var_p = 0.5 * (m[1, 1] + m[3, 3]) + m[1, 3]
    return SeparabilityVerdict.from_witness(var_q + var_p - 2.0, "duan")


def partial_transpose(V, side: Iterable[int]):
    """Flip the sign of the P quadratures of the modes in ``side``."""
    V = as_covariance(V)
    flip = np.ones(2 * V.n)
    for k in side:
        flip[2 * k + 1] = -1.0
    return make_covariance(V.n, flip[:, None] * V.matrix * flip[None, :])


def _side(n: int, partition) -> list[int]:
    side = sorted({int(k) for k in partition})
    if any(not 0 <= k < n for k in side):
        raise GaussianStateError(f"partition {partition!r} has modes outside 0..{n - 1}")
    if not side or len(side) == n:
        raise GaussianStateError("partition must split the modes into two nonempty groups")
    return side


def ppt_criterion(V, partition: Iterable[int]) -> SeparabilityVerdict:
    """Positivity of the partial transpose across ``partition | rest``.

    ``partition`` lists the modes (0-based) on one side. The witness is the
    smallest symplectic eigenvalue of the partially transposed covariance
    minus 1. Exact for ``1 x N``-mode bipartitions.
    """
    V = as_covariance(V)
    side = _side(V.n, partition)
    nu = symplectic_eigenvalues(partial_transpose(V, side)).min
    return SeparabilityVerdict.from_witness(nu - 1.0, "ppt")


def ppt_single_mode_cuts(V) -> list[SeparabilityVerdict]:
    V = as_covariance(V)
    return [ppt_criterion(V, [k]) for k in range(V.n)]


def separability(V) -> SeparabilityVerdict:
    """Entanglement verdict used in reports and sweeps.

    Two-mode states in standard form use Duan's test. Other states use the
    PPT test across every single-mode cut; the combined witness is the most
    negative one.
    """
    V = as_covariance(V)
    if V.n < 2:
        raise GaussianStateError("separability needs at least two modes")
    if V.n == 2 and is_standard_form(V):
        return duan_criterion(V)
    cuts = ppt_single_mode_cuts(V) if V.n > 2 else [ppt_criterion(V, [0])]
    return SeparabilityVerdict.from_witness(min(c.witness for c in cuts), "ppt")

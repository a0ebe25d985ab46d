"""Covariance matrices of zero-mean Gaussian states.

Conventions used throughout the package:

* quadratures are ordered ``(Q1, P1, Q2, P2, ..., Qn, Pn)``;
* the symplectic form is ``Omega = diag([[0, 1], [-1, 0]], ...)``;
* the vacuum has unit quadrature variance, so the vacuum covariance is the
  identity and a state is physical iff all its symplectic eigenvalues are
  at least 1;
* entropies are in bits.

The unit-vacuum normalisation is inferred from the two-mode squeezed vacuum
reducing to the identity at zero squeezing. Every threshold in the package
(Duan witness, homodyne-optimality inequality, PPT test) is written in it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SYMMETRY_TOL = 1e-9
PHYSICAL_TOL = 1e-9
_PURE_TOL = 1e-12
_LOG_FLOOR = 1e-300


class GaussianStateError(ValueError):
    """Raised for malformed covariance matrices or invalid index sets."""


class UnphysicalStateError(GaussianStateError):
    """Raised when a covariance matrix violates the uncertainty principle."""


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Immutable ``2n x 2n`` quadrature covariance matrix.

    Use :func:`make_covariance` to build one; it validates the shape and
    symmetrises the entries.
    """

    n: int
    matrix: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"CovarianceMatrix(n={self.n}, matrix={self.matrix.tolist()!r})"

    def to_json(self) -> dict:
        return {"n": self.n, "matrix": self.matrix.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "CovarianceMatrix":
        try:
            n, rows = obj["n"], obj["matrix"]
        except (KeyError, TypeError) as exc:
            raise GaussianStateError(
                'covariance JSON needs keys "n" and "matrix"'
            ) from exc
        return make_covariance(n, rows)


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues, one per mode, sorted in descending order."""

    values: tuple[float, ...]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def min(self) -> float:
        return self.values[-1]

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        return self.values[-1] >= 1.0 - tol

    def is_pure(self, tol: float = PHYSICAL_TOL) -> bool:
        return all(abs(v - 1.0) <= tol for v in self.values)


def make_covariance(n: int, entries) -> CovarianceMatrix:
    """Build a :class:`CovarianceMatrix` for ``n`` modes.

    The matrix must be ``2n x 2n`` and symmetric to within 1e-9; it is then
    symmetrised exactly. Physicality is *not* checked here.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise GaussianStateError(f"mode count must be a positive integer, got {n!r}")
    n = int(n)
    try:
        m = np.array(entries, dtype=float)
    except (TypeError, ValueError) as exc:
        raise GaussianStateError("covariance entries must be real numbers") from exc
    if m.shape != (2 * n, 2 * n):
        raise GaussianStateError(
            f"expected a {2 * n}x{2 * n} matrix for {n} modes, got shape {m.shape}"
        )
    if not np.all(np.isfinite(m)):
        raise GaussianStateError("covariance entries must be finite")
    skew = np.max(np.abs(m - m.T))
    if skew > SYMMETRY_TOL:
        raise GaussianStateError(f"covariance matrix is not symmetric (max skew {skew:.3g})")
    m = 0.5 * (m + m.T)
    m.setflags(write=False)
    return CovarianceMatrix(n, m)


def as_covariance(V) -> CovarianceMatrix:
    """Coerce an array-like or :class:`CovarianceMatrix` to a covariance."""
    if isinstance(V, CovarianceMatrix):
        return V
    m = np.asarray(V, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise GaussianStateError(f"cannot interpret shape {m.shape} as a covariance matrix")
    return make_covariance(m.shape[0] // 2, m)


def load_covariance(path) -> CovarianceMatrix:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GaussianStateError(f"{path}: not valid JSON ({exc})") from exc
    return CovarianceMatrix.from_json(obj)


def omega(n: int) -> np.ndarray:
    """Symplectic form for ``n`` modes in (Q1, P1, ..., Qn, Pn) ordering."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(V) -> SymplecticSpectrum:
    """Symplectic spectrum of a positive-definite covariance matrix.

    Computed as the positive eigenvalues of the Hermitian matrix
    ``i V^{1/2} Omega V^{1/2}``, which come in exact +/- pairs. This avoids
    the non-symmetric eigenproblem of ``Omega V``.
    """
    V = as_covariance(V)
    w, U = np.linalg.eigh(V.matrix)
    if w[0] <= 0:
        raise GaussianStateError(
            f"covariance matrix is not positive definite (smallest eigenvalue {w[0]:.3g})"
        )
    root = (U * np.sqrt(w)) @ U.T
    herm = 1j * (root @ omega(V.n) @ root)
    ev = np.linalg.eigvalsh(herm)
    nu = np.sort(ev[V.n:])[::-1]
    return SymplecticSpectrum(tuple(float(x) for x in nu))


def is_physical(V, tol: float = PHYSICAL_TOL) -> bool:
    try:
        return symplectic_eigenvalues(V).is_physical(tol)
    except GaussianStateError:
        return False


def check_physical(V) -> CovarianceMatrix:
    """Return ``V`` as a covariance, raising if it is not a physical state."""
    V = as_covariance(V)
    try:
        spec = symplectic_eigenvalues(V)
    except GaussianStateError as exc:
        raise UnphysicalStateError(str(exc)) from exc
    if not spec.is_physical():
        raise UnphysicalStateError(
            f"smallest symplectic eigenvalue {spec.min:.6g} is below the vacuum level 1"
        )
    return V


def _xlog2x(x: float) -> float:
    return x * np.log2(max(x, _LOG_FLOOR))


def entropy_function(nu: float) -> float:
    """Von Neumann entropy (bits) of a thermal mode with symplectic eigenvalue ``nu``.

    ``g(nu) = (nu+1)/2 log2((nu+1)/2) - (nu-1)/2 log2((nu-1)/2)``, with
    ``g(nu) = 0`` on ``[1, 1 + 1e-12]``.
    """
    if nu < 1.0 - PHYSICAL_TOL:
        raise UnphysicalStateError(f"symplectic eigenvalue {nu:.6g} < 1")
    if nu <= 1.0 + _PURE_TOL:
        return 0.0
    return _xlog2x((nu + 1.0) / 2.0) - _xlog2x((nu - 1.0) / 2.0)


def gaussian_entropy(V) -> float:
    """Von Neumann entropy of a Gaussian state in bits."""
    V = check_physical(V)
    return float(sum(entropy_function(nu) for nu in symplectic_eigenvalues(V)))


def _mode_indices(n: int, modes: Iterable[int]) -> list[int]:
    modes = list(modes)
    if not modes:
        raise GaussianStateError("mode selection is empty")
    if len(set(modes)) != len(modes):
        raise GaussianStateError(f"repeated modes in {modes}")
    for k in modes:
        if isinstance(k, bool) or int(k) != k or not 0 <= k < n:
            raise GaussianStateError(f"mode index {k!r} out of range for {n} modes")
    return [int(k) for k in modes]


def quadrature_indices(modes: Sequence[int]) -> list[int]:
    """Row indices of the (Q, P) pairs of ``modes``."""
    return [i for k in modes for i in (2 * k, 2 * k + 1)]


def marginal(V, modes: Iterable[int]) -> CovarianceMatrix:
    """Reduced covariance on ``modes`` (0-based), in the order given."""
    V = as_covariance(V)
    modes = _mode_indices(V.n, modes)
    idx = quadrature_indices(modes)
    return make_covariance(len(modes), V.matrix[np.ix_(idx, idx)])


def condition(sigma, keep: Sequence[int], given: Sequence[int]) -> np.ndarray:
    """Covariance of variables ``keep`` conditioned on variables ``given``.

    Indices address rows of ``sigma`` directly (variables, not modes). The
    result is the Schur complement ``S_kk - S_kg S_gg^{-1} S_gk``, which for
    jointly Gaussian variables does not depend on the observed values.
    """
    S = np.asarray(sigma, dtype=float)
    keep, given = list(keep), list(given)
    if set(keep) & set(given):
        raise GaussianStateError("keep and given index sets overlap")
    for i in keep + given:
        if not 0 <= i < S.shape[0]:
            raise GaussianStateError(f"variable index {i} out of range")
    S_kk = S[np.ix_(keep, keep)]
    if not given:
        return S_kk.copy()
    S_gg = S[np.ix_(given, given)]
    if np.linalg.cond(S_gg) > 1e12:
        raise GaussianStateError("conditioning block is singular")
    S_kg = S[np.ix_(keep, given)]
    out = S_kk - S_kg @ np.linalg.solve(S_gg, S_kg.T)
    return 0.5 * (out + out.T)


def direct_sum(*mats) -> CovarianceMatrix:
    """Covariance of a product state from its factors."""
    blocks = [as_covariance(m) for m in mats]
    n = sum(b.n for b in blocks)
    out = np.zeros((2 * n, 2 * n))
    i = 0
    for b in blocks:
        out[i:i + 2 * b.n, i:i + 2 * b.n] = b.matrix
        i += 2 * b.n
    return make_covariance(n, out)


def vacuum(n: int = 1) -> CovarianceMatrix:
    return make_covariance(n, np.eye(2 * n))

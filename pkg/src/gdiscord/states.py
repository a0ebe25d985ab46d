"""Two-mode EPR and three-mode GHZ states and the noise channels applied to them."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import CovarianceMatrix, GaussianStateError, as_covariance, make_covariance


def epr(r: float) -> CovarianceMatrix:
    """Two-mode squeezed vacuum with squeezing ``r``.

    Q quadratures are correlated (``+sinh 2r``), P quadratures anticorrelated.
    """
    if r < 0:
        raise GaussianStateError(f"squeezing must be non-negative, got {r}")
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    V = np.array(
        [
            [c, 0, s, 0],
            [0, c, 0, -s],
            [s, 0, c, 0],
            [0, -s, 0, c],
        ]
    )
    return make_covariance(2, V)


def ghz_coefficients(a: float) -> tuple[float, float]:
    """Cross-correlations ``(c+, c-)`` of the pure symmetric three-mode state."""
    if a < 1:
        raise GaussianStateError(f"GHZ parameter must satisfy a >= 1, got {a}")
    root = np.sqrt((a * a - 1) * (9 * a * a - 1))
    return (a * a - 1 + root) / (4 * a), (a * a - 1 - root) / (4 * a)


def ghz(a: float) -> CovarianceMatrix:
    """Pure, permutation-symmetric three-mode Gaussian GHZ/W state.

    ``a = 1`` gives the product vacuum.
    """
    cp, cm = ghz_coefficients(a)
    V = np.kron(np.eye(3), np.diag([a - cp, a - cm])) + np.kron(
        np.ones((3, 3)), np.diag([cp, cm])
    )
    return make_covariance(3, V)


class NoiseKind(enum.Enum):
    UNCORRELATED = "uncorrelated"
    MULTIPLICATIVE = "multiplicative"
    CORRELATED = "correlated"


@dataclass(frozen=True)
class NoiseModel:
    """A noise channel of a given kind and strength ``v``.

    Admissible strengths are ``v >= 0`` for additive noise and ``v >= 1`` for
    multiplicative noise; the lower end leaves the state unchanged.
    """

    kind: NoiseKind
    v: float

    def __post_init__(self):
        kind = NoiseKind(self.kind)
        object.__setattr__(self, "kind", kind)
        v = float(self.v)
        if not np.isfinite(v) or v < self.identity_value(kind):
            raise GaussianStateError(
                f"{kind.value} noise needs v >= {self.identity_value(kind)}, got {self.v}"
            )
        object.__setattr__(self, "v", v)

    @staticmethod
    def identity_value(kind) -> float:
        return 1.0 if NoiseKind(kind) is NoiseKind.MULTIPLICATIVE else 0.0

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "v": self.v}

    @classmethod
    def from_json(cls, obj: dict) -> "NoiseModel":
        try:
            return cls(NoiseKind(obj["kind"]), obj["v"])
        except (KeyError, TypeError) as exc:
            raise GaussianStateError('noise JSON needs keys "kind" and "v"') from exc
        except ValueError as exc:
            raise GaussianStateError(str(exc)) from exc


def correlated_noise_matrix(n: int) -> np.ndarray:
    """Unit-strength classically correlated noise for 2 or 3 modes.

    Q quadratures are perfectly correlated. P quadratures carry the strongest
    anticorrelation that ``n`` unit-variance classical variables allow
    (-1 for two, -0.5 for three), which sits on the PSD boundary.
    """
    if n == 2:
        p_cross = -1.0
    elif n == 3:
        p_cross = -0.5
    else:
        raise GaussianStateError(f"correlated noise is only defined for 2 or 3 modes, not {n}")
    q_block = np.ones((n, n))
    p_block = np.full((n, n), p_cross)
    np.fill_diagonal(p_block, 1.0)
    out = np.zeros((2 * n, 2 * n))
    out[0::2, 0::2] = q_block
    out[1::2, 1::2] = p_block
    return out


def apply_noise(V, noise: NoiseModel) -> CovarianceMatrix:
    """Covariance after sending ``V`` through ``noise``. Returns a new matrix."""
    V = as_covariance(V)
    m = V.matrix
    if noise.kind is NoiseKind.UNCORRELATED:
        out = m + noise.v * np.eye(2 * V.n)
    elif noise.kind is NoiseKind.MULTIPLICATIVE:
        out = noise.v * m
    else:
        out = m + noise.v * correlated_noise_matrix(V.n)
    return make_covariance(V.n, out)

import numpy as np
import pytest

from gdiscord.core import make_covariance, omega

ACCEPTANCE_RESULTS = {}


def rotation(phi):
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, s], [-s, c]])


def squeezer(r):
    return np.diag([np.exp(-r), np.exp(r)])


def random_local_symplectic(rng, max_squeeze=0.5):
    """Single-mode symplectic R(a) S(r) R(b)."""
    a, b = rng.uniform(0, 2 * np.pi, 2)
    r = rng.uniform(-max_squeeze, max_squeeze)
    return rotation(a) @ squeezer(r) @ rotation(b)


def passive_symplectic(U):
    """Real (Q1, P1, ...) symplectic of an n x n unitary acting on a = (Q + iP)/sqrt2."""
    n = U.shape[0]
    S = np.zeros((2 * n, 2 * n))
    S[0::2, 0::2] = U.real
    S[0::2, 1::2] = -U.imag
    S[1::2, 0::2] = U.imag
    S[1::2, 1::2] = U.real
    return S


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_symplectic(rng, n, max_squeeze=0.6):
    """Passive - local squeezing - passive, which covers all of Sp(2n)."""
    local = np.zeros((2 * n, 2 * n))
    for k in range(n):
        local[2 * k:2 * k + 2, 2 * k:2 * k + 2] = squeezer(rng.uniform(-max_squeeze, max_squeeze))
    return passive_symplectic(random_unitary(rng, n)) @ local @ passive_symplectic(random_unitary(rng, n))


def random_state(rng, n, max_thermal=2.0, max_squeeze=0.6):
    """Random physical covariance S diag(nu) S^T with nu >= 1."""
    nu = rng.uniform(1.0, 1.0 + max_thermal, n)
    S = random_symplectic(rng, n, max_squeeze)
    return make_covariance(n, S @ np.diag(np.repeat(nu, 2)) @ S.T)


def is_symplectic(S, tol=1e-10):
    n = S.shape[0] // 2
    return np.max(np.abs(S @ omega(n) @ S.T - omega(n))) < tol


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        status, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {status}  {detail}")

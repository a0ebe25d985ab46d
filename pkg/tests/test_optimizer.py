import numpy as np
import pytest

from gdiscord.core import GaussianStateError, make_covariance, vacuum
from gdiscord.measurement import MeasurementPlan, mi_batch, outcome_covariance_batch, plan_mi
from gdiscord.optimizer import (
    OptimizationBudgetError,
    Regime,
    SearchOptions,
    classify_regime,
    is_permutation_symmetric,
    maximize_mi,
    maximize_mi_symmetric,
)
from gdiscord.states import NoiseModel, apply_noise, epr, ghz

C2 = np.cosh(2.0)
J_GHZ2 = 1.8343776374020841


def noisy(base, kind, v):
    return apply_noise(base, NoiseModel(kind, v))


FAMILIES = [
    (epr(1), "uncorrelated", [0.0, 0.3, 1.0, 3.0]),
    (epr(1), "multiplicative", [1.0, 2.0, 3.0]),
    (epr(1), "correlated", [0.0, 0.5, 2.0]),
    (vacuum(2), "correlated", [0.5, 3.0]),
    (ghz(2), "uncorrelated", [0.0, 1.0, 3.0]),
    (ghz(2), "multiplicative", [1.0, 3.0, 4.0]),
    (ghz(2), "correlated", [0.0, 1.0]),
]
STATES = [noisy(b, k, v) for b, k, vs in FAMILIES for v in vs]


def test_regime_labels():
    assert classify_regime([1.0, 0.0]) is Regime.HOMODYNE
    assert classify_regime([1 - 5e-7, 5e-7]) is Regime.HOMODYNE
    assert classify_regime([0.5, 0.5 + 1e-7]) is Regime.HETERODYNE
    assert classify_regime([0.5, 1.0]) is Regime.INTERIOR
    assert classify_regime([1 - 1e-5, 1.0]) is Regime.INTERIOR


def test_search_options_json():
    opts = SearchOptions(theta_points=4, fatol=1e-9)
    assert SearchOptions.from_json(opts.to_json()) == opts
    with pytest.raises(ValueError):
        SearchOptions.from_json({"bogus": 1})
    with pytest.raises(ValueError):
        SearchOptions(t_points=1)


class TestEPR:
    def test_anchor(self):
        res = maximize_mi(epr(1))
        assert res.j_g == pytest.approx(np.log2(C2), abs=1e-9)
        assert res.regime is Regime.HOMODYNE
        assert res.plan.ts.tolist() == [1.0, 1.0]
        assert res.plan.thetas.tolist() == [0.0, 0.0]
        assert res.converged

    def test_heterodyne_at_high_noise(self):
        res = maximize_mi(noisy(epr(1), "uncorrelated", 3.0))
        assert res.regime is Regime.HETERODYNE
        np.testing.assert_allclose(res.plan.ts, [0.5, 0.5], atol=1e-6)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_vacuum(self, n):
        res = maximize_mi(vacuum(n))
        assert res.j_g == pytest.approx(0.0, abs=1e-12)

    def test_deterministic(self):
        V = noisy(epr(1), "correlated", 0.7)
        a, b = maximize_mi(V), maximize_mi(V)
        assert a == b


class TestGHZ:
    def test_anchor_symmetric(self):
        res = maximize_mi_symmetric(ghz(2))
        assert res.regime is Regime.HOMODYNE
        assert res.plan.ts.tolist() == [1.0] * 3
        assert res.plan.thetas.tolist() == [0.0] * 3
        assert res.j_g == pytest.approx(J_GHZ2, abs=1e-9)

    def test_anchor_full(self):
        res = maximize_mi(ghz(2))
        assert res.j_g == pytest.approx(J_GHZ2, abs=1e-9)
        assert res.plan.ts.tolist() == [1.0] * 3

    def test_multiplicative_anchors(self):
        assert maximize_mi_symmetric(noisy(ghz(2), "multiplicative", 3.0)).plan.ts.tolist() == [1.0] * 3
        ts = maximize_mi_symmetric(noisy(ghz(2), "multiplicative", 4.0)).plan.ts
        assert np.all(ts < 1.0)

    def test_dense_grid_oracle(self):
        V = ghz(2).matrix
        th, t = np.meshgrid(np.linspace(0, np.pi, 200, endpoint=False), np.linspace(0, 1, 200))
        th, t = th.ravel(), t.ravel()
        sigma = outcome_covariance_batch(V, np.repeat(th[:, None], 3, 1), np.repeat(t[:, None], 3, 1))
        brute = np.nanmax(mi_batch(sigma))
        res = maximize_mi_symmetric(ghz(2))
        assert res.j_g >= brute - 1e-9
        assert res.j_g - brute < 1e-3

    def test_p_homodyne_weaker(self):
        for a in (1.2, 2.0, 3.5):
            V = ghz(a)
            q = plan_mi(V, MeasurementPlan.homodyne(3))
            p = plan_mi(V, MeasurementPlan.from_arrays([0.0] * 3, [0.0] * 3))
            assert q > p

    def test_symmetric_requires_symmetry(self):
        m = ghz(2).matrix.copy()
        m[0, 0] += 0.1
        V = make_covariance(3, m)
        assert not is_permutation_symmetric(V)
        with pytest.raises(GaussianStateError):
            maximize_mi_symmetric(V)


@pytest.mark.parametrize("V", STATES, ids=lambda V: f"n{V.n}")
def test_beats_canonical_plans(V):
    res = maximize_mi(V)
    canon = max(plan_mi(V, MeasurementPlan.homodyne(V.n)), plan_mi(V, MeasurementPlan.heterodyne(V.n)))
    assert res.j_g >= canon - 1e-9
    assert res.j_g == pytest.approx(plan_mi(V, res.plan), abs=1e-9)


@pytest.mark.parametrize("V", [s for s in STATES if s.n == 3], ids=lambda V: "ghz")
def test_symmetric_not_above_full(V):
    full, sym = maximize_mi(V), maximize_mi_symmetric(V)
    assert sym.j_g <= full.j_g + 1e-9
    assert sym.j_g == pytest.approx(full.j_g, abs=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("V", STATES, ids=lambda V: f"n{V.n}")
def test_restart_stability(V):
    dense = SearchOptions(theta_points=16, t_points=9, max_evaluations=5_000_000)
    assert maximize_mi(V, dense).j_g == pytest.approx(maximize_mi(V).j_g, abs=1e-6)


def test_budget_exhausted():
    with pytest.raises(OptimizationBudgetError):
        maximize_mi(ghz(2), SearchOptions(max_evaluations=1000))


def test_too_many_modes():
    with pytest.raises(GaussianStateError):
        maximize_mi(vacuum(9))


def test_unphysical():
    with pytest.raises(GaussianStateError):
        maximize_mi(make_covariance(1, 0.5 * np.eye(2)))


def test_result_consistent_with_regime(rng):
    for V in STATES[:6]:
        res = maximize_mi(V)
        assert res.regime is classify_regime(res.plan.ts)

"""Noise sweeps over the EPR/GHZ families and detection of their thresholds."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .core import CovarianceMatrix, GaussianStateError, vacuum
from .discord import CorrelationReport, gaussian_multipartite_qd, homodyne_margin
from .optimizer import Regime, SearchOptions, maximize_mi, maximize_mi_symmetric
from .separability import BOUNDARY_TOL, is_standard_form, separability
from .states import NoiseKind, NoiseModel, apply_noise, epr, ghz

CSV_HEADER = ["v", "i_q", "j_g", "delta_g", "j_asym", "delta_asym", "t", "theta", "regime", "entangled"]
STATES = {"epr": 2, "ghz": 3, "vacuum2": 2, "vacuum3": 3}
THRESHOLD_TOL = 1e-4


def fmt(x) -> str:
    """Locale-independent 12-significant-digit formatting; ``None`` is empty."""
    if x is None:
        return ""
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".12g")


def rounded(obj):
    """Copy of a JSON-like object with every float cut to 12 significant digits."""
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v) for v in obj]
    if isinstance(obj, np.generic):
        return rounded(obj.item())
    return obj


def make_state(name: str, param: float | None = None) -> CovarianceMatrix:
    """Named base state: ``epr`` (squeezing r), ``ghz`` (a), ``vacuum2``, ``vacuum3``."""
    if name == "epr":
        return epr(1.0 if param is None else param)
    if name == "ghz":
        return ghz(2.0 if param is None else param)
    if name in ("vacuum2", "vacuum3"):
        return vacuum(STATES[name])
    raise GaussianStateError(f"unknown state {name!r}; choose from {sorted(STATES)}")


@dataclass(frozen=True)
class SweepSpec:
    """A base state, a noise family and an inclusive grid of noise strengths."""

    state: str
    noise: NoiseKind
    v_start: float
    v_stop: float
    v_step: float
    param: float | None = None
    options: SearchOptions = field(default_factory=SearchOptions)
    symmetric: bool = False

    def __post_init__(self):
        object.__setattr__(self, "noise", NoiseKind(self.noise))
        if self.state not in STATES:
            raise GaussianStateError(f"unknown state {self.state!r}")
        if not self.v_step > 0 or self.v_stop < self.v_start:
            raise GaussianStateError("v grid needs step > 0 and stop >= start")
        floor = NoiseModel.identity_value(self.noise)
        if self.v_start < floor:
            raise GaussianStateError(f"{self.noise.value} noise needs v >= {floor}")
        if self.noise is NoiseKind.CORRELATED and STATES[self.state] not in (2, 3):
            raise GaussianStateError("correlated noise needs 2 or 3 modes")
        make_state(self.state, self.param)

    @property
    def n(self) -> int:
        return STATES[self.state]

    def grid(self) -> np.ndarray:
        count = int(math.floor((self.v_stop - self.v_start) / self.v_step + 1e-9)) + 1
        return self.v_start + self.v_step * np.arange(count)

    def state_at(self, v: float) -> CovarianceMatrix:
        return apply_noise(make_state(self.state, self.param), NoiseModel(self.noise, v))

    def optimize(self, v: float):
        V = self.state_at(v)
        return (maximize_mi_symmetric if self.symmetric else maximize_mi)(V, self.options)

    def to_json(self) -> dict:
        return {
            "state": self.state,
            "param": self.param,
            "noise": self.noise.value,
            "v_start": self.v_start,
            "v_stop": self.v_stop,
            "v_step": self.v_step,
            "symmetric": self.symmetric,
            "options": self.options.to_json(),
        }


@dataclass(frozen=True)
class SweepRow:
    v: float
    report: CorrelationReport


def _evaluate(args) -> SweepRow:
    spec, v = args
    report = gaussian_multipartite_qd(spec.state_at(v), spec.options, symmetric=spec.symmetric)
    return SweepRow(float(v), report)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """Correlation reports on every grid point, ordered by ``v``."""
    tasks = [(spec, v) for v in spec.grid()]
    if jobs <= 1 or len(tasks) < 2:
        return [_evaluate(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate, tasks))


def _csv_entangled(report: CorrelationReport) -> str:
    label = report.entangled
    return label if isinstance(label, str) else ("true" if label else "false")


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        r = row.report
        writer.writerow(
            [
                fmt(row.v),
                fmt(r.i_q),
                fmt(r.j_g),
                fmt(r.delta_g),
                fmt(r.j_asym),
                fmt(r.delta_asym),
                ";".join(fmt(t) for t in r.plan.ts),
                ";".join(fmt(th) for th in r.plan.thetas),
                r.regime.value,
                _csv_entangled(r),
            ]
        )
    return buf.getvalue()


def bisect(pred: Callable[[float], bool], lo: float, hi: float, tol: float = THRESHOLD_TOL) -> float:
    """Locate where ``pred`` changes value between ``lo`` and ``hi``."""
    p_lo = pred(lo)
    if pred(hi) == p_lo:
        raise ValueError("predicate does not change sign on the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid) == p_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def regime_switch(spec: SweepSpec, rows: list[SweepRow] | None = None, tol: float = THRESHOLD_TOL):
    """First ``v`` where the optimal measurement stops being homodyne, or ``None``."""
    if rows is None:
        vs = spec.grid()
        regimes = [spec.optimize(v).regime for v in vs]
    else:
        vs = [row.v for row in rows]
        regimes = [row.report.regime for row in rows]
    for k in range(1, len(vs)):
        if regimes[k - 1] is Regime.HOMODYNE and regimes[k] is not Regime.HOMODYNE:
            return bisect(lambda v: spec.optimize(v).regime is Regime.HOMODYNE, vs[k - 1], vs[k], tol)
    return None


def _witness(spec: SweepSpec, v: float) -> float:
    return separability(spec.state_at(v)).witness


def separability_boundary(spec: SweepSpec, tol: float = THRESHOLD_TOL):
    """First ``v`` where the state stops being entangled, or ``None``."""
    vs = spec.grid()
    entangled = [_witness(spec, v) < -BOUNDARY_TOL for v in vs]
    for k in range(1, len(vs)):
        if entangled[k - 1] and not entangled[k]:
            return bisect(lambda v: _witness(spec, v) < -BOUNDARY_TOL, vs[k - 1], vs[k], tol)
    return None


def homodyne_criterion_switch(spec: SweepSpec, tol: float = THRESHOLD_TOL):
    """First ``v`` where the closed-form two-mode homodyne-optimality test fails."""
    if spec.n != 2:
        return None

    def ok(v):
        m = spec.state_at(v).matrix
        return homodyne_margin(m[0, 0], m[2, 2], m[0, 2]) >= 0

    if not is_standard_form(spec.state_at(spec.v_start)):
        return None
    vs = spec.grid()
    flags = [ok(v) for v in vs]
    for k in range(1, len(vs)):
        if flags[k - 1] and not flags[k]:
            return bisect(ok, vs[k - 1], vs[k], tol)
    return None


def thresholds(spec: SweepSpec, rows: list[SweepRow] | None = None) -> dict:
    return {
        "spec": spec.to_json(),
        "regime_switch_v": regime_switch(spec, rows),
        "separability_boundary_v": separability_boundary(spec),
        "homodyne_criterion_v": homodyne_criterion_switch(spec),
        "tolerance": THRESHOLD_TOL,
    }


def write_sweep(spec: SweepSpec, path, jobs: int = 1) -> tuple[str, dict]:
    """Run ``spec``, write the CSV to ``path`` and the thresholds next to it.

    The sidecar is ``<path stem>.thresholds.json``. Returns the CSV text and
    the threshold dictionary.
    """
    path = Path(path)
    rows = run_sweep(spec, jobs)
    text = rows_to_csv(rows)
    side = thresholds(spec, rows)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    with open(sidecar_path(path), "w") as fh:
        json.dump(rounded(side), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return text, side


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".thresholds.json")


def with_options(spec: SweepSpec, **kwargs) -> SweepSpec:
    return replace(spec, options=replace(spec.options, **kwargs))

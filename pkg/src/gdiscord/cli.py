"""Command-line front end.

Subcommands ``report``, ``sweep``, ``validate``, ``separability`` and
``entropy``. Exit codes: 0 ok, 2 usage/input error, 3 unphysical state,
4 Monte-Carlo validation failure. All quantities are in bits.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from pathlib import Path

from .core import (
    GaussianStateError,
    UnphysicalStateError,
    check_physical,
    gaussian_entropy,
    load_covariance,
    marginal,
    symplectic_eigenvalues,
)
from .discord import gaussian_multipartite_qd, quantum_mi
from .measurement import MeasurementPlan
from .montecarlo import validate
from .optimizer import OptimizationBudgetError, SearchOptions, maximize_mi
from .separability import duan_criterion, is_standard_form, ppt_single_mode_cuts, separability
from .states import NoiseKind, NoiseModel, apply_noise
from .sweeps import STATES, SweepSpec, make_state, rounded, sidecar_path, write_sweep

log = logging.getLogger("gdiscord")

EXIT_OK, EXIT_USAGE, EXIT_UNPHYSICAL, EXIT_VALIDATION = 0, 2, 3, 4
_OPTION_FLAGS = ("theta_points", "t_points", "max_evaluations", "refine_starts", "fatol", "xatol")
_DEFAULTS = {"m": 1_000_000, "seed": 0, "plan": "optimal"}


class UsageError(Exception):
    pass


def _emit(obj):
    json.dump(rounded(obj), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _add_state_args(p, with_file=True):
    p.add_argument("--state", choices=sorted(STATES), help="named base state")
    p.add_argument("--r", type=float, help="EPR squeezing (default 1)")
    p.add_argument("--a", type=float, help="GHZ parameter (default 2)")
    if with_file:
        p.add_argument("--file", help='covariance JSON {"n": int, "matrix": [[...], ...]}')
    p.add_argument("--noise", choices=[k.value for k in NoiseKind])
    p.add_argument("--v", type=float, help="noise strength for a single state")
    p.add_argument("--config", help="JSON file with the same keys as the flags")


def _add_search_args(p):
    p.add_argument("--theta-points", dest="theta_points", type=int)
    p.add_argument("--t-points", dest="t_points", type=int)
    p.add_argument("--max-evaluations", dest="max_evaluations", type=int)
    p.add_argument("--refine-starts", dest="refine_starts", type=int)
    p.add_argument("--fatol", type=float)
    p.add_argument("--xatol", type=float)
    p.add_argument("--symmetric", action="store_true", default=None,
                   help="common (theta, t) for all modes; permutation-symmetric states only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdiscord",
        description="Gaussian multipartite classical correlations and discord of Gaussian states.",
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="full correlation report for one state (JSON)")
    _add_state_args(p)
    _add_search_args(p)

    p = sub.add_parser("sweep", help="noise sweep to CSV plus a thresholds sidecar")
    _add_state_args(p, with_file=False)
    _add_search_args(p)
    p.add_argument("--v-start", dest="v_start", type=float)
    p.add_argument("--v-stop", dest="v_stop", type=float)
    p.add_argument("--v-step", dest="v_step", type=float)
    p.add_argument("--output", "-o", help="CSV path")
    p.add_argument("--jobs", type=int, help="worker processes (default $GDISCORD_JOBS or 1)")

    p = sub.add_parser("validate", help="analytic vs Monte-Carlo outcome MI")
    _add_state_args(p)
    _add_search_args(p)
    p.add_argument("--plan", help="homodyne, heterodyne, optimal, or a plan JSON file")
    p.add_argument("--m", type=int, help="number of samples (default 1e6)")
    p.add_argument("--seed", type=int, help="RNG seed (default 0)")

    p = sub.add_parser("separability", help="Duan and PPT verdicts")
    _add_state_args(p)

    p = sub.add_parser("entropy", help="symplectic spectrum, entropies and quantum MI")
    _add_state_args(p)
    return parser


def _merge_config(args):
    """Fill unset flags from ``--config``; flags win."""
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        options = cfg.pop("options", {}) or {}
        cfg = {**options, **cfg}
    for key, value in cfg.items():
        if not hasattr(args, key):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if getattr(args, key) is None:
            setattr(args, key, value)
    for key, value in _DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def _search_options(args) -> SearchOptions:
    kwargs = {k: getattr(args, k) for k in _OPTION_FLAGS if getattr(args, k, None) is not None}
    try:
        return SearchOptions(**kwargs)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _param(args):
    return args.r if args.state == "epr" else args.a if args.state == "ghz" else None


def _load_state(args):
    if getattr(args, "file", None):
        if args.state:
            raise UsageError("give either --state or --file, not both")
        V = load_covariance(args.file)
    elif args.state:
        V = make_state(args.state, _param(args))
    else:
        raise UsageError("a state is required: --state NAME or --file PATH")
    if args.noise is not None:
        v = args.v if args.v is not None else NoiseModel.identity_value(args.noise)
        V = apply_noise(V, NoiseModel(NoiseKind(args.noise), v))
    elif args.v is not None:
        raise UsageError("--v needs --noise")
    return check_physical(V)


def cmd_report(args) -> int:
    V = _load_state(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = gaussian_multipartite_qd(V, _search_options(args), symmetric=bool(args.symmetric))
    for w in caught:
        log.warning("%s", w.message)
    _emit(report.to_json())
    return EXIT_OK


def cmd_sweep(args) -> int:
    for key in ("state", "noise", "v_start", "v_stop", "v_step", "output"):
        if getattr(args, key) is None:
            raise UsageError(f"sweep needs --{key.replace('_', '-')}")
    spec = SweepSpec(
        state=args.state,
        noise=NoiseKind(args.noise),
        v_start=args.v_start,
        v_stop=args.v_stop,
        v_step=args.v_step,
        param=_param(args),
        options=_search_options(args),
        symmetric=bool(args.symmetric),
    )
    parent = Path(args.output).resolve().parent
    if not parent.is_dir():
        raise UsageError(f"cannot write {args.output}: directory {parent} does not exist")
    jobs = args.jobs if args.jobs is not None else int(os.environ.get("GDISCORD_JOBS", "1"))
    try:
        _, side = write_sweep(spec, args.output, jobs=jobs)
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc}") from exc
    side = dict(side, csv=str(args.output), sidecar=str(sidecar_path(args.output)))
    _emit(side)
    return EXIT_OK


def _plan(args, V) -> MeasurementPlan:
    choice = args.plan
    if choice == "homodyne":
        return MeasurementPlan.homodyne(V.n)
    if choice == "heterodyne":
        return MeasurementPlan.heterodyne(V.n)
    if choice == "optimal":
        return maximize_mi(V, _search_options(args)).plan
    try:
        with open(choice) as fh:
            plan = MeasurementPlan.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--plan must be homodyne, heterodyne, optimal or a JSON file: {exc}") from exc
    if plan.n != V.n:
        raise UsageError(f"plan has {plan.n} modes, state has {V.n}")
    return plan


def cmd_validate(args) -> int:
    V = _load_state(args)
    summary = validate(V, _plan(args, V), int(args.m), int(args.seed))
    _emit(summary)
    if not summary["pass"]:
        log.error("Monte-Carlo estimate differs by %.2f standard errors", summary["z"])
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_separability(args) -> int:
    V = _load_state(args)
    out = {"verdict": separability(V).to_json()}
    if V.n >= 2:
        out["ppt"] = [dict(c.to_json(), cut=[k]) for k, c in enumerate(ppt_single_mode_cuts(V))]
    if V.n == 2 and is_standard_form(V):
        out["duan"] = duan_criterion(V).to_json()
    _emit(out)
    return EXIT_OK


def cmd_entropy(args) -> int:
    V = _load_state(args)
    _emit(
        {
            "n": V.n,
            "symplectic_eigenvalues": list(symplectic_eigenvalues(V)),
            "entropy": gaussian_entropy(V),
            "marginal_entropies": [gaussian_entropy(marginal(V, [k])) for k in range(V.n)],
            "quantum_mi": quantum_mi(V),
        }
    )
    return EXIT_OK


COMMANDS = {
    "report": cmd_report,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
    "separability": cmd_separability,
    "entropy": cmd_entropy,
}


def _configure_logging(quiet: bool):
    # rebind on every call so the handler follows the current sys.stderr
    for handler in list(log.handlers):
        log.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("gdiscord: %(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.ERROR if quiet else logging.WARNING)
    log.propagate = False


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    _configure_logging(args.quiet)
    try:
        _merge_config(args)
        return COMMANDS[args.command](args)
    except UnphysicalStateError as exc:
        log.error("unphysical state: %s", exc)
        return EXIT_UNPHYSICAL
    except (UsageError, GaussianStateError, OptimizationBudgetError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

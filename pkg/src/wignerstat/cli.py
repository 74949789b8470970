"""Command-line pipelines: build a test state, run the checks, write a JSON report.

    wignerstat classify --config configs/gaussian_pair.json
    wignerstat harmonium --n 0 --m 1
    wignerstat spin --config configs/triplet.json --seed 7
    wignerstat dump --config configs/gaussian_pair.json --out slice.csv

Exit status: 0 when every check passes, 2 when a check fails (the report is still
written), 1 on usage, configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import gaussian_states as gs
from . import harmonium as hm
from . import intracule as ic
from . import phase_grid as pg
from . import spin as sp
from .statistics import classify_intracule
from .wigner_core import sample_wigner

COMMANDS = ("gaussian", "harmonium", "spin", "classify", "dump")
EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2

DEFAULTS = {
    "grid": {"n_points": 64, "half_width": 4.2},
    "tolerance": 1e-6,
    "threads": 1,
    "seed": 0,
}
DEFAULT_STATES = {
    "gaussian": {"kind": "gaussian_pair", "orbitals": [{"d": 1.0}, {"d": 2.0}], "sign": -1},
    "classify": {"kind": "gaussian_pair", "orbitals": [{"d": 1.0}, {"d": 2.0}], "sign": -1},
    "dump": {"kind": "gaussian_pair", "orbitals": [{"d": 1.0}, {"d": 2.0}], "sign": -1},
    "harmonium": {"kind": "harmonium", "k": 1.0, "delta": 0.0, "n": 0, "m": 0},
    "spin": {"kind": "spin", "spin_state": "triplet", "alpha": [1.0, 0.0], "beta": [0.0, 0.0],
             "gamma": [0.0, 0.0], "orbitals": [{"d": 1.0}, {"d": 2.0}], "sign": -1},
}


class UsageError(Exception):
    pass


# -- report formatting -------------------------------------------------------

def _fmt(x):
    """Round floats to 12 significant digits so reports are byte-stable."""
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _fmt(float(x.real)), "im": _fmt(float(x.imag))}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.12g}")
    if hasattr(x, "value"):
        return x.value
    return x


def render(report: dict) -> str:
    return json.dumps(_fmt(report), indent=2) + "\n"


def _check(name: str, value, threshold=None, passed=None, expected=None) -> dict:
    out = {"name": name, "value": value}
    if threshold is not None:
        out["threshold"] = threshold
        passed = value <= threshold if passed is None else passed
    if expected is not None:
        out["expected"] = expected
        passed = value == expected if passed is None else passed
    out["passed"] = bool(passed)
    return out


# -- configuration -----------------------------------------------------------

def load_schema() -> dict:
    text = resources.files("wignerstat").joinpath("schema.json").read_text()
    return json.loads(text)


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed config {path}: {exc}") from exc
    try:
        jsonschema.validate(cfg, load_schema())
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"invalid config {path} at {loc}: {exc.message}") from exc
    return cfg


def resolve(args) -> dict:
    cfg = load_config(args.config)
    command = args.command
    # the subcommand on the command line wins, so one state file can feed several commands
    run = {**DEFAULTS, **cfg, "command": command}
    run["grid"] = {**DEFAULTS["grid"], **cfg.get("grid", {})}
    run["state"] = {**DEFAULT_STATES[command], **cfg.get("state", {})}
    state = run["state"]
    if getattr(args, "sign", None) is not None:
        state.pop("expect", None)
    for flag in ("n", "m", "k", "delta", "sign"):
        value = getattr(args, flag, None)
        if value is not None:
            state[flag] = value
    for flag in ("alpha", "beta", "gamma"):
        value = getattr(args, flag, None)
        if value is not None:
            state[flag] = value
    if getattr(args, "spin_state", None):
        state["spin_state"] = args.spin_state
    if args.tol is not None:
        run["tolerance"] = args.tol
    if args.threads is not None:
        run["threads"] = args.threads
    if args.seed is not None:
        run["seed"] = args.seed
    if args.out is not None:
        run["output_path"] = args.out
    n = run["grid"]["n_points"]
    if n < 2 or n & (n - 1):
        raise UsageError(f"grid.n_points must be a power of two, got {n}")
    if not run["tolerance"] > 0:
        raise UsageError("tolerance must be positive")
    if run["threads"] < 1:
        raise UsageError("threads must be at least 1")
    return run


# -- state builders ----------------------------------------------------------

def _orbitals(state) -> tuple:
    try:
        return tuple(gs.GaussianOrbital(o["d"], o.get("b", 0.0)) for o in state["orbitals"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _pair_evaluator(state):
    j, k = _orbitals(state)
    sign = state.get("sign", 1)
    if sign == 0:
        return gs.product_quasidensity(j, k)
    try:
        return gs.pair_quasidensity(j, k, sign)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _expected_gaussian(state) -> str:
    return {1: "Bose", -1: "Fermi", 0: "Neither"}[state.get("sign", 1)]


def _harmonium(state):
    try:
        return hm.HarmoniumParams(state["k"], state.get("delta", 0.0)), hm.EigenIndex(state["n"], state["m"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def build_intracule(run):
    """The state of ``run`` as an intracule object ready for classification."""
    state = run["state"]
    if state["kind"] == "harmonium":
        params, idx = _harmonium(state)
        return hm.sample_eigenstate(params, idx, run["grid"]["n_points"])
    x_axis, p_axis = ic.pair_axes(run["grid"]["n_points"], run["grid"]["half_width"])
    w = sample_wigner(_pair_evaluator(state), x_axis, p_axis, 2)
    return ic.to_intracule(w)


def _grid_report(run) -> dict:
    return {"n_points": run["grid"]["n_points"], "half_width": run["grid"]["half_width"]}


# -- commands ----------------------------------------------------------------

def cmd_classify(run) -> dict:
    iw = build_intracule(run)
    verdict = classify_intracule(iw, run["tolerance"], threads=run["threads"])
    checks = []
    expected = run["state"].get("expect")
    if expected is None and run["state"]["kind"] == "gaussian_pair":
        expected = _expected_gaussian(run["state"])
    if expected is None and run["state"]["kind"] == "harmonium":
        expected = "Bose" if run["state"]["m"] % 2 == 0 else "Fermi"
    checks.append(_check("classification", verdict.classification.value, expected=expected))
    return {"verdict": verdict.to_dict(), "integral": iw.integral().real, "checks": checks}


def cmd_gaussian(run) -> dict:
    state = run["state"]
    j, k = _orbitals(state)
    report = cmd_classify(run)
    lam = gs.lambda_identity_check(j, k, pg.square_axis(256))
    report["overlap"] = gs.overlap(j, k)
    report["checks"].append(_check("lambda_identity", lam, threshold=run["tolerance"]))
    return report


def cmd_harmonium(run) -> dict:
    state = run["state"]
    params, idx = _harmonium(state)
    parity = hm.parity_residual(idx.m, params.mu)
    verdict = hm.statistics_of_eigenstate(params, idx, run["tolerance"], run["grid"]["n_points"],
                                          threads=run["threads"])
    expected = "Bose" if idx.symmetric else "Fermi"
    checks = [
        _check("gamma_parity", parity, threshold=run["tolerance"]),
        _check("classification", verdict.classification.value, expected=expected),
    ]
    report = {"nu": params.nu, "mu": params.mu, "verdict": verdict.to_dict()}
    if "x" in state:
        orders = state.get("orders", [1, 5, 10, 20])
        series = [hm.generating_function_check(params.mu, state["x"], M) for M in orders]
        report["generating_function"] = dict(zip((str(M) for M in orders), series))
        checks.append(_check("generating_function", series[-1], threshold=run["tolerance"]))
        checks.append(_check("generating_function_decreasing", bool(np.all(np.diff(series) < 0)),
                             expected=True))
    report["checks"] = checks
    return report


def _complex(pair) -> complex:
    return complex(pair[0], pair[1])


def spin_identities(seed: int, count: int = 50) -> dict:
    """Worst residuals of the grid-free spin identities over ``count`` random Hermitian matrices."""
    rng = np.random.default_rng(seed)
    u = sp.u_matrix()
    worst = {"uu_dagger": float(np.abs(u @ u.conj().T - 0.5 * np.eye(4)).max()),
             "a_squared": float(np.abs(sp.A @ sp.A - np.eye(4)).max()),
             "round_trip": 0.0, "exchange_table": 0.0, "indist_table": 0.0, "v3_conj_v2": 0.0}
    for _ in range(count):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        w = sp.MatrixWigner2(m + m.conj().T)
        mult = sp.to_multiplet(w)
        back = sp.from_multiplet(mult)
        swapped = sp.to_multiplet(sp.swap_unprimed(w))
        conj = sp.to_multiplet(sp.exchange_conjugate(w))
        worst["round_trip"] = max(worst["round_trip"], float(np.abs(back.values - w.values).max()))
        # an antisymmetric state obeys -swap = state, hence the table carries the minus
        worst["exchange_table"] = max(worst["exchange_table"], float(
            np.abs(-swapped.values - sp.multiplet_exchange_signs() * mult.values).max()))
        worst["indist_table"] = max(worst["indist_table"], float(
            np.abs(conj.values - sp.multiplet_indist_signs() * mult.values).max()))
        worst["v3_conj_v2"] = max(worst["v3_conj_v2"], float(np.abs(mult.v3 - np.conj(mult.v2)).max()))
    return worst


def _spin_orbital(run):
    state = run["state"]
    r_axis = pg.square_axis(run["grid"]["n_points"])
    R_axis = pg.Axis(8, 0.5)
    func = ic.lab_to_intracule_function(_pair_evaluator(state))
    return ic.sample_intracule(func, R_axis, r_axis, R_axis)


def cmd_spin(run) -> dict:
    state = run["state"]
    orbital = _spin_orbital(run)
    if state["spin_state"] == "singlet":
        w = sp.singlet_state(orbital)
        coef_state = sp.singlet_state(1.0)
    else:
        a, b, g = (_complex(state[n]) for n in ("alpha", "beta", "gamma"))
        try:
            w = sp.triplet_state(a, b, g, orbital)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        coef_state = sp.triplet_state(a, b, g, 1.0)
    fermi = sp.check_fermi_multiplet(sp.to_multiplet(w), run["tolerance"], threads=run["threads"])
    algebra = spin_identities(run["seed"], state.get("random_instances", 50))
    checks = [_check(f"algebra_{k}", v, threshold=1e-12) for k, v in algebra.items()]
    checks.append(_check("fermi_multiplet", fermi["residual"], threshold=run["tolerance"]))
    report = {
        "expansion": sp.expansion_coefficients(coef_state),
        "one_body": sp.one_body_coefficients(coef_state),
        "fermi": fermi,
        "algebra": algebra,
        "checks": checks,
    }
    return report


def cmd_dump(run) -> dict:
    """Write the central (R, P) slice and its partial transform as flat CSV files."""
    out = run.get("output_path")
    if not out:
        raise UsageError("dump needs --out <path.csv>")
    iw = build_intracule(run)
    if isinstance(iw, ic.IntraculeWigner):
        s = iw.slice(iw.x_axis.n_points, iw.p_axis.n_points)
    else:
        s = iw.slice(iw.axes[0].origin_index, iw.axes[2].origin_index)
    t = ic.tilde(s)
    base = Path(out)
    tilde_path = base.with_name(base.stem + "_tilde" + base.suffix)
    try:
        pg.export_csv(s.data, base, ["r", "p"])
        pg.export_csv(t.data, tilde_path, ["v", "p"])
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc
    run["output_path"] = None
    return {"files": [str(base), str(tilde_path)], "R": s.R_value, "P": s.P_value, "checks": []}


HANDLERS = {"gaussian": cmd_gaussian, "harmonium": cmd_harmonium, "spin": cmd_spin,
            "classify": cmd_classify, "dump": cmd_dump}


def run(config: dict) -> tuple[int, str]:
    """Execute a resolved config; returns (exit code, report text)."""
    body = HANDLERS[config["command"]](config)
    passed = all(c["passed"] for c in body.get("checks", []))
    report = {
        "command": config["command"],
        "status": "pass" if passed else "fail",
        "tolerance": config["tolerance"],
        "grid": _grid_report(config),
        "state": config["state"],
        **body,
    }
    return (EXIT_OK if passed else EXIT_CHECK), render(report)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="report path (default: stdout); CSV path for dump")
    common.add_argument("--tol", type=float, help="check tolerance (default 1e-6)")
    common.add_argument("--threads", type=int, help="worker threads for slice checks")
    common.add_argument("--seed", type=int, help="seed for randomized identity checks")

    parser = argparse.ArgumentParser(prog="wignerstat", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("gaussian", "classify", "dump"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--sign", type=int, choices=(-1, 0, 1), help="pair symmetry; 0 = plain product")
    p = sub.add_parser("harmonium", parents=[common])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=float)
    p.add_argument("--delta", type=float)
    p = sub.add_parser("spin", parents=[common])
    p.add_argument("--spin-state", choices=("singlet", "triplet"))
    p.add_argument("--sign", type=int, choices=(-1, 1))
    for name in ("alpha", "beta", "gamma"):
        p.add_argument(f"--{name}", type=float, nargs=2, metavar=("RE", "IM"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        config = resolve(args)
        code, text = run(config)
        out = config.get("output_path")
        if out:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        print(f"wignerstat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"wignerstat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())

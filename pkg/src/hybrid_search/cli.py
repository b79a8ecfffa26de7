"""Command line entry point: ``hybrid-search <command> [options]``.

Every command resolves its settings as built-in defaults, then ``--config``,
then explicit flags, and echoes the resolved settings (seed included) at the
top of its output.  Running a report back through ``--config`` reproduces
it byte for byte.
"""
from __future__ import annotations

import argparse
import math
import secrets
import sys
from pathlib import Path

from . import __version__
from .algorithms import ACCOUNTINGS, BOYER_GROWTH, DEFAULT_C, DEFAULT_DELTA, DEFAULT_ROUND_CAP, OKAMOTO_GROWTH, HybridParams
from .analysis import PAPER_FAITHFUL, REFINED, NotApplicable, expected_queries, optimize_g
from .config import fmt, header_lines, human, load_config, parse_grid, render_csv
from .dynamics import closed_form_p, lemma1_lower_bound, run_sequence
from .montecarlo import (
    ALGORITHMS,
    BOUND_BOYER,
    BOUND_HYBRID,
    BOUND_OKAMOTO,
    REF_YOUNES_2008,
    REF_YOUNES_2013,
    TABLE1,
    run_trials,
)
from .schedule import build_schedule
from .validation import run_all

TOOL = "hybrid-search"


def _choice(options):
    def conv(v):
        if v not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {v!r}")
        return v

    return conv


def _bool(v):
    if isinstance(v, bool):
        return v
    if v.lower() in ("1", "true", "yes"):
        return True
    if v.lower() in ("0", "false", "no"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _opt_float(v):
    return None if v in (None, "", "none") else float(v)


def _algorithms(v):
    names = [a.strip() for a in v.split(",") if a.strip()]
    if not names:
        raise ValueError("at least one algorithm is required")
    for name in names:
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    return ",".join(names)


_PARAMS = {"delta": (float, DEFAULT_DELTA), "c": (float, DEFAULT_C)}

SETTINGS = {
    "schedule": {"l": (int, 1), "delta": (float, DEFAULT_DELTA)},
    "simulate": {"lambda": (float, 0.1), "l": (int, 3), "delta": (float, DEFAULT_DELTA)},
    "montecarlo": {
        "lambda_grid": (str, "1e-4,1e-3,1e-2,1e-1"),
        **_PARAMS,
        "trials": (int, 100_000),
        "accounting": (_choice(ACCOUNTINGS), "standard"),
        "model": (_choice(("algorithm", "paper")), "algorithm"),
        "round_cap": (int, DEFAULT_ROUND_CAP),
    },
    "optimize": {
        "delta_min": (float, 0.05),
        "delta_max": (float, 0.95),
        "grid_density": (int, 200),
        "refine_tol": (float, 1e-12),
    },
    "compare": {
        "algorithms": (_algorithms, "hybrid,boyer,okamoto"),
        "lambda_grid": (str, "1e-3,1e-2"),
        "lambda0": (_opt_float, None),
        **_PARAMS,
        "trials": (int, 100_000),
        "accounting": (_choice(ACCOUNTINGS), "standard"),
        "boyer_growth": (float, BOYER_GROWTH),
        "okamoto_growth": (float, OKAMOTO_GROWTH),
        "round_cap": (int, DEFAULT_ROUND_CAP),
    },
    "validate": {
        "lambda_grid": (str, "log:1e-4:0.99:30"),
        "delta_grid": (str, "lin:0.1:0.9:9"),
        "l_grid": (str, "lin:0:500:20"),
        "bound_lambda_grid": (str, "log:1e-6:0.1:50"),
        "sv_cases": (int, 200),
        "sv_max_qubits": (int, 12),
        "sv_max_l": (int, 200),
        "perturb": (float, 0.0),
    },
}

HELP = {
    "schedule": "matched phase table for l iterations",
    "simulate": "simulated vs closed-form success probability",
    "montecarlo": "hybrid search trials against the exact expectation",
    "optimize": "minimize the g(delta, c) bound coefficient",
    "compare": "hybrid search and baselines, one CSV row per (algorithm, lambda)",
    "validate": "run the self-check suites; nonzero exit on any violation",
}


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, settings in SETTINGS.items():
        p = sub.add_parser(name, help=HELP[name])
        for key in settings:
            p.add_argument("--" + key.replace("_", "-"), dest=key, default=None)
        if "lambda_grid" in settings:
            p.add_argument("--lambda", dest="lambda_single", default=None, help="single lambda, shorthand for --lambda-grid")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", default=None, help="flat key = value file, or a previous report")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
    return parser


def resolve(command: str, args: argparse.Namespace) -> dict:
    settings = SETTINGS[command]
    raw = {key: default for key, (_, default) in settings.items()}
    raw["seed"] = None
    if args.config:
        for key, value in load_config(args.config).items():
            if key in raw:
                raw[key] = value
            else:
                print(f"warning: ignoring config key {key!r}", file=sys.stderr)
    for key in settings:
        value = getattr(args, key)
        if value is not None:
            raw[key] = value
    if getattr(args, "lambda_single", None) is not None:
        raw["lambda_grid"] = args.lambda_single
    if args.seed is not None:
        raw["seed"] = args.seed
    cfg = {}
    for key, (conv, _) in settings.items():
        value = raw[key]
        try:
            cfg[key] = value if value is None or not isinstance(value, str) else conv(value)
        except ValueError as exc:
            raise UsageError(f"--{key.replace('_', '-')}: {exc}") from None
    if raw["seed"] in (None, ""):
        cfg["seed"] = secrets.randbits(63)
        print(f"seed = {cfg['seed']}", file=sys.stderr)
    else:
        cfg["seed"] = int(raw["seed"])
    return cfg


def _lambda_grid(cfg, key="lambda_grid"):
    lams = parse_grid(cfg[key])
    for lam in lams:
        if not 0.0 < lam <= 1.0:
            raise UsageError(f"lambda values must lie in (0, 1], got {lam}")
    return lams


def cmd_schedule(cfg):
    sched = build_schedule(cfg["l"], cfg["delta"])
    rows = [[j, phi, varphi] for j, (phi, varphi) in enumerate(zip(sched.phi, sched.varphi), start=1)]
    info = [f"# info: L = {sched.L}", f"# info: gamma = {fmt(sched.gamma)}"]
    return ["j", "phi", "varphi"], rows, info, f"schedule l={sched.l} L={sched.L} gamma={human(sched.gamma)}", 0


def cmd_simulate(cfg):
    lam, l, delta = cfg["lambda"], cfg["l"], cfg["delta"]
    p_sim = run_sequence(lam, build_schedule(l, delta))
    p_cf = closed_form_p(lam, l, delta)
    lb = lemma1_lower_bound(lam, delta, 2 * l + 1) if lam < 1.0 else 1.0 - delta * delta
    header = ["lambda", "l", "delta", "p_simulated", "p_closed_form", "p_lower_bound"]
    summary = f"P simulated {human(p_sim)}, closed form {human(p_cf)}, lower bound {human(lb)}"
    return header, [[lam, l, delta, p_sim, p_cf, lb]], [], summary, 0


MC_HEADER = [
    "lambda", "trials", "model", "accounting", "found_rate",
    "mean_total_queries", "std_total_queries", "se_total_queries",
    "mean_oracle_queries", "se_oracle_queries", "mean_iterations", "mean_verifications", "mean_rounds",
    "expected_total_queries", "z_score", "bound_total_queries",
]


def cmd_montecarlo(cfg):
    paper = cfg["model"] == "paper"
    params = HybridParams(cfg["delta"], cfg["c"], cfg["accounting"], cfg["round_cap"], step3_stops=not paper)
    per_it = 2 if cfg["accounting"] == "standard" else 1
    rows, notes = [], []
    for lam in _lambda_grid(cfg):
        s = run_trials("hybrid", lam, cfg["trials"], cfg["seed"], params=params, round_cap=cfg["round_cap"])
        tq = s["total_queries"]
        try:
            exp = expected_queries(lam, cfg["delta"], cfg["c"], PAPER_FAITHFUL if paper else REFINED,
                                   queries_per_iteration=per_it).e_total
            z = (tq.mean - exp) / tq.se if tq.se > 0 else 0.0
        except NotApplicable:
            exp = z = None
        rows.append([
            lam, s.trials, cfg["model"], cfg["accounting"], s.found_rate,
            tq.mean, tq.std, tq.se, s["oracle_queries"].mean, s["oracle_queries"].se,
            s["iterations"].mean, s["verifications"].mean, s["rounds"].mean,
            exp, z, BOUND_HYBRID / math.sqrt(lam),
        ])
        notes.append(f"lambda={human(lam)}: mean {human(tq.mean)} +- {human(tq.se)}"
                     + (f", expected {human(exp)}" if exp is not None else ""))
    return MC_HEADER, rows, [], "\n".join(notes), 0


def cmd_optimize(cfg):
    rec = optimize_g((cfg["delta_min"], cfg["delta_max"]), cfg["grid_density"], cfg["refine_tol"])
    rows = [
        ["delta", rec.delta],
        ["c", rec.c],
        ["g", rec.g],
        ["grid_points_delta", rec.grid_shape[0]],
        ["grid_points_c", rec.grid_shape[1]],
        ["grid_delta_min", rec.delta_range[0]],
        ["grid_delta_max", rec.delta_range[1]],
        ["grid_best_delta", rec.grid_best[0]],
        ["grid_best_c", rec.grid_best[1]],
        ["grid_best_g", rec.grid_best[2]],
        ["refine_iterations", rec.refine_iterations],
        ["refine_evaluations", rec.refine_evaluations],
        ["refine_path_length", len(rec.history)],
        ["stencil_step", rec.stencil_step],
        ["stencil_min_gap", rec.stencil_min_gap],
        ["interior_minimum", rec.interior],
    ]
    summary = f"min g = {human(rec.g)} at delta = {human(rec.delta)}, c = {human(rec.c)}"
    return ["quantity", "value"], rows, [], summary, 0


COUNTER_COLUMNS = ("iterations", "oracle_queries", "verifications", "rounds", "total_queries")
COMPARE_HEADER = (
    ["algorithm", "lambda", "lambda0", "trials", "accounting", "found_rate"]
    + [f"{stat}_{name}" for name in COUNTER_COLUMNS for stat in ("mean", "std", "se")]
    + ["table1_bound", "bound_boyer", "bound_okamoto", "bound_hybrid", "ref_younes2008", "ref_younes2013"]
)


def cmd_compare(cfg):
    lams = _lambda_grid(cfg)
    if not lams:
        raise UsageError("at least one lambda is required")
    if cfg["trials"] < 1:
        raise UsageError("trials must be >= 1")
    params = HybridParams(cfg["delta"], cfg["c"], cfg["accounting"], cfg["round_cap"])
    lambda0 = cfg["lambda0"]
    rows, notes = [], []
    for name in cfg["algorithms"].split(","):
        for lam in lams:
            lam0 = lambda0 if lambda0 is not None else (min(lams) if name in ("yoder", "pi3") else None)
            if lam0 is not None and lam0 > lam and name in ("yoder", "pi3"):
                lam0 = lam
            s = run_trials(
                name, lam, cfg["trials"], cfg["seed"], params=params, lambda0=lam0,
                boyer_growth=cfg["boyer_growth"], okamoto_growth=cfg["okamoto_growth"], round_cap=cfg["round_cap"],
            )
            root = math.sqrt(lam)
            row = [name, lam, lam0, s.trials, cfg["accounting"], s.found_rate]
            for col in COUNTER_COLUMNS:
                st = s[col]
                row += [st.mean, st.std, st.se]
            bound = TABLE1.get(name)
            row += [
                None if bound is None else bound / root,
                BOUND_BOYER / root, BOUND_OKAMOTO / root, BOUND_HYBRID / root,
                REF_YOUNES_2008 / root, REF_YOUNES_2013 / root,
            ]
            rows.append(row)
            notes.append(f"{name:8s} lambda={human(lam)}: oracle {human(s['oracle_queries'].mean)}, "
                         f"iterations {human(s['iterations'].mean)}")
    return COMPARE_HEADER, rows, [], "\n".join(notes), 0


def cmd_validate(cfg):
    lams = _lambda_grid(cfg)
    deltas = parse_grid(cfg["delta_grid"])
    ls = parse_grid(cfg["l_grid"], integer=True)
    bound_lams = _lambda_grid(cfg, "bound_lambda_grid")
    results = run_all(lams, deltas, ls, bound_lams, cfg["sv_cases"], cfg["seed"],
                      cfg["sv_max_qubits"], cfg["sv_max_l"], perturb=cfg["perturb"])
    rows, notes = [], []
    for r in results:
        status = "pass" if r.passed else "FAIL"
        rows.append([r.name, status, r.cases, r.max_error, r.tolerance, r.violations, r.warning])
        notes.append(f"{status} {r.name}: {r.cases} cases, max error {human(r.max_error)}")
        if r.warning:
            print(f"warning: {r.name}: {r.warning}", file=sys.stderr)
    code = 0 if all(r.passed for r in results) else 1
    return ["suite", "status", "cases", "max_error", "tolerance", "violations", "warning"], rows, [], "\n".join(notes), code


COMMANDS = {
    "schedule": cmd_schedule,
    "simulate": cmd_simulate,
    "montecarlo": cmd_montecarlo,
    "optimize": cmd_optimize,
    "compare": cmd_compare,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args.command, args)
        header, rows, info, summary, code = COMMANDS[args.command](cfg)
    except (UsageError, ValueError) as exc:
        parser.error(f"{args.command}: {exc}")
    preamble = header_lines(TOOL, __version__, args.command, cfg) + info
    text = render_csv(header, rows, preamble)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        print(summary)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

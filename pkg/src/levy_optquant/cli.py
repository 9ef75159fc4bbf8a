"""Command line interface (``levy-optquant``)."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .cond_sup_law import CondLaw, write_F_grid
from .errors import LevyOptquantError
from .harness.config import EXPERIMENTS, ExperimentConfig
from .harness.experiments import _write_csv, run_experiment, write_outputs
from .local_occupation import (
    baseline_local_time,
    baseline_occupation,
    estimate_local_time,
    estimate_local_time_alt,
    estimate_occupation,
)
from .models import BrownianMotion, model_from_dict
from .param_estimators import DEFAULT_Q, estimate_sigma, estimate_stable_triplet
from .path_sim import read_path_csv, simulate_path, subsample, write_path_csv
from .rng import replicate_seed
from .stable_law import density_table, params_from_skew
from .sup_estimators import sup_report


def _load_json_arg(text):
    """A JSON object given inline or as a file name."""
    if text is None:
        return {}
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text)


def _load_config(args) -> dict:
    return _load_json_arg(args.config) if args.config else {}


def _emit(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        d = os.path.dirname(out)
        if d:
            os.makedirs(d, exist_ok=True)
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _out_file(args, default_name):
    """``--out`` may name a directory (file goes inside) or a file."""
    if not args.out:
        return None
    if args.out.endswith(os.sep) or os.path.isdir(args.out) or not os.path.splitext(args.out)[1]:
        os.makedirs(args.out, exist_ok=True)
        return os.path.join(args.out, default_name)
    return args.out


# --------------------------------------------------------------------------


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.load(args.name, args.config, seed=args.seed, workers=args.workers)
    summary = run_experiment(cfg)
    out = args.out or os.path.join("results", args.name)
    for name in write_outputs(cfg, summary, out):
        print(os.path.join(out, name))
    return 0


def cmd_simulate_limit(args) -> int:
    raw = _load_config(args)
    model = model_from_dict(raw.get("model", {"kind": "bm"}))
    experiment = "table1" if isinstance(model, BrownianMotion) else "table2"
    if args.replicates:
        raw["replicates"] = args.replicates
    cfg = ExperimentConfig.from_dict(experiment, raw, seed=args.seed, workers=args.workers)
    summary = run_experiment(cfg)
    out = _out_file(args, "limit_variates.csv") or "limit_variates.csv"
    cols = summary["columns"]
    _write_csv(out, cols, [summary["variates"][c] for c in cols])
    print(out)
    return 0


def cmd_simulate_path(args) -> int:
    model = model_from_dict(_load_json_arg(args.model) if args.model else _load_config(args).get("model", {"kind": "bm"}))
    path = simulate_path(model, args.n, replicate_seed(args.seed or 0, 0))
    out = _out_file(args, "path.csv") or "path.csv"
    write_path_csv(path, out)
    print(out)
    return 0


def _estimated(path, kind, q):
    return estimate_sigma(path) if kind == "bm" else estimate_stable_triplet(path, q)


def cmd_estimate_sup(args) -> int:
    path = read_path_csv(args.input)
    spec = _load_json_arg(args.model) if args.model else _load_config(args).get("model", {"kind": "bm"})
    if args.plugin:
        est = _estimated(path, spec.get("kind", "bm"), args.q)
        model = est.to_model(one_sided=True)
    else:
        model = model_from_dict(spec)
    report = sup_report(path, model, args.method, args.k)
    d = report.as_dict()
    d["plugin"] = bool(args.plugin)
    _emit(d, _out_file(args, "estimate_sup.json"))
    return 0


_LOCAL = {
    ("local", "mean"): lambda p, a: estimate_local_time(p, a.sigma, a.t, a.level, not a.lenient),
    ("local", "baseline"): lambda p, a: baseline_local_time(p, a.t, a.level, not a.lenient),
    ("local", "altkernel"): lambda p, a: estimate_local_time_alt(p, a.sigma, a.t, a.level, not a.lenient),
    ("occupation", "mean"): lambda p, a: estimate_occupation(p, a.sigma, a.t, a.level, not a.lenient),
    ("occupation", "baseline"): lambda p, a: baseline_occupation(p, a.t, a.level, not a.lenient),
}


def cmd_estimate_local(args) -> int:
    key = (args.quantity, args.method)
    if key not in _LOCAL:
        raise SystemExit(f"method {args.method!r} is not available for {args.quantity}")
    est = _LOCAL[key]
    if args.batch:
        # error samples against a fine-grid reference on the same paths
        model = BrownianMotion(0.0, args.sigma)
        ref_fn = estimate_local_time if args.quantity == "local" else estimate_occupation
        rate = args.n ** (0.25 if args.quantity == "local" else 0.75)
        rows = [[], [], [], []]
        for i in range(args.batch):
            fine = simulate_path(model, args.n_ref, replicate_seed(args.seed or 0, i))
            coarse = subsample(fine, args.n)
            ref = ref_fn(fine, args.sigma, args.t, args.level).value
            val = est(coarse, args).value
            for col, v in zip(rows, (i, val, ref, rate * (val - ref))):
                col.append(v)
        out = _out_file(args, "local_errors.csv") or "local_errors.csv"
        _write_csv(out, ["replicate", "estimate", "reference", "scaled_error"], [np.array(c) for c in rows])
        print(out)
        return 0
    if not args.input:
        raise SystemExit("--input is required unless --batch is given")
    path = read_path_csv(args.input)
    d = est(path, args).as_dict()
    d["quantity"] = args.quantity
    _emit(d, _out_file(args, "estimate_local.json"))
    return 0


def cmd_estimate_params(args) -> int:
    path = read_path_csv(args.input)
    est = _estimated(path, args.model_kind, args.q)
    _emit(est.as_dict(), _out_file(args, "estimate_params.json"))
    return 0


def cmd_debug_F(args) -> int:
    raw = _load_config(args)
    spec = _load_json_arg(args.model) if args.model else raw.get("model", {"kind": "stable", "alpha": 1.8, "beta": -1.0})
    law = CondLaw(model_from_dict(spec))
    xs = np.linspace(*args.x_grid[:2], int(args.x_grid[2]))
    ys = np.linspace(*args.y_grid[:2], int(args.y_grid[2]))
    out = _out_file(args, "F_grid.csv") or "F_grid.csv"
    write_F_grid(law, xs, ys, out)
    print(out)
    return 0


def cmd_debug_density(args) -> int:
    p = params_from_skew(args.alpha, args.beta, args.scale)
    out = _out_file(args, "density.csv") or "density.csv"
    density_table(p).to_csv(out)
    print(out)
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--seed", type=int, help="experiment seed (default: from config, else 0)")
    common.add_argument("--out", help="output directory or file")
    common.add_argument("--workers", type=int)

    p = argparse.ArgumentParser(prog="levy-optquant", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("experiment", parents=[common], help="run a table or figure experiment")
    s.add_argument("name", choices=EXPERIMENTS)
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("simulate-limit", parents=[common], help="draw limit variates (CSV)")
    s.add_argument("--replicates", type=int)
    s.set_defaults(func=cmd_simulate_limit)

    s = sub.add_parser("simulate-path", parents=[common], help="simulate observations (CSV i,x)")
    s.add_argument("--model", help="model JSON (inline or file)")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_simulate_path)

    s = sub.add_parser("estimate-sup", parents=[common], help="estimate the supremum of a path")
    s.add_argument("--input", required=True)
    s.add_argument("--model", help='model JSON, e.g. {"kind": "bm", "sigma": 1}')
    s.add_argument("--method", choices=["max", "mean", "median"], default="mean")
    s.add_argument("--k", type=int)
    s.add_argument("--plugin", action="store_true", help="pre-estimate the model from the path")
    s.add_argument("--q", type=float, default=DEFAULT_Q)
    s.set_defaults(func=cmd_estimate_sup)

    s = sub.add_parser("estimate-local", parents=[common], help="estimate local or occupation time")
    s.add_argument("--input")
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--level", type=float, default=0.0)
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--method", choices=["mean", "baseline", "altkernel"], default="mean")
    s.add_argument("--quantity", choices=["local", "occupation"], default="local")
    s.add_argument("--lenient", action="store_true", help="allow non-integral n t")
    s.add_argument("--batch", type=int, help="simulate this many paths and write error samples")
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--n-ref", type=int, default=10000)
    s.set_defaults(func=cmd_estimate_local)

    s = sub.add_parser("estimate-params", parents=[common], help="pre-estimate model parameters")
    s.add_argument("--input", required=True)
    s.add_argument("--model-kind", choices=["bm", "stable"], default="bm")
    s.add_argument("--q", type=float, default=DEFAULT_Q)
    s.set_defaults(func=cmd_estimate_params)

    s = sub.add_parser("debug-F", parents=[common], help="dump F on an (x, y) grid (CSV x,y,F)")
    s.add_argument("--model")
    s.add_argument("--x-grid", type=float, nargs=3, default=[0.0, 4.0, 81], metavar=("LO", "HI", "NUM"))
    s.add_argument("--y-grid", type=float, nargs=3, default=[-4.0, 3.0, 71], metavar=("LO", "HI", "NUM"))
    s.set_defaults(func=cmd_debug_F)

    s = sub.add_parser("debug-density", parents=[common], help="export a density table (CSV x,f)")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--beta", type=float, default=0.0)
    s.add_argument("--scale", type=float, default=1.0)
    s.set_defaults(func=cmd_debug_density)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LevyOptquantError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

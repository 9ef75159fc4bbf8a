"""Monte Carlo experiments: limit-law tables, local/occupation time, figure data.

Every replicate draws from its own stream ``replicate_rng(seed, i)``, and
outputs are written with a fixed float format, so a given configuration and
seed always yields byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
import time
from dataclasses import replace
from functools import partial
from typing import Dict, List, Sequence

import numpy as np

from ..cond_sup_law import CondLaw, write_F_grid
from ..limit_sampler import (
    BM_POLICY,
    STABLE_POLICY,
    draw_bessel_limit,
    draw_stable_prelimit,
    limit_H,
    limit_variates,
)
from ..local_occupation import (
    V_ALT2,
    V_L2,
    V_O2,
    baseline_local_time,
    baseline_occupation,
    estimate_local_time,
    estimate_local_time_alt,
    estimate_occupation,
)
from ..models import StableModel, expected_V, model_from_dict
from ..path_sim import simulate_path, subsample
from ..rng import replicate_rng, replicate_seed
from ..stable_law import density_table
from .config import ExperimentConfig
from .runner import run_replicates
from .stats import kde, summarize

__all__ = [
    "ExperimentSummary",
    "run_table1",
    "run_table2",
    "run_localocc",
    "run_fgrid",
    "run_hsamples",
    "run_experiment",
    "write_outputs",
]


class ExperimentSummary(dict):
    """``rows`` (per-estimator statistics), ``kde`` curves and ``metadata``."""

    @property
    def rows(self) -> Dict[str, dict]:
        return self["rows"]


def _fmt(v) -> str:
    return repr(float(v))


def _write_csv(path, header: Sequence[str], columns: Sequence[np.ndarray]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(header))
        for row in zip(*columns):
            w.writerow([_fmt(v) for v in row])


def _write_json(path, obj) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True))
        fh.write("\n")


def _grid(spec) -> np.ndarray:
    lo, hi, num = spec
    return np.linspace(float(lo), float(hi), int(num))


def _kde_block(samples: Dict[str, np.ndarray], grid: np.ndarray):
    curves, bws = {}, {}
    for name, s in samples.items():
        curves[name], bws[name] = kde(s, grid)
    return curves, bws


def _versions() -> dict:
    from .. import __version__
    import scipy

    return {"levy_optquant": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


# --------------------------------------------------------------------------
# table 1: Brownian limit
# --------------------------------------------------------------------------


def _table1_replicate(i, seed, sigma, K, k_list):
    from ..models import BrownianMotion

    law = CondLaw(BrownianMotion(0.0, sigma))
    draw = draw_bessel_limit(sigma, K, replicate_rng(seed, i))
    return limit_variates(draw, law, k_list, BM_POLICY).row(k_list)


def _columns(k_list) -> List[str]:
    return ["V", "V_mean", "V_med", "V_shift"] + [f"V_mean_{k}" for k in k_list]


def run_table1(cfg: ExperimentConfig) -> ExperimentSummary:
    """Limit errors of the supremum estimators for Brownian motion."""
    model = model_from_dict(cfg["model"])
    k_list = [int(k) for k in cfg["k_list"]]
    fn = partial(_table1_replicate, seed=cfg.seed, sigma=model.sigma, K=int(cfg["K"]), k_list=k_list)
    rows = np.array(run_replicates(fn, int(cfg["replicates"]), cfg.workers))
    # errors are reported in units of sigma
    rows = rows / model.sigma
    cols = _columns(k_list)
    variates = {c: rows[:, j] for j, c in enumerate(cols)}
    grid = _grid(cfg["kde_grid"])
    fig1, bw1 = _kde_block({c: variates[c] for c in ("V", "V_mean", "V_med")}, grid)
    fig2_cols = ["V_shift", "V_mean"] + ([f"V_mean_{k_list[0]}"] if k_list else [])
    fig2, bw2 = _kde_block({c: variates[c] for c in fig2_cols}, grid)
    return ExperimentSummary(
        experiment=cfg.experiment,
        columns=cols,
        rows={c: summarize(variates[c]) for c in cols},
        variates=variates,
        figures={
            "figure1": (["x"] + list(fig1), [grid] + list(fig1.values())),
            "figure2": (["x"] + list(fig2), [grid] + list(fig2.values())),
        },
        kde={"figure1": bw1, "figure2": bw2},
        metadata={"E_V": expected_V(model), "replicates": int(cfg["replicates"])},
    )


# --------------------------------------------------------------------------
# table 2: stable pre-limit
# --------------------------------------------------------------------------


def _stable_policy(cfg):
    return replace(
        STABLE_POLICY,
        step=float(cfg["step"]),
        x_max=float(cfg["x_max"]),
        truncation=int(cfg["truncation"]) if cfg["truncation"] is not None else None,
    )


def _table2_replicate(i, seed, model_dict, n, m, policy, k_list):
    model = model_from_dict(model_dict)
    law = CondLaw(model)
    draw = draw_stable_prelimit(model.params, n, m, replicate_seed(seed, i))
    return limit_variates(draw, law, k_list, policy).row(k_list)


def run_table2(cfg: ExperimentConfig) -> ExperimentSummary:
    """Pre-limit errors of the supremum estimators for a one-sided stable process."""
    model = model_from_dict(cfg["model"])
    if not isinstance(model, StableModel):
        raise ValueError("table2 needs a stable model")
    density_table(model.params)  # build before forking
    k_list = [int(k) for k in cfg["k_list"]]
    fn = partial(
        _table2_replicate,
        seed=cfg.seed,
        model_dict=cfg["model"],
        n=int(cfg["n"]),
        m=int(cfg["m"]),
        policy=_stable_policy(cfg),
        k_list=k_list,
    )
    rows = np.array(run_replicates(fn, int(cfg["replicates"]), cfg.workers))
    rows = rows / model.params.scale
    cols = _columns(k_list)
    variates = {c: rows[:, j] for j, c in enumerate(cols)}
    grid = _grid(cfg["kde_grid"])
    fig5, bw5 = _kde_block({c: variates[c] for c in ("V", "V_mean", "V_med")}, grid)
    return ExperimentSummary(
        experiment=cfg.experiment,
        columns=cols,
        rows={c: summarize(variates[c]) for c in cols},
        variates=variates,
        figures={"figure5": (["x"] + list(fig5), [grid] + list(fig5.values()))},
        kde={"figure5": bw5},
        metadata={"E_V": expected_V(model), "replicates": int(cfg["replicates"]), "params": model.as_dict()},
    )


# --------------------------------------------------------------------------
# local time and occupation time
# --------------------------------------------------------------------------


def _localocc_replicate(i, seed, model_dict, n, n_ref, x, t):
    model = model_from_dict(model_dict)
    sigma = model.sigma
    fine = simulate_path(model, n_ref, replicate_seed(seed, i))
    coarse = subsample(fine, n)
    z = replicate_rng(seed, i, 99).standard_normal(2)
    L_ref = estimate_local_time(fine, sigma, t, x).value
    O_ref = estimate_occupation(fine, sigma, t, x).value
    return (
        L_ref,
        O_ref,
        estimate_local_time(coarse, sigma, t, x).value,
        baseline_local_time(coarse, t, x).value,
        estimate_local_time_alt(coarse, sigma, t, x).value,
        estimate_occupation(coarse, sigma, t, x).value,
        baseline_occupation(coarse, t, x).value,
        z[0],
        z[1],
    )


def run_localocc(cfg: ExperimentConfig) -> ExperimentSummary:
    """Conditional-mean versus counting estimators of ``L_t(x)`` and ``O_t(x)``."""
    model = model_from_dict(cfg["model"])
    n, n_ref = int(cfg["n"]), int(cfg["n_ref"])
    x, t = float(cfg["x"]), float(cfg["t"])
    fn = partial(_localocc_replicate, seed=cfg.seed, model_dict=cfg["model"], n=n, n_ref=n_ref, x=x, t=t)
    res = np.array(run_replicates(fn, int(cfg["replicates"]), cfg.workers))
    L_ref, O_ref, L_hat, L_base, L_alt, O_hat, O_base, z1, z2 = res.T
    sigma = model.sigma
    a, b = n**0.25, n**0.75
    err = {
        "local_mean": a * (L_hat - L_ref),
        "local_baseline": a * (L_base - L_ref),
        "local_alt": a * (L_alt - L_ref),
        "occ_mean": b * (O_hat - O_ref),
        "occ_baseline": b * (O_base - O_ref),
    }
    # limit laws: mixed normals driven by the reference local time
    lim_local = math.sqrt(V_L2 / sigma) * np.sqrt(np.maximum(L_ref, 0.0)) * z1
    lim_occ = math.sqrt(V_O2 * sigma) * np.sqrt(np.maximum(L_ref, 0.0)) * z2
    var = {k: float(np.var(v)) for k, v in err.items()}
    ratios = {
        "local_baseline_over_mean": var["local_baseline"] / var["local_mean"],
        "occ_baseline_over_mean": var["occ_baseline"] / var["occ_mean"],
        "local_alt_over_mean": var["local_alt"] / var["local_mean"],
        "limit_alt_over_mean": V_ALT2 / V_L2,
    }
    g6 = _grid(cfg["kde_grid"])
    g7 = _grid(cfg["kde_grid_occ"])
    f6, bw6 = _kde_block({"limit": lim_local, "prelimit": err["local_mean"], "baseline": err["local_baseline"]}, g6)
    f7, bw7 = _kde_block({"limit": lim_occ, "prelimit": err["occ_mean"], "baseline": err["occ_baseline"]}, g7)
    variates = dict(err)
    variates.update(L_ref=L_ref, O_ref=O_ref)
    return ExperimentSummary(
        experiment=cfg.experiment,
        columns=list(err),
        rows={k: summarize(v) for k, v in err.items()},
        variates=variates,
        figures={
            "figure6": (["x"] + list(f6), [g6] + list(f6.values())),
            "figure7": (["x"] + list(f7), [g7] + list(f7.values())),
        },
        kde={"figure6": bw6, "figure7": bw7},
        metadata={
            "variance_ratios": ratios,
            "constants": {"v_l2": V_L2, "v_o2": V_O2, "v_alt2": V_ALT2},
            "mean_L_ref": float(np.mean(L_ref)),
            "replicates": int(cfg["replicates"]),
        },
    )


# --------------------------------------------------------------------------
# figure data without a table
# --------------------------------------------------------------------------


def run_fgrid(cfg: ExperimentConfig) -> ExperimentSummary:
    """F(x, y) on a rectangular grid."""
    model = model_from_dict(cfg["model"])
    law = CondLaw(model)
    xs, ys = _grid(cfg["x_grid"]), _grid(cfg["y_grid"])
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    F = law.F(X, Y)
    return ExperimentSummary(
        experiment=cfg.experiment,
        columns=[],
        rows={},
        variates={},
        figures={"figure3": (["x", "y", "F"], [X.ravel(), Y.ravel(), F.ravel()])},
        kde={},
        metadata={"params": model.as_dict()},
        law=law,
    )


def _hsample_replicate(i, seed, model_dict, n, m, policy, xs):
    model = model_from_dict(model_dict)
    law = CondLaw(model)
    draw = draw_stable_prelimit(model.params, n, m, replicate_seed(seed, i))
    return 1.0 - limit_H(draw, law, xs, policy.truncation)


def run_hsamples(cfg: ExperimentConfig) -> ExperimentSummary:
    """Samples of ``1 - H(x)`` from the stable pre-limit on the quadrature grid."""
    model = model_from_dict(cfg["model"])
    policy = _stable_policy(cfg)
    xs = np.arange(int(round(policy.x_max / policy.step)) + 1) * policy.step
    fn = partial(
        _hsample_replicate,
        seed=cfg.seed,
        model_dict=cfg["model"],
        n=int(cfg["n"]),
        m=int(cfg["m"]),
        policy=policy,
        xs=xs,
    )
    curves = run_replicates(fn, int(cfg["replicates"]), cfg.workers)
    header = ["x"] + [f"draw_{i}" for i in range(len(curves))]
    return ExperimentSummary(
        experiment=cfg.experiment,
        columns=[],
        rows={},
        variates={},
        figures={"figure4": (header, [xs] + list(curves))},
        kde={},
        metadata={"params": model.as_dict(), "replicates": len(curves)},
    )


_RUNNERS = {
    "table1": run_table1,
    "table2": run_table2,
    "localocc": run_localocc,
    "fgrid": run_fgrid,
    "hsamples": run_hsamples,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentSummary:
    start = time.perf_counter()
    summary = _RUNNERS[cfg.source](cfg)
    summary["runtime_seconds"] = time.perf_counter() - start
    return summary


def write_outputs(cfg: ExperimentConfig, summary: ExperimentSummary, out_dir: str) -> List[str]:
    """Write ``config.json``, ``summary.json`` and the CSV files into ``out_dir``.

    Table runs write every figure they feed; ``figureN`` runs only figure N.
    Wall-clock time is printed to stderr and kept out of the files.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    _write_json(os.path.join(out_dir, "config.json"), cfg.as_dict())
    written.append("config.json")
    meta = dict(summary["metadata"])
    meta.update(seed=cfg.seed, versions=_versions())
    doc = {
        "experiment": cfg.experiment,
        "columns": summary["columns"],
        "rows": summary["rows"],
        "kde_bandwidths": summary["kde"],
        "metadata": meta,
    }
    _write_json(os.path.join(out_dir, "summary.json"), doc)
    written.append("summary.json")
    figures = summary["figures"]
    if cfg.experiment.startswith("figure"):
        figures = {cfg.experiment: figures[cfg.experiment]}
    else:
        cols = summary["columns"]
        if cols:
            _write_csv(os.path.join(out_dir, "variates.csv"), cols, [summary["variates"][c] for c in cols])
            written.append("variates.csv")
    for name, (header, columns) in sorted(figures.items()):
        _write_csv(os.path.join(out_dir, f"{name}.csv"), header, columns)
        written.append(f"{name}.csv")
    if "runtime_seconds" in summary:
        print(f"{cfg.experiment}: {summary['runtime_seconds']:.1f} s", file=sys.stderr)
    return written

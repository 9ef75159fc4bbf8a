"""Experiment configuration with per-experiment defaults."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

EXPERIMENTS = ("table1", "table2", "localocc") + tuple(f"figure{i}" for i in range(1, 8))

# which experiment produces the data of each figure
FIGURE_SOURCE = {
    "figure1": "table1",
    "figure2": "table1",
    "figure3": "fgrid",
    "figure4": "hsamples",
    "figure5": "table2",
    "figure6": "localocc",
    "figure7": "localocc",
}

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "table1": {
        "model": {"kind": "bm", "mu": 0.0, "sigma": 1.0},
        "replicates": 10000,
        "K": 50,
        "k_list": [1],
        "kde_grid": [-2.0, 4.0, 601],
    },
    "table2": {
        "model": {"kind": "stable", "alpha": 1.8, "beta": -1.0, "scale": 1.0},
        "replicates": 1000,
        "n": 300,
        "m": 300,
        "truncation": 15,
        "step": 0.1,
        "x_max": 3.0,
        "k_list": [],
        "kde_grid": [-2.0, 5.0, 701],
    },
    "localocc": {
        "model": {"kind": "bm", "mu": 0.0, "sigma": 1.0},
        "replicates": 10000,
        "n": 100,
        "n_ref": 10000,
        "x": 0.0,
        "t": 1.0,
        "kde_grid": [-4.0, 4.0, 801],
        "kde_grid_occ": [-1.5, 1.5, 601],
    },
    "fgrid": {
        "model": {"kind": "stable", "alpha": 1.8, "beta": -1.0, "scale": 1.0},
        "x_grid": [0.0, 4.0, 81],
        "y_grid": [-4.0, 3.0, 71],
    },
    "hsamples": {
        "model": {"kind": "stable", "alpha": 1.8, "beta": -1.0, "scale": 1.0},
        "replicates": 20,
        "n": 300,
        "m": 300,
        "truncation": 15,
        "step": 0.1,
        "x_max": 3.0,
    },
}


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 0
    workers: int = 1
    out: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    tolerances: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS and self.experiment not in DEFAULTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        base = copy.deepcopy(DEFAULTS[self.source])
        base.update(self.params)
        self.params = base
        reps = self.params.get("replicates", 1)
        if int(reps) < 1:
            raise ValueError("replicates must be >= 1")

    @property
    def source(self) -> str:
        return FIGURE_SOURCE.get(self.experiment, self.experiment)

    def __getitem__(self, key):
        return self.params[key]

    def get(self, key, default=None):
        return self.params.get(key, default)

    def as_dict(self) -> dict:
        """Echo written to ``config.json`` (output directory and worker count excluded)."""
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "params": self.params,
            "tolerances": self.tolerances,
        }

    @classmethod
    def from_dict(cls, experiment: str, d: Optional[dict] = None, **overrides) -> "ExperimentConfig":
        """Build a config; keys other than seed/workers/out/tolerances are parameters."""
        d = dict(d or {})
        d.pop("experiment", None)
        nested = d.pop("params", {})
        seed = d.pop("seed", 0)
        workers = d.pop("workers", 1)
        out = d.pop("out", None)
        tol = d.pop("tolerances", {})
        params = dict(nested)
        params.update(d)
        cfg = dict(seed=seed, workers=workers, out=out, tolerances=tol)
        cfg.update({k: v for k, v in overrides.items() if v is not None})
        return cls(experiment, params=params, **cfg)

    @classmethod
    def load(cls, experiment: str, path: Optional[str] = None, **overrides) -> "ExperimentConfig":
        d = {}
        if path:
            with open(path, encoding="utf-8") as fh:
                d = json.load(fh)
        return cls.from_dict(experiment, d, **overrides)

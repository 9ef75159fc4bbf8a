"""Experiment orchestration: configuration, replicate loops, statistics, persistence."""

from .config import EXPERIMENTS, ExperimentConfig
from .experiments import (
    ExperimentSummary,
    run_experiment,
    run_fgrid,
    run_hsamples,
    run_localocc,
    run_table1,
    run_table2,
    write_outputs,
)
from .runner import run_replicates
from .stats import kde, shortest_ci, silverman_bandwidth, summarize

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentSummary",
    "run_experiment",
    "run_fgrid",
    "run_hsamples",
    "run_localocc",
    "run_table1",
    "run_table2",
    "write_outputs",
    "run_replicates",
    "kde",
    "shortest_ci",
    "silverman_bandwidth",
    "summarize",
]

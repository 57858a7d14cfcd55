"""Experiment orchestration and the command-line interface."""

from .config import SUITES, ExperimentConfig
from .experiment import ExperimentRecord, run_experiment, run_replicate

__all__ = ["SUITES", "ExperimentConfig", "ExperimentRecord", "run_experiment", "run_replicate"]

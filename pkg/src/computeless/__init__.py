"""Simulator of compute-less edge networking with LSH-based computation reuse."""

__version__ = "0.1.0"

from .engine import Scenario, Strategy, run_experiment, run_trial  # noqa: E402

__all__ = ["Scenario", "Strategy", "run_experiment", "run_trial", "__version__"]

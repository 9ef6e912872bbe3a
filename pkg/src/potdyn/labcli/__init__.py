"""Command-line experiment harness."""

from .config import ExperimentConfig, parse_set
from .experiments import (
    EXPERIMENTS,
    run_experiment,
    run_hausdorff_dichotomy,
    run_lemma31,
    run_limitset_check,
    run_minimality,
    run_render,
    run_thm_brolin,
    run_thm_klimek,
)

__all__ = [
    "EXPERIMENTS", "ExperimentConfig", "parse_set", "run_experiment",
    "run_hausdorff_dichotomy", "run_lemma31", "run_limitset_check", "run_minimality",
    "run_render", "run_thm_brolin", "run_thm_klimek",
]

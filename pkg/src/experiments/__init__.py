"""Experiment configs, runner, fixtures, acceptance suites and the batch CLI"""
from .config import ExperimentConfig, load_config, parse_config, save_config
from .runner import ExperimentResult, ExperimentRunner, report_digest, run_experiment
from .fixtures import FixtureStore, builtin_potential_suite, make_fixtures
from .acceptance import AcceptanceSuite, CriterionResult, run_acceptance

__all__ = [
    "AcceptanceSuite",
    "CriterionResult",
    "ExperimentConfig",
    "ExperimentResult",
    "ExperimentRunner",
    "FixtureStore",
    "builtin_potential_suite",
    "load_config",
    "make_fixtures",
    "parse_config",
    "report_digest",
    "run_acceptance",
    "run_experiment",
    "save_config",
]

"""Batch command line: run, sweep, fixtures, verify"""
import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from src.config.logger import set_log_level, setup_logger
from src.config.settings import settings
from src.experiments.acceptance import run_acceptance
from src.experiments.config import ExperimentConfig, load_config
from src.experiments.fixtures import FIXTURE_SUITES, FixtureStore, make_fixtures
from src.experiments.runner import ExperimentRunner, apply_overrides
from src.safety.guards import ConfigError, ErrorHandler

logger = setup_logger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Experiment config (JSON)")
    common.add_argument("--output-dir", type=Path, default=None,
                        help=f"Output directory (default: config outputs.directory or {settings.reports_path})")
    common.add_argument("--seed", type=int, default=None, help="Override the config seed")
    common.add_argument("--top-k", type=int, default=None, help="Outcomes kept in the report distribution")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level")

    parser = argparse.ArgumentParser(
        prog="run_experiment",
        description="Ground-state energy estimation by simulated phase estimation.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)
    verbs.add_parser("run", parents=[common], help="Run one experiment and write its report")
    verbs.add_parser("sweep", parents=[common], help="Run every (d, q, b) point of the config sweep")
    fixtures = verbs.add_parser("fixtures", parents=[common], help="Compute and store oracle fixtures")
    fixtures.add_argument("--suite", default="all", choices=sorted(FIXTURE_SUITES) + ["all"])
    verify = verbs.add_parser("verify", parents=[common], help="Run the acceptance suites")
    verify.add_argument("--criteria", type=int, nargs="*", default=None, help="Criterion numbers (default: all)")
    return parser


def _load(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is None:
        raise ConfigError(f"The '{args.verb}' verb needs --config")
    return apply_overrides(load_config(args.config), seed=args.seed, top_k=args.top_k)


def cmd_run(args: argparse.Namespace) -> int:
    result = ExperimentRunner(args.output_dir).run(_load(args))
    print(json.dumps({
        "report": str(result.report_path),
        "passed": result.passed,
        "estimate": result.report["estimate"]["energy"],
        "success_mass": result.report["success"]["success_mass"],
    }, indent=2))
    return EXIT_PASS if result.passed else EXIT_FAIL


def cmd_sweep(args: argparse.Namespace) -> int:
    results = ExperimentRunner(args.output_dir).sweep(_load(args))
    print(json.dumps({"points": len(results), "passed": sum(r.passed for r in results)}, indent=2))
    return EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL


def cmd_fixtures(args: argparse.Namespace) -> int:
    store = FixtureStore(args.output_dir) if args.output_dir is not None else FixtureStore()
    paths = make_fixtures(args.suite, store, seed=args.seed or 0)
    print(json.dumps({"fixtures": [str(p) for p in paths]}, indent=2))
    return EXIT_PASS


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_acceptance(args.criteria, seed=args.seed or 0)
    directory = args.output_dir or settings.reports_path
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / "acceptance.json"
    target.write_text(json.dumps([r.to_dict() for r in results], indent=2, sort_keys=True, default=str) + "\n",
                      encoding="utf-8")
    for result in results:
        print(f"[{'PASS' if result.passed else 'FAIL'}] {result.number}. {result.name}")
    return EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "fixtures": cmd_fixtures,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_log_level(args.log_level)
    try:
        return COMMANDS[args.verb](args)
    except Exception as e:
        diagnostic = ErrorHandler.handle_exception(e, context=args.verb)
        print(json.dumps(diagnostic, indent=2), file=sys.stderr)
        return diagnostic["exit_code"]


if __name__ == "__main__":
    sys.exit(main())

from argparse import Namespace
from src.io import ConfigError
from .config import ExperimentConfig, build_config
from .experiments import EXPERIMENTS
from .report import write_report

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_INVALID_CONFIG = 2

def run(config: ExperimentConfig) -> int:
    """runs the experiment of config.command and writes its reports

    Args:
        config (ExperimentConfig): validated config

    Returns:
        int: 0 if every check passed, 1 otherwise
    """
    assert config.command in EXPERIMENTS.keys(), f"Only {list(EXPERIMENTS.keys())} commands are supported, not {config.command}"
    if config.verbose:
        print(f"> Running {config.command} with n={config.n}, resolution={config.resolution}, seeds={config.seeds}")
    result = EXPERIMENTS[config.command](config)
    report = write_report(config, result)
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    if config.verbose:
        print(f"> {len(report['checks']) - len(failed)}/{len(report['checks'])} checks passed, report saved at {config.report_path}")
        for name in failed:
            print(f"> FAILED {name}")
    return EXIT_PASSED if report["passed"] else EXIT_FAILED

def execute(args: Namespace) -> int:
    """CLI entry: config errors map to exit status 2"""
    try:
        config = build_config(args)
    except ConfigError as exc:
        print(f"> Invalid configuration: {exc}")
        return EXIT_INVALID_CONFIG
    return run(config)

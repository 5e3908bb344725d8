from .config import ExperimentConfig, build_config, parse_int_list, COMMANDS, VERIFY_CHECKS
from .report import Check, ExperimentResult, assemble_report, write_report, build_metadata
from .experiments import EXPERIMENTS, axis_metric, run_cases
from .run import run, execute, EXIT_PASSED, EXIT_FAILED, EXIT_INVALID_CONFIG

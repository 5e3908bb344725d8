import scipy
import datetime
import subprocess
import numpy as np
from src.fields import Grid
from src.qcurv import exact_constants
from src.io import save_csv, save_json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
from .config import ExperimentConfig

REPORT_SCHEMA = 1
VERSION = "0.1.0"

@dataclass
class Check:
    """one pass/fail measurement: value against an upper (or lower) threshold"""
    name: str
    value: float
    threshold: float
    bound: str = "upper"
    details: Dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0

    def __post_init__(self):
        assert self.bound in ["upper", "lower"], f"Bound {self.bound} not supported. Choose between upper or lower."
        self.value = float(self.value)

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return self.bound == "lower" and self.value == float("inf")
        return self.value <= self.threshold if self.bound == "upper" else self.value >= self.threshold

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "bound": self.bound,
            "passed": self.passed,
            "details": self.details
        }


@dataclass
class ExperimentResult:
    checks: List[Check] = field(default_factory=list)
    grids: List[Grid] = field(default_factory=list)
    dims: List[int] = field(default_factory=list)
    rows: List[Dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return len(self.checks) > 0 and all(c.passed for c in self.checks)

    def add(self, check: Check, grid: Optional[Grid] = None):
        self.checks.append(check)
        if grid is not None:
            if grid not in self.grids:
                self.grids.append(grid)
            if grid.dim not in self.dims:
                self.dims.append(grid.dim)


def _git_describe() -> Optional[str]:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=5
        )
    except (OSError, subprocess.SubprocessError):
        return None
    return out.stdout.strip() if out.returncode == 0 and out.stdout.strip() else None

def build_metadata() -> Dict[str, Optional[str]]:
    """package versions and git describe --always --dirty of the current checkout"""
    return {
        "version": VERSION,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "git": _git_describe()
    }

def assemble_report(config: ExperimentConfig, result: ExperimentResult) -> Dict:
    """report payload: {schema, command, created, build, config, grid, constants, checks, passed}"""
    dims = sorted({n for n in result.dims if n >= 3})
    return {
        "schema": REPORT_SCHEMA,
        "command": config.command,
        "created": datetime.datetime.now().isoformat(timespec="seconds"),
        "build": build_metadata(),
        "config": config.to_dict(),
        "grid": [g.to_dict() for g in result.grids],
        "constants": {str(n): exact_constants(n).to_dict() for n in dims},
        "checks": [c.to_dict() for c in result.checks],
        "passed": result.passed
    }

def write_report(config: ExperimentConfig, result: ExperimentResult) -> Dict:
    """writes the JSON report, the CSV table (when the command has one) and the per-check timings

    Returns:
        Dict: report payload
    """
    report = assemble_report(config, result)
    save_json(config.report_path, report)
    if len(result.rows) > 0:
        save_csv(config.table_path, result.rows)
    save_csv(
        config.timings_path,
        [{"check": c.name, "elapsed": f"{c.elapsed:.6f}"} for c in result.checks],
        header=["check", "elapsed"]
    )
    return report

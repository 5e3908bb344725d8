import os
from argparse import Namespace
from src.io import ConfigError, load_config
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Union

VERIFY_CHECKS = ["adjoint", "gamma-fd", "trace", "conformal", "diffeo", "decomposition"]
COMMANDS = [f"verify_{c.replace('-', '_')}" for c in VERIFY_CHECKS] + [
    "gbc",
    "models",
    "prescribe",
    "rigidity",
    "secondvar"
]
MAX_DIM = 64

def parse_int_list(value: Union[str, int, List[int]]) -> List[int]:
    """'a..b' (inclusive), 'a,b,c', a single int or a list of ints"""
    if isinstance(value, bool):
        raise ConfigError(f"Expected integers, got {value!r}")
    if isinstance(value, int):
        return [value]
    if isinstance(value, (list, tuple)):
        out = []
        for v in value:
            out.extend(parse_int_list(v))
        return out
    text = str(value).strip()
    try:
        if ".." in text:
            start, stop = text.split("..")
            start, stop = int(start), int(stop)
            if stop < start:
                raise ConfigError(f"Empty range {text}")
            return list(range(start, stop + 1))
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError(f"Cannot read integers from {value!r}, use a..b or a comma list")


@dataclass
class ExperimentConfig:
    """settings of one subcommand, config section first and CLI flags on top

    Args:
        command (str): subcommand key (verify_adjoint, gbc, models, ...)
        n (List[int]): torus (or model) dimensions
        resolution (List[int]): grid points per axis, one per dimension or a single shared value
        seeds (List[int]): random seeds
        amplitude (float): sup-norm of random perturbations
        max_mode (int): band limit of random fields
        tol (float): pass threshold of the command's checks
        max_iter (int): max solver iterations
        trials (int): rigidity trials
        halvings (int): rigidity amplitude halvings
        output (str): report directory
        verbose (bool): print progress
    """
    command: str
    n: List[int] = field(default_factory=lambda: [3])
    resolution: List[int] = field(default_factory=lambda: [24])
    seeds: List[int] = field(default_factory=lambda: [0])
    amplitude: float = 0.05
    max_mode: int = 2
    tol: float = 1e-7
    max_iter: int = 30
    trials: int = 10
    halvings: int = 2
    output: str = "output"
    verbose: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"Only {COMMANDS} commands are supported, not {self.command}")
        self.n = parse_int_list(self.n)
        self.resolution = parse_int_list(self.resolution)
        self.seeds = parse_int_list(self.seeds)
        try:
            self.amplitude = float(self.amplitude)
            self.tol = float(self.tol)
            for key in ["max_mode", "max_iter", "trials", "halvings"]:
                setattr(self, key, int(getattr(self, key)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"Invalid numeric value in {self.command}: {exc}")
        self.validate()

    def validate(self):
        for n in self.n:
            if not 3 <= n <= MAX_DIM:
                raise ConfigError(f"n must be in [3, {MAX_DIM}], not {n}")
        if len(self.n) == 0 or len(self.seeds) == 0:
            raise ConfigError("n and seeds need at least one value")
        if self.command == "gbc" and self.n != [4]:
            raise ConfigError(f"Gauss-Bonnet-Chern is checked on T⁴ only, not n={self.n}")
        if len(self.resolution) not in (1, len(self.n)) and self.command != "models":
            raise ConfigError(f"Give one resolution or one per dimension, got {self.resolution} for n={self.n}")
        for r in self.resolution:
            if r < 8 or r % 2 != 0:
                raise ConfigError(f"Resolution must be even and >= 8, not {r}")
        if not 0 < self.amplitude < 1:
            raise ConfigError(f"Amplitude must be in (0, 1), not {self.amplitude}")
        if self.max_mode < 0 or any(self.max_mode >= r//2 for r in self.resolution):
            raise ConfigError(f"max_mode must be in [0, resolution/2), not {self.max_mode}")
        if not self.tol > 0:
            raise ConfigError(f"Tolerance must be positive, not {self.tol}")
        for key in ["max_iter", "trials", "halvings"]:
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1, not {getattr(self, key)}")

    def grid_resolution(self, n: int) -> int:
        if len(self.resolution) == 1:
            return self.resolution[0]
        return self.resolution[self.n.index(n)]

    @property
    def report_path(self) -> str:
        return os.path.join(self.output, f"{self.command}.json")

    @property
    def table_path(self) -> str:
        return os.path.join(self.output, f"{self.command}.csv")

    @property
    def timings_path(self) -> str:
        return os.path.join(self.output, f"{self.command}.timings.csv")

    def to_dict(self) -> Dict:
        out = asdict(self)
        out.pop("verbose")
        return out


def command_key(args: Namespace) -> str:
    if args.command == "verify":
        return f"verify_{args.check.replace('-', '_')}"
    return args.command

OVERRIDES = {
    "n": "n",
    "res": "resolution",
    "seeds": "seeds",
    "amp": "amplitude",
    "max_mode": "max_mode",
    "tol": "tol",
    "max_iter": "max_iter",
    "trials": "trials",
    "output": "output"
}

def build_config(args: Namespace, params: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """ExperimentConfig from the YAML section of the command overridden by CLI flags

    Args:
        args (Namespace): parsed CLI arguments
        params (Dict[str, Any], optional): already loaded YAML, read from args.config if None. Defaults to None.

    Returns:
        ExperimentConfig: validated config
    """
    params = load_config(args.config) if params is None else params
    key = command_key(args)
    section = params.get(key) or {}
    if not isinstance(section, dict):
        raise ConfigError(f"Section {key} must be a mapping")
    known = {f.name for f in fields(ExperimentConfig)} - {"command"}
    unknown = set(section.keys()) - known
    if unknown:
        raise ConfigError(f"Unknown keys {sorted(unknown)} in section {key}, supported: {sorted(known)}")
    values = dict(section)
    report = params.get("report") or {}
    if "output" in report and "output" not in values:
        values["output"] = report["output"]
    for flag, name in OVERRIDES.items():
        value = getattr(args, flag, None)
        if value is not None:
            values[name] = value
    # --n alone keeps the per-dimension resolutions of the section
    if getattr(args, "n", None) is not None and getattr(args, "res", None) is None and "resolution" in section:
        section_n = parse_int_list(section.get("n", []))
        section_res = parse_int_list(section["resolution"])
        if len(section_res) == len(section_n) > 1:
            lookup = dict(zip(section_n, section_res))
            values["resolution"] = [lookup.get(n, section_res[0]) for n in parse_int_list(values["n"])]
    if getattr(args, "quiet", False):
        values["verbose"] = False
    try:
        return ExperimentConfig(command=key, **values)
    except TypeError as exc:
        raise ConfigError(f"Invalid section {key}: {exc}")

import os
import csv
import json
import yaml
import numpy as np
from typing import Dict, List, Sequence
from src.fields import FIELD_KINDS, Field, Grid, MetricField

FIELD_SCHEMA = 1

class ConfigError(ValueError):
    pass

def load_config(path: str) -> Dict:
    """loads a single yml file (JSON files load too)

    Args:
        path (str): path to yml file

    Returns:
        Dict: yml dict
    """
    if not os.path.exists(path):
        raise ConfigError(f"The config file {path} does not exist")
    with open(path, "r") as stream:
        try:
            params = yaml.safe_load(stream)
        except yaml.YAMLError as exc:
            raise ConfigError(f"Cannot parse {path}: {exc}")
    if params is None:
        return {}
    if not isinstance(params, dict):
        raise ConfigError(f"The config file {path} must hold a mapping, not {type(params).__name__}")
    return params

def save_json(path: str, payload: Dict):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")

def save_csv(path: str, rows: List[Dict], header: Sequence[str] = None):
    """writes rows of dicts with a header row (keys of the first row by default)"""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    header = list(rows[0].keys()) if header is None and len(rows) > 0 else list(header or [])
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=header)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)

def _field_header(field: Field) -> Dict:
    header = field.header()
    header.update({"schema": FIELD_SCHEMA, "metric": isinstance(field, MetricField)})
    return header

def save_field(path: str, field: Field):
    """writes a field as JSON (row-major values) or, for .npz paths, as a binary archive"""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    header = _field_header(field)
    if path.endswith(".npz"):
        np.savez(path, values=field.values, header=json.dumps(header, sort_keys=True))
        return
    payload = dict(header)
    payload["values"] = field.values.tolist()
    with open(path, "w") as f:
        json.dump(payload, f, sort_keys=True)

def load_field(path: str) -> Field:
    if not os.path.exists(path):
        raise ValueError(f"The path {path} does not exist")
    if path.endswith(".npz"):
        with np.load(path) as archive:
            header = json.loads(archive["header"].item())
            values = archive["values"]
    else:
        with open(path, "r") as f:
            header = json.load(f)
        values = np.asarray(header.pop("values"), dtype=float)
    if header.get("schema") != FIELD_SCHEMA:
        raise ValueError(f"Unsupported field schema {header.get('schema')} in {path}")
    grid = Grid(dim=header["dim"], resolution=tuple(header["resolution"]), period=tuple(header["period"]))
    kind = header["kind"]
    assert kind in FIELD_KINDS.keys(), f"Only {list(FIELD_KINDS.keys())} fields are supported, not {kind}"
    if header.get("metric", False):
        return MetricField(grid, values)
    if kind == "scalar":
        return FIELD_KINDS[kind](grid, values)
    return FIELD_KINDS[kind](grid, values, header["variance"])

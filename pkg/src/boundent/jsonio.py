"""Deterministic JSON output: sorted keys, round-trip float precision."""
from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np


def plain(obj):
    """Convert numpy scalars/arrays, tuples and dataclasses into JSON-ready values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return plain(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if x == 0:
            return 0.0  # no "-0.0" in artifacts
        return x
    if isinstance(obj, complex):
        return [plain(obj.real), plain(obj.imag)]
    return obj


def dumps(obj) -> str:
    return json.dumps(plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def read(path):
    with open(path) as fh:
        return json.load(fh)

"""Deterministic JSON output."""
import json
from dataclasses import dataclass

import numpy as np

from boundent import jsonio


@dataclass
class _Rec:
    x: float
    v: tuple


def test_plain_conversion_and_sorted_output(tmp_path):
    obj = {"b": np.float64(-0.0), "a": np.arange(3), "c": _Rec(np.float32(0.5), (np.int64(2), True)), "z": 1 + 2j}
    text = jsonio.dumps(obj)
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    data = json.loads(text)
    assert data == {"a": [0, 1, 2], "b": 0.0, "c": {"x": 0.5, "v": [2, True]}, "z": [1.0, 2.0]}
    assert "-0.0" not in text


def test_floats_round_trip(tmp_path):
    xs = [0.1, 1 / 3, 2 ** -40, 1e300, np.pi]
    path = jsonio.write(tmp_path / "sub" / "x.json", xs)
    assert jsonio.read(path) == xs

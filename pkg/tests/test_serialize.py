import json
import math
from fractions import Fraction

import numpy as np
import pytest

from hypergeo.serialize import document, dumps


def test_round_trip_exact_floats():
    values = [0.1, 1 / 3, math.pi, 1e-300, 2.0, -0.0, 123456789.0]
    back = json.loads(dumps(values))
    assert all(a == b for a, b in zip(values, back))


def test_schema_first_and_sorted():
    text = dumps(document({"b": 1, "a": {"schema": 0, "z": 1}}))
    assert text.startswith('{"schema": 1, "a": {"schema": 0, "z": 1}')
    assert json.loads(dumps(document({}), indent=2)) == {"schema": 1}


def test_special_values():
    assert dumps({"f": Fraction(3, 8), "n": np.float64(0.5), "i": np.int64(3), "x": None}) == \
        '{"f": "3/8", "i": 3, "n": 0.5, "x": null}'
    with pytest.raises(ValueError):
        dumps(float("nan"))
    with pytest.raises(TypeError):
        dumps(object())

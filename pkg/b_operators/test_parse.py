import json
from pathlib import Path

import numpy as np
import pytest

from b_operators import loaders
from b_operators.basefield import BaseField, RationalFunctionField, TowerField
from b_operators.errors import DivisionByZero, ParseError, ValidationError
from b_operators.polynomial import PolyRing

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def K():
    return RationalFunctionField(BaseField(3, [1, 0, 1]), ["x", "y"])


@pytest.mark.parametrize(
    "text,expected",
    [
        ("x + y", "x + y"),
        ("x - -y", "x + y"),
        ("-x^2", "-x^2"),
        ("(x + 1)^3", "x^3 + 1"),
        ("x/(x*y)", "1/y"),
        ("2*x*g", "(-g)*x"),
        ("(x^2 - 1)/(x + 1)", "x - 1"),
        ("4", "1"),
    ],
)
def test_parse_evaluates(K, text, expected):
    assert str(loaders.parse_element(text, K)) == expected


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("x $ y", 1, 3),
        ("x +", 1, 4),
        ("(x + 1", 1, 7),
        ("x + q", 1, 5),
        ("x +\n  q", 2, 3),
        ("x^y", 1, 3),
    ],
)
def test_parse_errors_carry_positions(K, text, line, column):
    with pytest.raises(ParseError) as info:
        loaders.parse_element(text, K, "test")
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"test:{line}:{column}:")


@pytest.mark.parametrize("seed", range(20))
def test_printed_elements_parse_back(K, seed):
    rng = np.random.default_rng(seed)
    names = ["x", "y", "g", "1", "2"]

    def atom():
        return names[int(rng.integers(len(names)))]

    text = f"({atom()} + {atom()}*{atom()})^{int(rng.integers(1, 3))}/({atom()} + x)"
    value = loaders.parse_element(text, K)
    assert loaders.parse_element(str(value), K) == value


def test_tower_elements_parse_back():
    K = RationalFunctionField(BaseField(2), ["x", "y"])
    L = TowerField(K, [("z", K.gen("x"))])
    value = loaders.parse_element("(z + y)^3/x + z/(y + 1)", L)
    assert loaders.parse_element(str(value), L) == value


def test_polynomials_parse_back():
    K = RationalFunctionField(BaseField(3), ["y"])
    ring = PolyRing(K, ["a", "b"])
    f = loaders.parse_polynomial("y*a^2 - b^2/y + 1/(y + 1)", ring)
    assert loaders.parse_polynomial(str(f), ring) == f


def test_fixture_expressions_round_trip():
    checked = 0
    for path in sorted(FIXTURES.glob("*.json")):
        raw = json.loads(path.read_text())
        if "operator" not in raw:
            continue
        bundle = loaders.Bundle(path)
        op = loaders.load_operator(bundle.get("operator"))
        for name, image in op.images.items():
            for value in image.coords:
                assert loaders.parse_element(str(value), op.field) == value
                checked += 1
        for section in ("variety", "subvariety"):
            if bundle.has(section):
                V, _ = loaders.load_variety(bundle.get(section), op.field)
                for g in V.gens:
                    assert loaders.parse_polynomial(str(g), V.ring) == g
                    checked += 1
    assert checked > 0


def test_division_by_zero_is_not_a_parse_error(K):
    with pytest.raises(DivisionByZero):
        loaders.parse_element("x / (y - y)", K)


@pytest.mark.parametrize("components", [[1, "1"], ["y", 0], ["y", None]])
def test_operator_images_must_be_strings(components):
    source = loaders.Source(
        {"algebra": "b_f3x2.json", "vars": ["y"], "images": {"y": components}}, FIXTURES, "operator"
    )
    with pytest.raises(ValidationError, match="operator.images.y"):
        loaders.load_operator(source)

import json
from pathlib import Path

import numpy as np
import pytest

from b_operators.algebra import (
    FiniteAlgebra,
    assumption2,
    companionability,
    direct_product,
    endo_algebra,
    fiber_product,
    is_local,
    ker_frobenius,
    ker_pi,
    nilradical,
    simple_extension,
    tensor_table,
    to_raw,
    truncated_poly,
    validate,
)
from b_operators.basefield import BaseField
from b_operators.errors import (
    BadAugmentation,
    BadUnit,
    BasisNotNormalized,
    DimensionMismatch,
    NotAssociative,
    NotCommutative,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

F2, F3, F5 = BaseField(2), BaseField(3), BaseField(5)


def load(name):
    return validate(json.loads((FIXTURES / name).read_text()))


def fiber_power(B, d):
    result = B
    for _ in range(d - 1):
        result = fiber_product(result, B)
    return result


CLASSIFICATION = [
    ("F2[X]/(X^2)", lambda: truncated_poly(F2, 2), True, "local"),
    ("F3[X]/(X^2)", lambda: truncated_poly(F3, 2), True, "local"),
    ("F5[X]/(X^2)", lambda: truncated_poly(F5, 2), True, "local"),
    ("F2[X]/(X^3)", lambda: truncated_poly(F2, 3), False, "none"),
    ("F3[X]/(X^3)", lambda: truncated_poly(F3, 3), True, "local"),
    ("F5[X]/(X^5)", lambda: truncated_poly(F5, 5), True, "local"),
    ("F2^3", lambda: endo_algebra(F2, 3), True, "separable_product"),
    ("F3^2", lambda: endo_algebra(F3, 2), True, "separable_product"),
    ("F2 x F4", lambda: direct_product(endo_algebra(F2, 1), simple_extension(F2, [1, 1, 1])), True, "separable_product"),
    ("F2[X]/(X^2) x F2", lambda: direct_product(truncated_poly(F2, 2), endo_algebra(F2, 1), which_pi=1), False, "none"),
    ("F3[X]/(X^2) fiber square", lambda: fiber_power(truncated_poly(F3, 2), 2), True, "local"),
    ("F3[X]/(X^2) fiber cube", lambda: fiber_power(truncated_poly(F3, 2), 3), True, "local"),
    ("F2[X]/(X^2) fiber cube", lambda: fiber_power(truncated_poly(F2, 2), 3), True, "local"),
    ("F9[X]/(X^2)", lambda: truncated_poly(BaseField(3, [1, 0, 1]), 2), True, "local"),
]


@pytest.mark.parametrize("name,build,companionable,clause", CLASSIFICATION, ids=[c[0] for c in CLASSIFICATION])
def test_classification_table(name, build, companionable, clause):
    report = companionability(build(), name)
    assert report.companionable is companionable
    assert report.clause == clause


def test_f2_cubic_fails_condition_one():
    B = truncated_poly(F2, 3)
    report = companionability(B)
    assert report.local
    assert not report.cond1
    assert ker_frobenius(B).basis == ((0, 0, 1),)
    assert nilradical(B).basis == ((0, 1, 0), (0, 0, 1))
    assert not assumption2(B)


def test_product_with_nilpotents_fails_condition_two():
    report = companionability(direct_product(truncated_poly(F2, 2), endo_algebra(F2, 1), which_pi=1))
    assert report.cond1
    assert not report.cond2
    assert not report.local


@pytest.mark.parametrize("p", [2, 3, 5])
def test_assumption2_for_dual_numbers(p):
    assert assumption2(truncated_poly(BaseField(p), 2))
    assert assumption2(truncated_poly(BaseField(p), p))


@pytest.mark.parametrize(
    "fixture,build",
    [
        ("b_f2x2.json", lambda: truncated_poly(F2, 2)),
        ("b_f3x3.json", lambda: truncated_poly(F3, 3)),
        ("b_f3_cubed.json", lambda: endo_algebra(F3, 3)),
        ("b_f2_times_f4.json", lambda: direct_product(endo_algebra(F2, 1), simple_extension(F2, [1, 1, 1]))),
        ("b_f2x2_times_f2.json", lambda: direct_product(truncated_poly(F2, 2), endo_algebra(F2, 1), which_pi=1)),
        ("b_f3x2_fiber2.json", lambda: fiber_product(truncated_poly(F3, 2), truncated_poly(F3, 2))),
    ],
)
def test_fixtures_match_builders(fixture, build):
    B = load(fixture)
    assert B == build()
    assert validate(to_raw(B)) == B


def _raw(mul, unit=(1, 0), pi=(1, 0)):
    return {"p": 2, "dim": len(unit), "mul": mul, "unit": list(unit), "pi": list(pi)}


DUAL = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]


@pytest.mark.parametrize(
    "raw,error",
    [
        (_raw([[[1, 0], [0, 1]], [[1, 0], [0, 0]]]), NotCommutative),
        (_raw([[[0, 1], [0, 0]], [[0, 0], [1, 0]]]), NotAssociative),
        (_raw(DUAL, unit=(0, 1)), BadUnit),
        (_raw(DUAL, pi=(1, 1)), BasisNotNormalized),
        (_raw([[[1, 0], [0, 1]], [[0, 1], [1, 0]]]), BadAugmentation),
        (_raw([[[1, 1], [0, 1]], [[0, 1], [0, 0]]], unit=(1, 1)), BasisNotNormalized),
        (_raw(DUAL, unit=(1, 0, 0)), DimensionMismatch),
    ],
    ids=["commutative", "associative", "unit", "normalized", "multiplicative", "local-unit", "dimension"],
)
def test_validation_errors(raw, error):
    with pytest.raises(error):
        validate(raw)


def test_bad_augmentation_indices():
    with pytest.raises(BadAugmentation) as info:
        validate(_raw([[[1, 0], [0, 1]], [[0, 1], [1, 0]]]))
    assert (info.value.i, info.value.j) == (1, 1)


def test_not_associative_indices():
    with pytest.raises(NotAssociative) as info:
        validate(_raw([[[0, 1], [0, 0]], [[0, 0], [1, 0]]]))
    assert (info.value.i, info.value.j, info.value.l) == (0, 0, 1)


def test_tensor_table_of_dual_numbers():
    B = truncated_poly(F2, 2)
    T = tensor_table(B, B).check_ring_axioms()
    assert T.dim == 4
    assert nilradical(T).dim == 3
    assert T.unit == (1, 0, 0, 0)


def test_locality():
    assert is_local(truncated_poly(F3, 3))
    assert not is_local(endo_algebra(F3, 2))
    assert is_local(fiber_power(truncated_poly(F2, 2), 3))


F4, F9 = BaseField(2, [1, 1, 1]), BaseField(3, [1, 0, 1])
QUADRATIC = {2: [1, 1, 1], 3: [1, 0, 1], 5: [2, 0, 1]}


def random_algebra(rng, k, depth=2):
    """Small augmented algebra built from truncations, products and fiber products."""
    kind = int(rng.integers(0, 4 if depth else 2))
    if kind == 0:
        return truncated_poly(k, int(rng.integers(1, 4)))
    if kind == 1:
        return endo_algebra(k, int(rng.integers(1, 3)))
    first = random_algebra(rng, k, depth - 1)
    if kind == 2:
        if k.deg == 1 and rng.integers(0, 2):
            return direct_product(first, simple_extension(k, QUADRATIC[k.p]))
        second = random_algebra(rng, k, depth - 1)
        return direct_product(first, second, which_pi=int(rng.integers(0, 2)))
    return fiber_product(first, random_algebra(rng, k, depth - 1))


def permute_basis(B, order):
    """Same algebra with b_i relabelled as b_order[i]; order[0] must be 0."""
    mul = tuple(
        tuple(tuple(B.mul[order[i]][order[j]][order[l]] for l in range(B.dim)) for j in range(B.dim))
        for i in range(B.dim)
    )
    return FiniteAlgebra(
        B.base,
        tuple(B.basis_names[i] for i in order),
        mul,
        tuple(B.unit[i] for i in order),
        tuple(B.pi[i] for i in order),
    ).check()


RANDOM_FIELDS = [F2, F3, F5, F4, F9]


@pytest.mark.parametrize("seed", range(30))
def test_random_algebras_validate_and_round_trip(seed):
    rng = np.random.default_rng(seed)
    B = random_algebra(rng, RANDOM_FIELDS[seed % len(RANDOM_FIELDS)])
    assert validate(to_raw(B)) == B


@pytest.mark.parametrize("seed", range(30))
def test_radical_chain_and_locality(seed):
    rng = np.random.default_rng(100 + seed)
    B = random_algebra(rng, RANDOM_FIELDS[seed % len(RANDOM_FIELDS)])
    maximal = ker_pi(B)
    assert ker_frobenius(B) <= nilradical(B) <= maximal
    assert maximal.is_ideal()
    assert maximal.power(B.dim).is_zero() == (nilradical(B) == maximal) == is_local(B)
    assert assumption2(B) == (is_local(B) and nilradical(B) == ker_frobenius(B))


@pytest.mark.parametrize("seed", range(30))
def test_companionability_ignores_basis_order(seed):
    rng = np.random.default_rng(200 + seed)
    B = random_algebra(rng, RANDOM_FIELDS[seed % len(RANDOM_FIELDS)])
    order = [0] + [1 + int(i) for i in rng.permutation(B.dim - 1)]
    before = companionability(B)
    after = companionability(permute_basis(B, order))
    assert (after.companionable, after.clause) == (before.companionable, before.clause)
    assert (after.local, after.cond1, after.cond2, after.assumption2) == (
        before.local,
        before.cond1,
        before.cond2,
        before.assumption2,
    )
    assert len(after.nil_basis) == len(before.nil_basis)
    assert len(after.ker_frobenius_basis) == len(before.ker_frobenius_basis)

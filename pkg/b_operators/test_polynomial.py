import itertools

import numpy as np
import pytest

from b_operators.basefield import BaseField, RationalFunctionField
from b_operators.errors import RingMismatch, VariableClash, VariableMismatch
from b_operators.matrices import fp_nullspace, nullspace, row_reduce, solve
from b_operators.polynomial import BlockOrder, PolyRing, degrevlex, div_exact, poly_gcd


@pytest.fixture
def f3xyz():
    return PolyRing(BaseField(3), ["x", "y", "z"])


def test_degrevlex_orders_variables_as_declared(f3xyz):
    x, y, z = f3xyz.gens
    assert (x + y + z).format() == "x + y + z"
    assert (z ** 2 + x * y + x * z).format() == "x*y + x*z + z^2"
    assert (x ** 2 * z + x * y ** 2).format() == "x*y^2 + x^2*z"


def test_block_order_eliminates_first_block(f3xyz):
    x, y, z = f3xyz.gens
    f = x + y ** 3
    assert f.leading(BlockOrder(1))[0] == (1, 0, 0)
    assert f.leading(degrevlex)[0] == (0, 3, 0)


def test_printing_of_signs_and_coefficients(f3xyz):
    x, y, _ = f3xyz.gens
    assert (2 * x - y + 1).format() == "-x - y + 1"
    assert (-(x ** 2)).format() == "-x^2"
    assert f3xyz.zero.format() == "0"


def test_printing_over_extension_field():
    k = BaseField(2, [1, 1, 1])
    ring = PolyRing(k, ["x"])
    g = ring.constant(k.generator)
    assert (g * ring.gen("x") + 1).format() == "(g)*x + 1"


def test_variable_errors(f3xyz):
    with pytest.raises(VariableClash):
        PolyRing(BaseField(2), ["x", "x"])
    with pytest.raises(VariableMismatch):
        f3xyz.gen("w")
    other = PolyRing(BaseField(3), ["x"])
    with pytest.raises(RingMismatch):
        f3xyz.gen("x") + other.gen("x")


def test_exact_division_and_gcd(f3xyz):
    x, y, z = f3xyz.gens
    a = (x + y) * (x * z - 1)
    b = (x + y) * (y + z + 1)
    assert div_exact(a, x + y) == x * z - 1
    assert div_exact(a, y + z) is None
    assert poly_gcd(a, b) == x + y
    assert poly_gcd(x ** 2 - y ** 2, x - y) == x - y


@pytest.mark.parametrize("seed", range(10))
def test_gcd_of_random_products(seed):
    rng = np.random.default_rng(seed)
    ring = PolyRing(BaseField(2), ["x", "y"])

    def poly():
        terms = {tuple(int(e) for e in rng.integers(0, 3, size=2)): 1 for _ in range(3)}
        return ring.from_dict(terms)

    common, f, g = poly(), poly(), poly()
    d = poly_gcd(common * f, common * g)
    assert div_exact(common * f, d) is not None
    assert div_exact(common * g, d) is not None
    assert div_exact(d, common.monic()) is not None


def test_evaluate_and_rename(f3xyz):
    x, y, z = f3xyz.gens
    f = x ** 2 * y + z
    K = RationalFunctionField(BaseField(3), ["t"])
    t = K.gen("t")
    assert f.evaluate([t, K.one, t], K.constant, K.zero) == t ** 2 + t
    target = PolyRing(BaseField(3), ["u", "x"])
    assert (x + 1).rename(target) == target.gen("x") + 1
    assert x.rename(target, {"x": "u"}) == target.gen("u")


def test_row_reduce_nullspace_and_solve():
    k = BaseField(5)
    rows = [[1, 2, 3], [2, 4, 2]]
    reduced, pivots = row_reduce(rows, k)
    assert pivots == [0, 2]
    assert reduced == [[1, 2, 0], [0, 0, 1]]
    assert nullspace(rows, 3, k) == [[3, 1, 0]]
    assert solve(rows, [1, 2], k) == [1, 0, 0]
    assert solve([[1, 1], [1, 1]], [1, 2], k) is None


@pytest.mark.parametrize("p", [2, 3, 5])
def test_fp_nullspace_is_a_kernel(p):
    rng = np.random.default_rng(100 + p)
    m = rng.integers(0, p, size=(4, 7))
    basis = fp_nullspace(m, p)
    assert basis.shape[0] >= 3
    assert not ((m @ basis.T) % p).any()
    free = [c for c in range(7) if basis[:, c].any()]
    assert free


def test_nullspace_matches_brute_force_over_f2():
    k = BaseField(2)
    rows = [[1, 0, 1, 1], [0, 1, 1, 0]]
    kernel = [
        v for v in itertools.product(range(2), repeat=4)
        if all(sum(a * b for a, b in zip(r, v)) % 2 == 0 for r in rows)
    ]
    basis = nullspace(rows, 4, k)
    spanned = {
        tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % 2 for i in range(4))
        for coeffs in itertools.product(range(2), repeat=len(basis))
    }
    assert spanned == set(kernel)

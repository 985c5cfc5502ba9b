import numpy as np
import pytest

from b_operators.basefield import (
    BaseField,
    RationalFunctionField,
    TowerField,
    breaks_lambda0,
    frobenius,
    lambda0,
    pth_power_decompose,
    pth_power_in_tower,
    pth_root,
)
from b_operators.errors import DivisionByZero, NotIrreducible, UnsupportedTower, ValidationError, VariableClash


def random_rf(rng, K, max_terms=3, max_deg=2, with_den=False):
    """A small random element of K = k(vars)."""
    ring = K.ring

    def poly():
        terms = {}
        for _ in range(int(rng.integers(1, max_terms + 1))):
            m = tuple(int(e) for e in rng.integers(0, max_deg + 1, size=ring.ngens))
            terms[m] = int(rng.integers(1, K.base.q))
        return ring.from_dict(terms)

    num = poly()
    den = poly() if with_den else ring.one
    if not den:
        den = ring.one
    return K.new(num, den)


@pytest.mark.parametrize("p,min_poly", [(2, [1, 1, 1]), (3, [1, 0, 1]), (2, [1, 1, 0, 1]), (5, [2, 0, 1])])
def test_field_axioms_on_all_pairs(p, min_poly):
    k = BaseField(p, min_poly)
    assert k.q == p ** (len(min_poly) - 1)
    for a in range(k.q):
        assert k.add(a, k.neg(a)) == 0
        if a:
            assert k.mul(a, k.inv(a)) == 1
        for b in range(k.q):
            assert k.add(a, b) == k.add(b, a)
            assert k.mul(a, b) == k.mul(b, a)
            assert k.frobenius(k.add(a, b)) == k.add(k.frobenius(a), k.frobenius(b))


def test_pth_root_inverts_frobenius():
    k = BaseField(3, [2, 2, 1])
    for a in range(k.q):
        assert k.pth_root(k.frobenius(a)) == a


def test_vectorized_ops_match_scalar():
    k = BaseField(3, [1, 0, 1])
    a = np.arange(k.q)
    b = a[::-1]
    assert k.vadd(a, b).tolist() == [k.add(int(x), int(y)) for x, y in zip(a, b)]
    assert k.vmul(a, b).tolist() == [k.mul(int(x), int(y)) for x, y in zip(a, b)]


@pytest.mark.parametrize("p,min_poly", [(2, [1, 0, 1]), (3, [2, 0, 1]), (5, [0, 0, 1])])
def test_reducible_minimal_polynomial_rejected(p, min_poly):
    with pytest.raises(NotIrreducible):
        BaseField(p, min_poly)


def test_non_prime_characteristic_rejected():
    with pytest.raises(ValidationError):
        BaseField(4)


def test_base_field_printing():
    k = BaseField(3, [1, 0, 1])
    g = k.generator
    assert k.format(g) == "g"
    assert k.format(k.neg(g)) == "-g"
    assert k.format(k.add(g, 1)) == "g + 1"
    assert BaseField(5).format(4) == "-1"


def test_rational_functions_are_normalized():
    K = RationalFunctionField(BaseField(3), ["x", "y"])
    x, y = K.gen("x"), K.gen("y")
    assert (x ** 2 - 1) / (x - 1) == x + 1
    assert ((x ** 2 - 1) / (x - 1)).den == K.ring.one
    r = (2 * x) / (2 * y + 2)
    assert r.den == K.ring.gen("y") + K.ring.one
    assert str(r) == "x/(y + 1)"
    assert str(x / y) == "x/y"
    assert str(-x * y + 1) == "-x*y + 1"


def test_division_by_zero():
    K = RationalFunctionField(BaseField(2), ["x"])
    with pytest.raises(DivisionByZero):
        K.gen("x") / K.zero


def test_generator_name_is_reserved_over_extension_fields():
    with pytest.raises(VariableClash):
        RationalFunctionField(BaseField(2, [1, 1, 1]), ["g"])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_frobenius_is_additive(p):
    rng = np.random.default_rng(p)
    K = RationalFunctionField(BaseField(p), ["x", "y"])
    for _ in range(100):
        a, b = random_rf(rng, K), random_rf(rng, K)
        assert frobenius(a + b) == frobenius(a) + frobenius(b)
        assert frobenius(a * b) == frobenius(a) * frobenius(b)
        c = random_rf(rng, K, with_den=True)
        assert pth_root(frobenius(c)) == c


def test_lambda0():
    K = RationalFunctionField(BaseField(3), ["x", "y"])
    x, y = K.gen("x"), K.gen("y")
    assert lambda0(x ** 3 * y ** 6) == x * y ** 2
    assert lambda0(x) == K.zero
    assert lambda0(1 / (x ** 3 + 1)) == 1 / (x + 1)


@pytest.mark.parametrize("seed", range(5))
def test_pth_power_decompose_reconstructs(seed):
    rng = np.random.default_rng(seed)
    K = RationalFunctionField(BaseField(2), ["x", "y"])
    a = random_rf(rng, K, max_terms=4, max_deg=3, with_den=True)
    total = K.zero
    for beta, root in pth_power_decompose(a).items():
        total = total + root ** 2 * K.ring.monomial(beta).evaluate(
            [K.gen("x"), K.gen("y")], K.constant, K.zero
        )
    assert total == a


def test_tower_arithmetic():
    K = RationalFunctionField(BaseField(2), ["x", "y"])
    x, y = K.gen("x"), K.gen("y")
    L = TowerField(K, [("z", x)])
    z = L.gen("z")
    assert z * z == L.constant(x)
    assert z ** 3 == L.constant(x) * z
    a = z + L.constant(y)
    assert a * a.tower.inv(a) == L.one
    assert str(z + 1) == "z + 1"
    assert L.norm(a) == x + y ** 2


def test_tower_roots_and_lambda0():
    K = RationalFunctionField(BaseField(2), ["x", "y"])
    x, y = K.gen("x"), K.gen("y")
    L = TowerField(K, [("z", x)])
    assert L.pth_root(L.constant(x)) == L.gen("z")
    assert L.pth_root(L.constant(y)) is None
    assert L.pth_root(L.constant(x * y ** 2 + y ** 4)) == L.gen("z") * L.constant(y) + L.constant(y ** 2)
    assert pth_power_in_tower(x, L)
    assert not pth_power_in_tower(y, L)
    assert breaks_lambda0(x, L)
    assert not breaks_lambda0(y, L)
    assert not breaks_lambda0(y ** 2, L)


def test_two_step_tower():
    K = RationalFunctionField(BaseField(3), ["x", "y"])
    x, y = K.gen("x"), K.gen("y")
    L = TowerField(K, [("z", x), ("w", y)])
    assert L.pth_root(L.constant(x * y)) == L.gen("z") * L.gen("w")
    assert L.gen("w") ** 3 == L.constant(y)


@pytest.mark.parametrize("roots", [[("z", "x2")], [("z", "x"), ("w", "x2y3")]])
def test_unsupported_towers(roots):
    K = RationalFunctionField(BaseField(2), ["x", "y"])
    x, y = K.gen("x"), K.gen("y")
    values = {"x": x, "x2": x ** 2, "x2y3": x * y ** 2}
    with pytest.raises(UnsupportedTower):
        TowerField(K, [(name, values[t]) for name, t in roots])


@pytest.mark.parametrize("p", [2, 3])
def test_normalization_is_idempotent(p):
    rng = np.random.default_rng(40 + p)
    K = RationalFunctionField(BaseField(p), ["x", "y"])
    for _ in range(50):
        a = random_rf(rng, K, with_den=True)
        again = K.new(a.num, a.den)
        assert (again.num, again.den) == (a.num, a.den)
        assert a.den.leading()[1] == 1


@pytest.mark.parametrize("p", [2, 3])
def test_trivial_tower_agrees_with_pth_root(p):
    rng = np.random.default_rng(60 + p)
    K = RationalFunctionField(BaseField(p), ["x", "y"])
    L = TowerField(K, [])
    samples = [random_rf(rng, K, with_den=True) for _ in range(20)]
    samples += [frobenius(a) for a in samples[:10]]
    for w in samples:
        root = pth_root(w)
        assert pth_power_in_tower(w, L) is (root is not None)
        in_tower = L.pth_root(L.constant(w))
        assert (in_tower is None) is (root is None)
        if root is not None:
            assert in_tower == L.constant(root)


def test_square_times_root_is_a_square_in_the_tower():
    K = RationalFunctionField(BaseField(2), ["x", "y"])
    x, y = K.gen("x"), K.gen("y")
    L = TowerField(K, [("z", x)])
    assert pth_power_in_tower(x * y ** 2, L)
    assert L.pth_root(L.constant(x * y ** 2)) == L.gen("z") * L.constant(y)
    assert breaks_lambda0(x * y ** 2, L)

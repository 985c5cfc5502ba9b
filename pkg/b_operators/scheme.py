"""Affine varieties, prolongation spaces, kernels, equalizers and fiber tests.

The prolongation of a variable ``v`` has the components ``v_0 .. v_d``;
``v_0`` is the coordinate the projection to V keeps.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from b_operators.algebra import AlgebraTable, FiniteAlgebra, tensor_table
from b_operators.basefield import RationalFunctionField, TowerElement, TowerField
from b_operators.errors import (
    BadEmbedding,
    FieldMismatch,
    InternalInconsistency,
    NotAKernel,
    PointNotOnVariety,
    PreconditionViolated,
    PrimalityNotAsserted,
    TooLarge,
    VariableClash,
    VariableMismatch,
)
from b_operators.groebner import (
    DEFAULT_GROEBNER_BUDGET,
    Ideal,
    eliminate,
    ideal_equal,
    ideal_member,
    is_trivial,
    normal_form,
    reduced_gb,
)
from b_operators.matrices import solve
from b_operators.operator import AlgebraBValue, OperatorSpec, trivial_operator
from b_operators.polynomial import Poly, PolyRing

logger = logging.getLogger(__name__)

DEFAULT_CENSUS_LIMIT = 10 ** 6
CENSUS_CHUNK = 1 << 15


def component_name(var: str, i: int) -> str:
    return f"{var}_{i}"


def prime_name(var: str, i: int) -> str:
    """Default name of the i-th primed copy of ``var``: x1 -> xp1_i, x -> xp_i."""
    head = re.match(r"[A-Za-z_]*", var).group(0) or var
    return f"{head}p{var[len(head):]}_{i}"


@dataclass(frozen=True)
class AffineVariety:
    ring: PolyRing
    gens: Tuple[Poly, ...]
    prime: bool = False

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.ring.variables

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.gens)

    def formatted(self) -> List[str]:
        return [g.format() for g in self.gens]

    def contains_point(self, values: Sequence, coeff_map: Callable, zero) -> bool:
        return all(not g.evaluate(values, coeff_map, zero) for g in self.gens)


def affine_space(field, variables: Sequence[str]) -> AffineVariety:
    return AffineVariety(PolyRing(field, variables), (), prime=True)


@dataclass(frozen=True, eq=False)
class ProlongationSpace:
    base: AffineVariety
    operator: OperatorSpec
    variety: AffineVariety
    coordinates: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.variety.vars

    @property
    def ideal(self) -> Ideal:
        return self.variety.ideal

    @property
    def pi_vars(self) -> Tuple[str, ...]:
        return tuple(self.coordinates[v][0] for v in self.base.vars)

    def is_empty(self, budget: Optional[int] = DEFAULT_GROEBNER_BUDGET) -> bool:
        return is_trivial(self.ideal, budget)


def _check_field(op: OperatorSpec, V: AffineVariety):
    if V.ring.domain != op.field:
        raise FieldMismatch("the variety and the operator live over different fields")


def prolong(op: OperatorSpec, V: AffineVariety) -> ProlongationSpace:
    """Expand X_j = sum_i X_{j,i} b_i in every generator and collect the components."""
    _check_field(op, V)
    e = op.algebra.dim
    coordinates = {v: tuple(component_name(v, i) for i in range(e)) for v in V.vars}
    names = [c for v in V.vars for c in coordinates[v]]
    clash = set(names) & set(op.field.variables)
    if clash:
        raise VariableClash(clash)
    ring = PolyRing(op.field, names)
    values = [AlgebraBValue(op.algebra, ring, [ring.gen(c) for c in coordinates[v]]) for v in V.vars]
    applied: Dict[object, AlgebraBValue] = {}

    def coeff(c) -> AlgebraBValue:
        if c not in applied:
            applied[c] = op.apply(c).map(ring, ring.constant)
        return applied[c]

    # each generator contributes its e coordinates in b_0..b_d, zero ones dropped
    gens = []
    for f in V.gens:
        expanded = f.evaluate(values, coeff, AlgebraBValue.zero(op.algebra, ring))
        gens.extend(g for g in expanded.coords if g)
    logger.debug("prolonged %d generators into %d components over %d variables", len(V.gens), len(gens), len(names))
    return ProlongationSpace(V, op, AffineVariety(ring, tuple(gens), V.prime), coordinates)


def nabla_point(op: OperatorSpec, V: AffineVariety, point: Mapping[str, object]) -> Dict[str, object]:
    """Coordinates of apply(a_j) as a point of the prolongation."""
    _check_field(op, V)
    K = op.field
    missing = set(V.vars) - set(point)
    if missing:
        raise VariableMismatch(f"point has no coordinate for {sorted(missing)}")
    a = [K.convert(point[v]) for v in V.vars]
    if not V.contains_point(a, lambda c: c, K.zero):
        raise PointNotOnVariety("the point does not satisfy the ideal of V")
    tau = prolong(op, V)
    out: Dict[str, object] = {}
    for v, value in zip(V.vars, a):
        for name, c in zip(tau.coordinates[v], op.apply(value).coords):
            out[name] = c
    values = [out[name] for name in tau.vars]
    if not tau.variety.contains_point(values, lambda c: c, K.zero):
        raise InternalInconsistency("the prolonged point does not satisfy the prolongation ideal")
    return out


# kernels


def kernel_coordinates(
    V: AffineVariety, W: AffineVariety, e: int, primes: Optional[Mapping[str, Sequence[str]]] = None
) -> Dict[str, Tuple[str, ...]]:
    """The names x'_{j,1..d} of W for each variable x_j of V; checks W = (x, x')."""
    d = e - 1
    if primes is None:
        primes = {v: [prime_name(v, i) for i in range(1, e)] for v in V.vars}
    out = {}
    for v in V.vars:
        names = tuple(primes.get(v, ()))
        if len(names) != d:
            raise VariableMismatch(f"{v!r} needs {d} primed variables, got {list(names)}")
        out[v] = names
    expected = set(V.vars) | {n for names in out.values() for n in names}
    if expected != set(W.vars) or len(expected) != len(V.vars) * e:
        raise VariableMismatch(f"W must use exactly the variables {sorted(expected)}, got {list(W.vars)}")
    return out


def _kernel_renaming(V: AffineVariety, primes: Mapping[str, Tuple[str, ...]]) -> Dict[str, str]:
    mapping = {}
    for v in V.vars:
        mapping[component_name(v, 0)] = v
        for i, name in enumerate(primes[v], start=1):
            mapping[component_name(v, i)] = name
    return mapping


def is_kernel(
    op: OperatorSpec,
    V: AffineVariety,
    W: AffineVariety,
    primes: Optional[Mapping[str, Sequence[str]]] = None,
    budget: Optional[int] = DEFAULT_GROEBNER_BUDGET,
) -> bool:
    """Whether W is contained in the prolongation of V."""
    _check_field(op, V)
    _check_field(op, W)
    primes = kernel_coordinates(V, W, op.algebra.dim, primes)
    tau = prolong(op, V)
    mapping = _kernel_renaming(V, primes)
    return all(ideal_member(g.rename(W.ring, mapping), W.ideal, budget) for g in tau.variety.gens)


def kernel_operator(
    op: OperatorSpec,
    V: AffineVariety,
    W: AffineVariety,
    primes: Optional[Mapping[str, Sequence[str]]] = None,
    budget: Optional[int] = DEFAULT_GROEBNER_BUDGET,
) -> Callable[[Poly], AlgebraBValue]:
    """The operator K[V] -> K[W] (x) B extending the field operator with x_j -> (x_j, x'_j).

    Values are normal forms modulo I(W); it vanishes on I(V) exactly when W is a kernel.
    """
    if not is_kernel(op, V, W, primes, budget):
        raise NotAKernel("W is not contained in the prolongation of V")
    primes = kernel_coordinates(V, W, op.algebra.dim, primes)
    ring = W.ring
    values = [
        AlgebraBValue(op.algebra, ring, [ring.gen(v)] + [ring.gen(n) for n in primes[v]])
        for v in V.vars
    ]
    gb = reduced_gb(W.ideal, budget).gens

    def apply(f) -> AlgebraBValue:
        f = V.ring.convert(f)
        value = f.evaluate(
            values,
            lambda c: op.apply(c).map(ring, ring.constant),
            AlgebraBValue.zero(op.algebra, ring),
        )
        return value.map(ring, lambda a: normal_form(a, gb))

    return apply


@dataclass(frozen=True, eq=False)
class Equalizer:
    variety: AffineVariety
    identifications: Tuple[Poly, ...]
    projection: Mapping[str, str]
    prolongation: ProlongationSpace

    def formatted(self) -> Dict[str, object]:
        return {
            "equations": [g.format() for g in self.identifications],
            "generators": self.variety.formatted(),
            "projection": dict(self.projection),
            "vars": list(self.variety.vars),
        }


def equalizer(
    op: OperatorSpec,
    V: AffineVariety,
    W: AffineVariety,
    primes: Optional[Mapping[str, Sequence[str]]] = None,
    budget: Optional[int] = DEFAULT_GROEBNER_BUDGET,
) -> Equalizer:
    """The subvariety of the prolongation of W cut out by x_{j,i} = x'_{j,i,0}."""
    if not is_kernel(op, V, W, primes, budget):
        raise NotAKernel("W is not contained in the prolongation of V")
    primes = kernel_coordinates(V, W, op.algebra.dim, primes)
    tau = prolong(op, W)
    ring = tau.variety.ring
    identifications = tuple(
        ring.gen(component_name(v, i)) - ring.gen(component_name(name, 0))
        for v in V.vars
        for i, name in enumerate(primes[v], start=1)
    )
    variety = AffineVariety(ring, tau.variety.gens + identifications)
    projection = {w: component_name(w, 0) for w in W.vars}
    return Equalizer(variety, identifications, projection, tau)


def elimination_onto(
    X: AffineVariety, Y: AffineVariety, projection: Mapping[str, str], budget: Optional[int] = DEFAULT_GROEBNER_BUDGET
) -> Ideal:
    """I(X) intersected with the projected coordinates, renamed into Y's variables."""
    missing = set(Y.vars) - set(projection)
    if missing:
        raise VariableMismatch(f"projection misses {sorted(missing)}")
    keep = [projection[y] for y in Y.vars]
    elim = eliminate(X.ideal, keep, budget)
    back = {projection[y]: y for y in Y.vars}
    return Ideal(Y.ring, tuple(g.rename(Y.ring, back) for g in elim.gens))


def dominant(
    X: AffineVariety, Y: AffineVariety, projection: Mapping[str, str], budget: Optional[int] = DEFAULT_GROEBNER_BUDGET
) -> bool:
    """Elimination-ideal equality, which is dominance when Y is prime."""
    if not Y.prime:
        raise PrimalityNotAsserted("dominance needs the target variety flagged prime")
    return ideal_equal(elimination_onto(X, Y, projection, budget), Y.ideal, budget)


@dataclass(frozen=True)
class KernelReport:
    """Outcome of kernel_check; the axiom premise also needs a non-empty prolongation of V."""

    kernel_valid: bool
    dominant_W_over_V: bool
    E_generators: List[str]
    elimination: List[str]
    dominant_E_over_W: bool
    prolongation_nonempty: bool

    @property
    def prolongable(self) -> bool:
        return self.dominant_E_over_W

    @property
    def axiom_premise(self) -> bool:
        return (
            self.kernel_valid
            and self.dominant_W_over_V
            and self.dominant_E_over_W
            and self.prolongation_nonempty
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "kernel_valid": self.kernel_valid,
            "dominant_W_over_V": self.dominant_W_over_V,
            "E_generators": self.E_generators,
            "elimination": self.elimination,
            "dominant_E_over_W": self.dominant_E_over_W,
            "prolongable": self.prolongable,
            "prolongation_nonempty": self.prolongation_nonempty,
            "axiom_premise": self.axiom_premise,
        }


def kernel_check(
    op: OperatorSpec,
    V: AffineVariety,
    W: AffineVariety,
    primes: Optional[Mapping[str, Sequence[str]]] = None,
    budget: Optional[int] = DEFAULT_GROEBNER_BUDGET,
) -> KernelReport:
    """Kernel validity, the two dominance premises and prolongability of W over V."""
    if not (V.prime and W.prime):
        raise PrimalityNotAsserted("kernel_check needs V and W flagged prime")
    nonempty = not prolong(op, V).is_empty(budget)
    if not is_kernel(op, V, W, primes, budget):
        return KernelReport(False, False, [], [], False, nonempty)
    over_v = dominant(W, V, {v: v for v in V.vars}, budget)
    eq = equalizer(op, V, W, primes, budget)
    elim = elimination_onto(eq.variety, W, eq.projection, budget)
    over_w = ideal_equal(elim, W.ideal, budget)
    logger.info("kernel check: W over V %s, E over W %s", over_v, over_w)
    return KernelReport(True, over_v, eq.variety.formatted(), elim.formatted(), over_w, nonempty)


# fibers over explicit generic points


@dataclass(frozen=True)
class FiberReport:
    fiber: str
    equations: List[str]
    reason: str

    def to_dict(self) -> Dict[str, object]:
        return {"fiber": self.fiber, "equations": self.equations, "reason": self.reason}


def _pure_power(f: Poly, p: int) -> Optional[Tuple[int, object, object]]:
    """(variable index, a, c) when f = a*X^p + c, else None."""
    var, a, c = None, None, f.ring.domain.zero
    for m, coeff in f.terms.items():
        if not any(m):
            c = coeff
            continue
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) != 1 or m[nz[0]] != p or var is not None:
            return None
        var, a = nz[0], coeff
    return None if var is None else (var, a, c)


def _decide(polys: List[Poly], tower: TowerField, budget: Optional[int]) -> Tuple[str, str]:
    ring = polys[0].ring
    n = ring.ngens

    def linear_verdict(linear: List[Poly]) -> bool:
        rows = [[f.terms.get(tuple(1 if j == i else 0 for j in range(n)), tower.zero) for i in range(n)] for f in linear]
        rhs = [-f.constant_value() for f in linear]
        return solve(rows, rhs, tower) is not None

    if all(f.is_linear() for f in polys):
        return ("consistent", "linear system solvable") if linear_verdict(polys) else ("empty", "linear system inconsistent")
    pure = {}
    rest = []
    for f in polys:
        shape = None if f.is_linear() else _pure_power(f, tower.p)
        if shape is None:
            rest.append(f)
        else:
            var, a, c = shape
            pure.setdefault(var, []).append(tower.neg(tower.div(c, a)))
    rest_vars = {i for f in rest for i in f.variables_used()}
    if all(f.is_linear() for f in rest) and not (rest_vars & set(pure)):
        for var, values in pure.items():
            if any(v != values[0] for v in values[1:]):
                return "empty", f"conflicting p-th powers for {ring.variables[var]}"
            if tower.pth_root(values[0]) is None:
                return "empty", f"{ring.variables[var]}^{tower.p} = {values[0]} has no solution in L"
        if rest and not linear_verdict(rest):
            return "empty", "linear system inconsistent"
        return "consistent", "p-th roots exist and the linear part is solvable"
    if is_trivial(Ideal(ring, tuple(polys)), budget):
        return "empty", "the fiber ideal is the unit ideal"
    return "undecided", "outside the linear and p-th power fragments"


def generic_fiber_test(
    op: OperatorSpec,
    W: AffineVariety,
    point: Mapping[str, TowerElement],
    V: Optional[AffineVariety] = None,
    primes: Optional[Mapping[str, Sequence[str]]] = None,
    budget: Optional[int] = DEFAULT_GROEBNER_BUDGET,
) -> FiberReport:
    """Decide the fiber over b: of the prolongation of W, or of E -> W when V is given."""
    _check_field(op, W)
    missing = set(W.vars) - set(point)
    if missing:
        raise VariableMismatch(f"point has no coordinate for {sorted(missing)}")
    towers = {point[w].tower for w in W.vars if isinstance(point[w], TowerElement)}
    if len(towers) != 1:
        raise FieldMismatch("the point must live in a single tower")
    tower = towers.pop()
    if tower.K != op.field:
        raise FieldMismatch("the tower is not built over the operator's field")
    b = [tower.convert(point[w]) for w in W.vars]
    if not W.contains_point(b, tower.constant, tower.zero):
        raise BadEmbedding("the point does not satisfy the ideal of W")

    if V is None:
        X = prolong(op, W).variety
        fixed = {component_name(w, 0): value for w, value in zip(W.vars, b)}
    else:
        eq = equalizer(op, V, W, primes, budget)
        X = eq.variety
        fixed = {eq.projection[w]: value for w, value in zip(W.vars, b)}
    unknowns = [v for v in X.vars if v not in fixed]
    ring = PolyRing(tower, unknowns)
    values = [ring.constant(fixed[v]) if v in fixed else ring.gen(v) for v in X.vars]
    polys = []
    for g in X.gens:
        h = g.evaluate(values, lambda c: ring.constant(tower.constant(c)), ring.zero)
        if h:
            polys.append(h)
    equations = [f.format() for f in polys]
    if not polys:
        return FiberReport("consistent", [], "no equations remain")
    if any(f.is_constant() for f in polys):
        return FiberReport("empty", equations, "a non-zero constant remains")
    fiber, reason = _decide(polys, tower, budget)
    logger.info("fiber over %s: %s (%s)", [str(v) for v in b], fiber, reason)
    return FiberReport(fiber, equations, reason)


# adjunction census


def base_ring_table(k) -> AlgebraTable:
    """k itself as a one-dimensional algebra table."""
    return AlgebraTable(k, ("1",), (((1,),),), (1,))


@dataclass(frozen=True)
class CensusReport:
    count_b_tensor_r: int
    count_prolongation: int
    points: int

    @property
    def agree(self) -> bool:
        return self.count_b_tensor_r == self.count_prolongation

    def to_dict(self) -> Dict[str, object]:
        return {
            "count_b_tensor_r": self.count_b_tensor_r,
            "count_prolongation": self.count_prolongation,
            "points": self.points,
            "agree": self.agree,
        }


def _constant_codes(f: Poly) -> Dict[Tuple[int, ...], int]:
    out = {}
    for m, c in f.terms.items():
        if not c.is_constant():
            raise PreconditionViolated(f"coefficient {c} of {f} is not in k")
        out[m] = int(c.num.constant_value())
    return out


def _count_zeros(polys: List[Dict[Tuple[int, ...], int]], nvars: int, algebra: AlgebraTable, limit: int) -> Tuple[int, int]:
    k = algebra.base
    q, D = k.q, algebra.dim
    width = nvars * D
    total = q ** width
    if total > limit:
        raise TooLarge(f"{total} points exceed the enumeration limit {limit}")
    radix = q ** np.arange(width, dtype=np.int64)
    unit = np.array(algebra.unit, dtype=np.int64)
    count = 0
    for start in range(0, total, CENSUS_CHUNK):
        idx = np.arange(start, min(start + CENSUS_CHUNK, total), dtype=np.int64)
        # base-q digits of the index are the coordinates of the point
        points = ((idx[:, None] // radix) % q).reshape(-1, nvars, D)
        ok = np.ones(len(idx), dtype=bool)
        for f in polys:
            value = np.zeros((len(idx), D), dtype=np.int64)
            powers: Dict[Tuple[int, int], np.ndarray] = {}
            for m, c in f.items():
                term = np.broadcast_to(k.vmul(unit, c), (len(idx), D)).copy()
                for j, e in enumerate(m):
                    if e:
                        key = (j, e)
                        if key not in powers:
                            acc = points[:, j, :]
                            for _ in range(e - 1):
                                acc = algebra.vmultiply(acc, points[:, j, :])
                            powers[key] = acc
                        term = algebra.vmultiply(term, powers[key])
                value = k.vadd(value, term)
            ok &= ~value.any(axis=1)
        count += int(ok.sum())
    return count, total


def adjunction_census(
    B: FiniteAlgebra, V: AffineVariety, R: Optional[AlgebraTable] = None, limit: int = DEFAULT_CENSUS_LIMIT
) -> CensusReport:
    """|V(B (x) R)| and |prolongation of V (R)| by enumeration; the two must agree."""
    k = B.base
    if not isinstance(V.ring.domain, RationalFunctionField) or V.ring.domain.base != k:
        raise FieldMismatch("the variety must be defined over the algebra's base field")
    R = base_ring_table(k) if R is None else R
    if R.base != k:
        raise FieldMismatch("the test ring lives over another base field")
    K0 = RationalFunctionField(k, ())
    V0 = AffineVariety(
        PolyRing(K0, V.vars),
        tuple(PolyRing(K0, V.vars).from_dict({m: K0.constant(c) for m, c in _constant_codes(f).items()}) for f in V.gens),
        V.prime,
    )
    tau = prolong(trivial_operator(B, K0), V0)
    count1, points = _count_zeros([_constant_codes(f) for f in V0.gens], len(V0.vars), tensor_table(B, R), limit)
    count2, _ = _count_zeros([_constant_codes(f) for f in tau.variety.gens], len(tau.vars), R, limit)
    logger.info("census: |V(B(x)R)| = %d, |tau V(R)| = %d over %d points", count1, count2, points)
    return CensusReport(count1, count2, points)

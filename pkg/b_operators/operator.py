"""B-operators on K = k(y_1..y_m) and on one-step p-th root towers over K.

An operator is given by the images of the field generators in K (x)_k B;
it extends freely to k[y] and, for local B, to fractions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from b_operators.algebra import FiniteAlgebra, assumption2, is_local
from b_operators.basefield import (
    RationalFunction,
    RationalFunctionField,
    TowerElement,
    TowerField,
    pth_power_in_tower,
)
from b_operators.errors import (
    AlreadyPthPower,
    FieldMismatch,
    NonLocalFractionUnsupported,
    NotAConstant,
    NotInvertible,
    PreconditionViolated,
    ValidationError,
    VariableClash,
    VariableMismatch,
)

logger = logging.getLogger(__name__)

Field = Union[RationalFunctionField, TowerField]


class AlgebraBValue:
    """Element of R (x)_k B as its coordinates in b_0..b_d.

    ``ring`` is the coefficient ring R (a field, a tower or a polynomial ring);
    it provides ``zero``, ``one`` and ``lift_code``.
    """

    __slots__ = ("algebra", "ring", "coords")

    def __init__(self, algebra: FiniteAlgebra, ring, coords: Sequence):
        if len(coords) != algebra.dim:
            raise ValidationError(f"expected {algebra.dim} coordinates, got {len(coords)}")
        self.algebra = algebra
        self.ring = ring
        self.coords = tuple(coords)

    @classmethod
    def zero(cls, algebra: FiniteAlgebra, ring) -> "AlgebraBValue":
        return cls(algebra, ring, (ring.zero,) * algebra.dim)

    @classmethod
    def one(cls, algebra: FiniteAlgebra, ring) -> "AlgebraBValue":
        return cls(algebra, ring, tuple(ring.lift_code(u) if u else ring.zero for u in algebra.unit))

    @classmethod
    def lift(cls, algebra: FiniteAlgebra, ring, c) -> "AlgebraBValue":
        """c (x) 1_B."""
        return cls.one(algebra, ring).scale(c)

    def _check(self, other: "AlgebraBValue"):
        if other.algebra != self.algebra:
            raise FieldMismatch("values over different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgebraBValue):
            return NotImplemented
        self._check(other)
        return AlgebraBValue(self.algebra, self.ring, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        if not isinstance(other, AlgebraBValue):
            return NotImplemented
        self._check(other)
        return AlgebraBValue(self.algebra, self.ring, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return AlgebraBValue(self.algebra, self.ring, [-a for a in self.coords])

    def scale(self, c) -> "AlgebraBValue":
        return AlgebraBValue(self.algebra, self.ring, [a * c for a in self.coords])

    def __mul__(self, other):
        if not isinstance(other, AlgebraBValue):
            return self.scale(other)
        self._check(other)
        ring = self.ring
        out = [ring.zero] * self.algebra.dim
        lifted: Dict[int, object] = {}
        u, v = self.coords, other.coords
        for i, j, l, c in self.algebra.structure:
            if not u[i] or not v[j]:
                continue
            term = u[i] * v[j]
            if c != 1:
                if c not in lifted:
                    lifted[c] = ring.lift_code(c)
                term = term * lifted[c]
            out[l] = out[l] + term
        return AlgebraBValue(self.algebra, ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        result, base = AlgebraBValue.one(self.algebra, self.ring), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, AlgebraBValue):
            return NotImplemented
        return self.algebra == other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def map(self, ring, fn) -> "AlgebraBValue":
        return AlgebraBValue(self.algebra, ring, [fn(a) for a in self.coords])

    def formatted(self) -> List[str]:
        return [str(a) for a in self.coords]

    def __repr__(self):
        return f"AlgebraBValue({self.formatted()})"


def _generators(field: Field) -> Tuple[str, ...]:
    return field.variables


class OperatorSpec:
    """A B-operator on ``field`` given by the images of its generators."""

    def __init__(self, algebra: FiniteAlgebra, field: Field, images: Mapping[str, AlgebraBValue]):
        self.algebra = algebra
        self.field = field
        generators = _generators(field)
        unknown = set(images) - set(generators)
        if unknown:
            raise VariableMismatch(f"images given for unknown generators: {sorted(unknown)}")
        self.images: Dict[str, AlgebraBValue] = {}
        for name in generators:
            if name not in images:
                raise ValidationError(f"no image given for generator {name!r}")
            image = images[name]
            if image.algebra != algebra:
                raise FieldMismatch(f"image of {name!r} lives over another algebra")
            if image.coords[0] != field.gen(name):
                raise ValidationError(f"component 0 of the image of {name!r} must be {name!r}")
            self.images[name] = image

    def __eq__(self, other):
        return (
            isinstance(other, OperatorSpec)
            and self.algebra == other.algebra
            and self.field == other.field
            and self.images == other.images
        )

    def __repr__(self):
        images = ", ".join(f"{n}: {v.formatted()}" for n, v in self.images.items())
        return f"OperatorSpec({images})"

    @property
    def base_field(self) -> RationalFunctionField:
        return self.field.K if isinstance(self.field, TowerField) else self.field

    @property
    def local(self) -> bool:
        return is_local(self.algebra)

    def lift(self, c) -> AlgebraBValue:
        return AlgebraBValue.lift(self.algebra, self.field, c)

    def _apply_k_poly(self, f) -> AlgebraBValue:
        """Image of a polynomial over k in the variables of K."""
        K = self.base_field
        values = [self.images[v] for v in K.variables]
        algebra, ring = self.algebra, self.field
        lifted: Dict[int, AlgebraBValue] = {}

        def coeff(c: int) -> AlgebraBValue:
            if c not in lifted:
                lifted[c] = AlgebraBValue.lift(algebra, ring, ring.lift_code(c))
            return lifted[c]

        return f.evaluate(values, coeff, AlgebraBValue.zero(algebra, ring))

    def _apply_rational(self, f: RationalFunction) -> AlgebraBValue:
        num = self._apply_k_poly(f.num)
        if f.den.is_constant():
            return num.scale(self.field.lift_code(self.base_field.base.inv(f.den.constant_value())))
        if not self.local:
            raise NonLocalFractionUnsupported(f"cannot apply a non-local operator to {f}")
        return num * invert(self._apply_k_poly(f.den))

    def apply(self, f) -> AlgebraBValue:
        field = self.field
        if isinstance(field, TowerField):
            f = field.convert(f)
            total = AlgebraBValue.zero(self.algebra, field)
            roots = [self.images[n] for n in field.names]
            for alpha, c in f.poly.terms.items():
                term = self._apply_rational(c)
                for image, e in zip(roots, alpha):
                    if e:
                        term = term * image ** e
                total = total + term
            return total
        return self._apply_rational(field.convert(f))


def apply(op: OperatorSpec, f) -> AlgebraBValue:
    """The B-operator applied to a field element."""
    return op.apply(f)


def invert(u: AlgebraBValue) -> AlgebraBValue:
    """Inverse in K (x) B for local B, as u_0^-1 * sum_{j<e} (-n)^j with n = u/u_0 - 1."""
    if not is_local(u.algebra):
        raise PreconditionViolated("inversion in K (x) B needs a local algebra")
    u0 = u.coords[0]
    if not u0:
        raise NotInvertible(f"{u.formatted()} has augmentation zero")
    inv0 = u.ring.inv(u0)
    one = AlgebraBValue.one(u.algebra, u.ring)
    minus_n = one - u.scale(inv0)
    acc, term = one, one
    # n is nilpotent, n^e = 0
    for _ in range(1, u.algebra.dim):
        term = term * minus_n
        acc = acc + term
    return acc.scale(inv0)


def is_constant(op: OperatorSpec, f) -> bool:
    f = op.field.convert(f)
    return op.apply(f) == op.lift(f)


def check_frl(op: OperatorSpec, f) -> bool:
    """The operator fixes p-th powers: apply(f^p) = f^p (x) 1."""
    if not assumption2(op.algebra):
        raise PreconditionViolated("the algebra does not satisfy fr(ker pi) = 0")
    fp = op.field.convert(f) ** op.field.p
    return op.apply(fp) == op.lift(fp)


@dataclass(frozen=True)
class StrictnessVerdict:
    constant: bool
    pth_power: bool

    @property
    def counterexample(self) -> bool:
        """f is a constant that is not a p-th power, so the operator is not strict."""
        return self.constant and not self.pth_power

    def to_dict(self) -> Dict[str, bool]:
        return {
            "constant": self.constant,
            "pth_power": self.pth_power,
            "strictness_counterexample": self.counterexample,
        }


def strictness_witness(op: OperatorSpec, f) -> StrictnessVerdict:
    if not assumption2(op.algebra):
        raise PreconditionViolated("strictness is only meaningful when fr(ker pi) = 0")
    f = op.field.convert(f)
    return StrictnessVerdict(constant=is_constant(op, f), pth_power=op.field.pth_root(f) is not None)


def trivial_operator(algebra: FiniteAlgebra, field: Field) -> OperatorSpec:
    """f -> f (x) 1, the operator all of whose elements are constants."""
    return OperatorSpec(
        algebra,
        field,
        {name: AlgebraBValue.lift(algebra, field, field.gen(name)) for name in _generators(field)},
    )


def _move(op: OperatorSpec, target: RationalFunctionField, names: Iterable[str]) -> Dict[str, AlgebraBValue]:
    out = {}
    for name in names:
        image = op.images[name]
        out[name] = image.map(
            target,
            lambda a: RationalFunction(target, a.num.rename(target.ring), a.den.rename(target.ring)),
        )
    return out


def tensor(op_r: OperatorSpec, op_s: OperatorSpec) -> OperatorSpec:
    """The unique operator on k(u, v) restricting to both factors."""
    if op_r.algebra != op_s.algebra:
        raise FieldMismatch("tensor product of operators over different algebras")
    if not isinstance(op_r.field, RationalFunctionField) or not isinstance(op_s.field, RationalFunctionField):
        raise FieldMismatch("tensor products are taken of operators on rational function fields")
    if op_r.field.base != op_s.field.base:
        raise FieldMismatch("tensor product of operators over different base fields")
    clash = set(op_r.field.variables) & set(op_s.field.variables)
    if clash:
        raise VariableClash(clash)
    field = RationalFunctionField(op_r.field.base, op_r.field.variables + op_s.field.variables)
    images = _move(op_r, field, op_r.field.variables)
    images.update(_move(op_s, field, op_s.field.variables))
    return OperatorSpec(op_r.algebra, field, images)


def restrict(op: OperatorSpec, names: Sequence[str]) -> OperatorSpec:
    """Restriction to k(names); every image must only involve those names."""
    if not isinstance(op.field, RationalFunctionField):
        raise FieldMismatch("restriction is defined for operators on rational function fields")
    missing = set(names) - set(op.field.variables)
    if missing:
        raise VariableMismatch(f"not generators of the field: {sorted(missing)}")
    field = RationalFunctionField(op.field.base, [v for v in op.field.variables if v in names])
    return OperatorSpec(op.algebra, field, _move(op, field, field.variables))


def restrict_to_base(op: OperatorSpec) -> OperatorSpec:
    """Restriction of an operator on a tower to its base field K."""
    if not isinstance(op.field, TowerField):
        return op
    K = op.field.K
    images = {}
    for name in K.variables:
        image = op.images[name]
        if not all(op.field.in_base(a) for a in image.coords):
            raise VariableMismatch(f"image of {name!r} leaves K")
        images[name] = image.map(K, lambda a: a.poly.constant_value())
    return OperatorSpec(op.algebra, K, images)


def extend_pth_root(op: OperatorSpec, t, name: str = "z") -> OperatorSpec:
    """Extend to K(t^(1/p)) with the new root z a constant: apply(z) = z (x) 1."""
    if not op.local:
        raise PreconditionViolated("p-th root extensions are implemented for local algebras only")
    K = op.base_field
    t = K.convert(t)
    if not is_constant(op, op.field.convert(t)):
        raise NotAConstant(t)
    if isinstance(op.field, TowerField):
        old = op.field
        if pth_power_in_tower(t, old):
            raise AlreadyPthPower(t)
        roots = list(zip(old.names, old.relations))
    else:
        if K.pth_root(t) is not None:
            raise AlreadyPthPower(t)
        roots = []
    tower = TowerField(K, roots + [(name, t)])
    images = {}
    for gen, image in op.images.items():
        if isinstance(op.field, TowerField):
            images[gen] = image.map(tower, lambda a: TowerElement(tower, a.poly.rename(tower.ring)))
        else:
            images[gen] = image.map(tower, tower.constant)
    images[name] = AlgebraBValue.lift(op.algebra, tower, tower.gen(name))
    logger.debug("extended operator by %s^%d = %s", name, K.p, t)
    return OperatorSpec(op.algebra, tower, images)

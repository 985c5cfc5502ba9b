"""Finite commutative k-algebras given by structure constants.

An algebra element is a tuple of e F_q codes (coordinates in b_0..b_d).
``FiniteAlgebra`` carries the augmentation pi, normalized so that
pi(b_0) = 1 and pi(b_i) = 0 for i > 0; ``AlgebraTable`` is the same data
without augmentation (factors of products, test rings for the census).
"""

from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from b_operators.basefield import BaseField
from b_operators.errors import (
    BadAugmentation,
    BadUnit,
    BasisNotNormalized,
    DimensionMismatch,
    FieldMismatch,
    InternalInconsistency,
    NotAssociative,
    NotCommutative,
    ValidationError,
)
from b_operators.matrices import fp_nullspace, row_reduce

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class AlgebraTable:
    base: BaseField
    basis_names: Tuple[str, ...]
    mul: Tuple[Tuple[Vector, ...], ...]
    unit: Vector

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    e = dim

    @cached_property
    def table(self) -> np.ndarray:
        return np.array(self.mul, dtype=np.int64).reshape(self.dim, self.dim, self.dim)

    @cached_property
    def structure(self) -> Tuple[Tuple[int, int, int, int], ...]:
        """Non-zero structure constants (i, j, l, c): b_i * b_j has c at b_l."""
        return tuple(
            (i, j, l, int(c))
            for (i, j, l), c in np.ndenumerate(self.table)
            if c
        )

    def basis_vector(self, i: int) -> Vector:
        return tuple(1 if j == i else 0 for j in range(self.dim))

    @property
    def zero(self) -> Vector:
        return (0,) * self.dim

    def add(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        add = self.base.add
        return tuple(add(a, b) for a, b in zip(u, v))

    def scale(self, c: int, u: Sequence[int]) -> Vector:
        mul = self.base.mul
        return tuple(mul(c, a) for a in u)

    def multiply(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        k = self.base
        out = [0] * self.dim
        for i, j, l, c in self.structure:
            if u[i] and v[j]:
                out[l] = k.add(out[l], k.mul(k.mul(u[i], v[j]), c))
        return tuple(out)

    def power(self, u: Sequence[int], n: int) -> Vector:
        result, base = self.unit, tuple(u)
        while n:
            if n & 1:
                result = self.multiply(result, base)
            n >>= 1
            if n:
                base = self.multiply(base, base)
        return result

    def vmultiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Row-wise products of arrays of shape (..., e)."""
        k = self.base
        out = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=np.int64)
        for i, j, l, c in self.structure:
            out[..., l] = k.vadd(out[..., l], k.vmul(k.vmul(x[..., i], y[..., j]), c))
        return out

    def check_ring_axioms(self):
        e = self.dim
        if len(self.unit) != e or any(len(row) != e for row in self.mul):
            raise DimensionMismatch(f"structure constants do not match dimension {e}")
        for i in range(e):
            for j in range(i + 1, e):
                if self.mul[i][j] != self.mul[j][i]:
                    raise NotCommutative(i, j)
        for i, j, l in itertools.product(range(e), repeat=3):
            left = self.multiply(self.mul[i][j], self.basis_vector(l))
            right = self.multiply(self.basis_vector(i), self.mul[j][l])
            if left != right:
                raise NotAssociative(i, j, l)
        for i in range(e):
            if self.multiply(self.unit, self.basis_vector(i)) != self.basis_vector(i):
                raise BadUnit(f"unit {list(self.unit)} does not fix b_{i}")
        return self

    def format_vector(self, v: Sequence[int]) -> List[str]:
        return [self.base.format(c) for c in v]


@dataclass(frozen=True)
class FiniteAlgebra(AlgebraTable):
    pi: Vector

    def augmentation(self, u: Sequence[int]) -> int:
        k = self.base
        total = 0
        for c, w in zip(u, self.pi):
            total = k.add(total, k.mul(c, w))
        return total

    def check(self) -> "FiniteAlgebra":
        """Verify every axiom; raises the structured error for the first failure."""
        self.check_ring_axioms()
        e = self.dim
        if len(self.pi) != e:
            raise DimensionMismatch(f"augmentation has {len(self.pi)} entries, expected {e}")
        if self.pi[0] != 1:
            raise BasisNotNormalized(0)
        for i in range(1, e):
            if self.pi[i] != 0:
                raise BasisNotNormalized(i)
        if self.augmentation(self.unit) != 1:
            raise BadAugmentation(0)
        k = self.base
        for i in range(e):
            for j in range(i, e):
                if self.augmentation(self.mul[i][j]) != k.mul(self.pi[i], self.pi[j]):
                    raise BadAugmentation(i, j)
        if is_local(self) and self.unit != self.basis_vector(0):
            raise BasisNotNormalized(0, "a local algebra needs b_0 = 1")
        return self


@dataclass(frozen=True)
class SubspaceIdeal:
    """k-subspace of an algebra in reduced row echelon form."""

    parent: AlgebraTable
    basis: Tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def contains(self, v: Sequence[int]) -> bool:
        return span(self.parent, list(self.basis) + [tuple(v)]).dim == self.dim

    def __le__(self, other: "SubspaceIdeal") -> bool:
        return all(other.contains(v) for v in self.basis)

    def is_ideal(self) -> bool:
        A = self.parent
        return all(
            self.contains(A.multiply(v, A.basis_vector(i)))
            for v in self.basis
            for i in range(A.dim)
        )

    def product(self, other: "SubspaceIdeal") -> "SubspaceIdeal":
        A = self.parent
        return span(A, [A.multiply(u, v) for u in self.basis for v in other.basis])

    def power(self, n: int) -> "SubspaceIdeal":
        result = self
        for _ in range(n - 1):
            if result.is_zero():
                break
            result = result.product(self)
        return result

    def formatted(self) -> List[List[str]]:
        return [self.parent.format_vector(v) for v in self.basis]


def span(parent: AlgebraTable, vectors: Sequence[Sequence[int]]) -> SubspaceIdeal:
    rows = [list(v) for v in vectors if any(v)]
    reduced, _ = row_reduce(rows, parent.base) if rows else ([], [])
    return SubspaceIdeal(parent, tuple(tuple(int(c) for c in r) for r in reduced))


# radicals


def ker_pi(B: FiniteAlgebra) -> SubspaceIdeal:
    return span(B, [B.basis_vector(i) for i in range(1, B.dim)])


def _iterated_frobenius_kernel(B: AlgebraTable, m: int) -> SubspaceIdeal:
    """Kernel of x -> x^(p^m), an F_p-linear map on the e*n dimensional F_p-space B."""
    k = B.base
    p, n, e = k.p, k.deg, B.dim
    exponent = p ** m
    images = []
    for i in range(e):
        for s in range(n):
            x = [0] * e
            x[i] = p ** s
            image = B.power(x, exponent)
            images.append(np.concatenate([k.digits[c] for c in image]))
    kernel = fp_nullspace(np.array(images, dtype=np.int64).T, p)
    weights = p ** np.arange(n, dtype=np.int64)
    vectors = [tuple(int(c) for c in row.reshape(e, n) @ weights) for row in kernel]
    return span(B, vectors)


@functools.lru_cache(maxsize=None)
def ker_frobenius(B: AlgebraTable) -> SubspaceIdeal:
    return _iterated_frobenius_kernel(B, 1)


@functools.lru_cache(maxsize=None)
def nilradical(B: AlgebraTable) -> SubspaceIdeal:
    # x^dim = 0 for every nilpotent x, so x^(p^m) = 0 once p^m >= dim
    p, m = B.base.p, 0
    while p ** m < B.dim:
        m += 1
    return _iterated_frobenius_kernel(B, max(m, 1))


@functools.lru_cache(maxsize=None)
def is_local(B: FiniteAlgebra) -> bool:
    maximal = ker_pi(B)
    by_power = maximal.power(B.dim).is_zero()
    by_radical = nilradical(B) == maximal
    if by_power != by_radical:
        raise InternalInconsistency(
            f"locality tests disagree: (ker pi)^e = 0 is {by_power}, nil = ker pi is {by_radical}"
        )
    return by_power


@functools.lru_cache(maxsize=None)
def assumption2(B: FiniteAlgebra) -> bool:
    p = B.base.p
    return all(not any(B.power(v, p)) for v in ker_pi(B).basis)


@dataclass(frozen=True)
class ClassificationReport:
    name: str
    p: int
    q: int
    dim: int
    local: bool
    nil_basis: List[List[str]]
    ker_frobenius_basis: List[List[str]]
    ker_pi_basis: List[List[str]]
    assumption2: bool
    cond1: bool
    cond2: bool
    companionable: bool
    clause: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "p": self.p,
            "q": self.q,
            "dim": self.dim,
            "local": self.local,
            "nil_basis": self.nil_basis,
            "ker_frobenius_basis": self.ker_frobenius_basis,
            "ker_pi_basis": self.ker_pi_basis,
            "assumption2": self.assumption2,
            "cond1": self.cond1,
            "cond2": self.cond2,
            "companionable": self.companionable,
            "clause": self.clause,
        }


def companionability(B: FiniteAlgebra, name: str = "") -> ClassificationReport:
    """Decide whether the theory of B-operator fields has a model companion.

    Over a finite base field the non-local clause reduces to B being reduced.
    """
    local = is_local(B)
    nil = nilradical(B)
    kfr = ker_frobenius(B)
    cond1 = nil == kfr
    cond2 = local or nil.is_zero()
    companionable = cond1 and cond2
    if not companionable:
        clause = "none"
    elif local:
        clause = "local"
    else:
        clause = "separable_product"
    logger.debug("classified %s: local=%s cond1=%s cond2=%s", name or "algebra", local, cond1, cond2)
    return ClassificationReport(
        name=name,
        p=B.base.p,
        q=B.base.q,
        dim=B.dim,
        local=local,
        nil_basis=nil.formatted(),
        ker_frobenius_basis=kfr.formatted(),
        ker_pi_basis=ker_pi(B).formatted(),
        assumption2=assumption2(B),
        cond1=cond1,
        cond2=cond2,
        companionable=companionable,
        clause=clause,
    )


# construction


def _element(k: BaseField, raw, where: str) -> int:
    if isinstance(raw, int):
        return k.from_int(raw)
    if isinstance(raw, list) and all(isinstance(c, int) for c in raw):
        return k.from_coeffs(raw)
    raise ValidationError(f"{where}: expected an F_p coefficient array, got {raw!r}")


def _vector(k: BaseField, raw, e: int, where: str) -> Vector:
    if not isinstance(raw, list) or len(raw) != e:
        raise DimensionMismatch(f"{where}: expected a vector of length {e}")
    return tuple(_element(k, c, f"{where}[{i}]") for i, c in enumerate(raw))


def base_field_from(raw: Mapping) -> BaseField:
    try:
        p = int(raw["p"])
    except (KeyError, TypeError, ValueError):
        raise ValidationError("missing or invalid characteristic 'p'") from None
    n = int(raw.get("k_deg", 1))
    min_poly = raw.get("k_min_poly")
    if min_poly is None:
        if n != 1:
            raise ValidationError("'k_min_poly' is required when k_deg > 1")
        min_poly = [0, 1]
    if len(min_poly) != n + 1:
        raise DimensionMismatch(f"k_min_poly has {len(min_poly)} coefficients, expected {n + 1}")
    return BaseField(p, min_poly)


def validate(raw: Mapping) -> FiniteAlgebra:
    """Build a FiniteAlgebra from a parsed algebra file and check every axiom."""
    k = base_field_from(raw)
    e = int(raw.get("dim", len(raw.get("basis", []))))
    names = tuple(raw.get("basis") or [f"b{i}" for i in range(e)])
    if len(names) != e:
        raise DimensionMismatch(f"basis has {len(names)} names, expected {e}")
    mul_raw = raw.get("mul")
    if not isinstance(mul_raw, list) or len(mul_raw) != e:
        raise DimensionMismatch(f"mul must be an {e}x{e} table")
    mul = []
    for i, row in enumerate(mul_raw):
        if not isinstance(row, list) or len(row) != e:
            raise DimensionMismatch(f"mul[{i}] must have {e} entries")
        mul.append(tuple(_vector(k, v, e, f"mul[{i}][{j}]") for j, v in enumerate(row)))
    unit = _vector(k, raw.get("unit"), e, "unit")
    pi = _vector(k, raw.get("pi"), e, "pi")
    return FiniteAlgebra(k, names, tuple(mul), unit, pi).check()


def table_from(raw: Mapping, base: Optional[BaseField] = None) -> AlgebraTable:
    """An augmentation-free algebra table (e.g. a census test ring)."""
    k = base or base_field_from(raw)
    e = int(raw.get("dim", len(raw.get("basis", []))))
    names = tuple(raw.get("basis") or [f"r{i}" for i in range(e)])
    mul = tuple(
        tuple(_vector(k, v, e, f"mul[{i}][{j}]") for j, v in enumerate(row))
        for i, row in enumerate(raw.get("mul", []))
    )
    unit = _vector(k, raw.get("unit"), e, "unit")
    return AlgebraTable(k, names, mul, unit).check_ring_axioms()


def to_raw(B: AlgebraTable) -> Dict[str, Any]:
    k = B.base
    raw = {
        "p": k.p,
        "k_deg": k.deg,
        "k_min_poly": list(k.min_poly),
        "dim": B.dim,
        "basis": list(B.basis_names),
        "mul": [[[k.coeffs(c) for c in v] for v in row] for row in B.mul],
        "unit": [k.coeffs(c) for c in B.unit],
    }
    if isinstance(B, FiniteAlgebra):
        raw["pi"] = [k.coeffs(c) for c in B.pi]
    return raw


def truncated_poly(base: BaseField, e: int) -> FiniteAlgebra:
    """k[X]/(X^e) with basis 1, t, ..., t^(e-1)."""
    names = tuple("1" if i == 0 else ("t" if i == 1 else f"t^{i}") for i in range(e))
    mul = tuple(
        tuple(tuple(1 if l == i + j else 0 for l in range(e)) for j in range(e))
        for i in range(e)
    )
    unit = tuple(1 if i == 0 else 0 for i in range(e))
    return FiniteAlgebra(base, names, mul, unit, unit).check()


def endo_algebra(base: BaseField, e: int) -> FiniteAlgebra:
    """k^e with its standard idempotents; pi is the first projection."""
    names = tuple(f"e{i}" for i in range(e))
    mul = tuple(
        tuple(tuple(1 if (i == j == l) else 0 for l in range(e)) for j in range(e))
        for i in range(e)
    )
    unit = (1,) * e
    pi = tuple(1 if i == 0 else 0 for i in range(e))
    return FiniteAlgebra(base, names, mul, unit, pi).check()


def simple_extension(base: BaseField, min_poly: Sequence[int], name: str = "X") -> AlgebraTable:
    """k[X]/(f) for a monic f given by ascending k-codes; no augmentation."""
    k = base
    f = [int(c) for c in min_poly]
    r = len(f) - 1
    if r < 1 or f[-1] != 1:
        raise ValidationError("simple_extension needs a monic polynomial of degree >= 1")

    def reduce(coeffs: List[int]) -> Vector:
        coeffs = list(coeffs)
        for top in range(len(coeffs) - 1, r - 1, -1):
            c = coeffs[top]
            if c:
                for i in range(r + 1):
                    coeffs[top - r + i] = k.sub(coeffs[top - r + i], k.mul(c, f[i]))
        return tuple(coeffs[:r]) + (0,) * max(0, r - len(coeffs))

    mul = tuple(
        tuple(reduce([1 if l == i + j else 0 for l in range(2 * r - 1)]) for j in range(r))
        for i in range(r)
    )
    names = tuple("1" if i == 0 else (name if i == 1 else f"{name}^{i}") for i in range(r))
    unit = tuple(1 if i == 0 else 0 for i in range(r))
    return AlgebraTable(k, names, mul, unit).check_ring_axioms()


def _block_product(first: AlgebraTable, second: AlgebraTable) -> Tuple[Tuple[str, ...], tuple, Vector]:
    e1, e2 = first.dim, second.dim
    e = e1 + e2
    names = tuple(f"({n},0)" for n in first.basis_names) + tuple(f"(0,{n})" for n in second.basis_names)

    def embed(v: Sequence[int], offset: int) -> Vector:
        out = [0] * e
        out[offset : offset + len(v)] = v
        return tuple(out)

    rows = []
    for i in range(e):
        row = []
        for j in range(e):
            if i < e1 and j < e1:
                row.append(embed(first.mul[i][j], 0))
            elif i >= e1 and j >= e1:
                row.append(embed(second.mul[i - e1][j - e1], e1))
            else:
                row.append((0,) * e)
        rows.append(tuple(row))
    unit = tuple(first.unit) + tuple(second.unit)
    return names, tuple(rows), unit


def direct_product(A: AlgebraTable, A2: AlgebraTable, which_pi: int = 0) -> FiniteAlgebra:
    """A x A2 with pi taken from factor ``which_pi``, whose basis comes first."""
    if A.base != A2.base:
        raise FieldMismatch("direct_product of algebras over different fields")
    first, second = (A, A2) if which_pi == 0 else (A2, A)
    if not isinstance(first, FiniteAlgebra):
        raise ValidationError("the augmentation factor must carry pi")
    names, mul, unit = _block_product(first, second)
    pi = tuple(first.pi) + (0,) * second.dim
    return FiniteAlgebra(A.base, names, mul, unit, pi).check()


def fiber_product(A: FiniteAlgebra, A2: FiniteAlgebra) -> FiniteAlgebra:
    """Pairs with equal augmentation; basis (b_0,b_0'), (b_i,0), (0,b_j')."""
    if A.base != A2.base:
        raise FieldMismatch("fiber_product of algebras over different fields")
    e1, e2 = A.dim, A2.dim
    names = (
        (f"({A.basis_names[0]},{A2.basis_names[0]})",)
        + tuple(f"({n},0)" for n in A.basis_names[1:])
        + tuple(f"(0,{n})" for n in A2.basis_names[1:])
    )
    e = e1 + e2 - 1
    pairs = [(A.basis_vector(0), A2.basis_vector(0))]
    pairs += [(A.basis_vector(i), A2.zero) for i in range(1, e1)]
    pairs += [(A.zero, A2.basis_vector(j)) for j in range(1, e2)]

    def coords(x: Vector, y: Vector) -> Vector:
        return (x[0],) + tuple(x[1:]) + tuple(y[1:])

    mul = tuple(
        tuple(
            coords(A.multiply(pairs[i][0], pairs[j][0]), A2.multiply(pairs[i][1], pairs[j][1]))
            for j in range(e)
        )
        for i in range(e)
    )
    unit = coords(A.unit, A2.unit)
    pi = tuple(1 if i == 0 else 0 for i in range(e))
    return FiniteAlgebra(A.base, names, mul, unit, pi).check()


def tensor_table(A: AlgebraTable, R: AlgebraTable) -> AlgebraTable:
    """Structure constants of A (x)_k R in the basis b_i (x) r_a, index i*dim(R) + a."""
    if A.base != R.base:
        raise FieldMismatch("tensor product of algebras over different fields")
    k = A.base
    ea, er = A.dim, R.dim
    e = ea * er
    mul = [[[0] * e for _ in range(e)] for _ in range(e)]
    for i, j, l, c in A.structure:
        for a, b, d, c2 in R.structure:
            slot = mul[i * er + a][j * er + b]
            slot[l * er + d] = k.add(slot[l * er + d], k.mul(c, c2))
    unit = tuple(k.mul(u, v) for u in A.unit for v in R.unit)
    names = tuple(f"{x}*{y}" for x in A.basis_names for y in R.basis_names)
    return AlgebraTable(k, names, tuple(tuple(tuple(v) for v in row) for row in mul), unit)

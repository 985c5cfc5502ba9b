"""Semilinear maps D: V -> W (x) B over an operator, and their exterior powers."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from b_operators.errors import BadExponent, DimensionMismatch, NotConstantInput, ValidationError
from b_operators.matrices import nullspace
from b_operators.operator import AlgebraBValue, OperatorSpec, is_constant

logger = logging.getLogger(__name__)


def _sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def determinant(rows: Sequence[Sequence], zero):
    """Leibniz expansion; works over any commutative ring."""
    n = len(rows)
    total = zero
    for perm in itertools.permutations(range(n)):
        term = None
        for i, j in enumerate(perm):
            term = rows[i][j] if term is None else term * rows[i][j]
        if term is None:
            continue
        total = total + term if _sign(perm) > 0 else total - term
    return total


class SemilinearMap:
    """D(e_j) = sum_w matrix[w][j] e_w, extended by D(a v) = apply(a) D(v).

    ``embedding`` gives the position of each basis vector of V among those of W.
    """

    def __init__(
        self,
        operator: OperatorSpec,
        dim_V: int,
        dim_W: int,
        matrix: Sequence[Sequence[AlgebraBValue]],
        embedding: Optional[Sequence[int]] = None,
    ):
        if dim_V < 1 or dim_W < 1:
            raise DimensionMismatch("dimensions must be positive")
        if len(matrix) != dim_W or any(len(row) != dim_V for row in matrix):
            raise DimensionMismatch(f"matrix must be {dim_W}x{dim_V}")
        embedding = tuple(range(dim_V)) if embedding is None else tuple(embedding)
        if len(embedding) != dim_V or any(b <= a for a, b in zip(embedding, embedding[1:])):
            raise ValidationError("embedding must list dim_V increasing positions")
        if embedding and (embedding[0] < 0 or embedding[-1] >= dim_W):
            raise DimensionMismatch("embedding points outside W")
        self.operator = operator
        self.dim_V = dim_V
        self.dim_W = dim_W
        self.matrix = tuple(tuple(row) for row in matrix)
        self.embedding = embedding

    def __eq__(self, other):
        return (
            isinstance(other, SemilinearMap)
            and self.operator == other.operator
            and (self.dim_V, self.dim_W, self.embedding) == (other.dim_V, other.dim_W, other.embedding)
            and self.matrix == other.matrix
        )

    @property
    def field(self):
        return self.operator.field


def coordinatewise(op: OperatorSpec, dim: int) -> SemilinearMap:
    """The operator applied to each coordinate of K^dim."""
    one = AlgebraBValue.one(op.algebra, op.field)
    zero = AlgebraBValue.zero(op.algebra, op.field)
    matrix = [[one if i == j else zero for j in range(dim)] for i in range(dim)]
    return SemilinearMap(op, dim, dim, matrix)


def _vector(D: SemilinearMap, v: Sequence) -> list:
    if len(v) != D.dim_V:
        raise DimensionMismatch(f"expected a vector of length {D.dim_V}, got {len(v)}")
    return [D.field.convert(a) for a in v]


def apply_vec(D: SemilinearMap, v: Sequence) -> List[AlgebraBValue]:
    v = _vector(D, v)
    op = D.operator
    images = [op.apply(a) for a in v]
    out = []
    for row in D.matrix:
        total = AlgebraBValue.zero(op.algebra, op.field)
        for image, entry in zip(images, row):
            if not image.is_zero() and not entry.is_zero():
                total = total + image * entry
        out.append(total)
    return out


def is_constant_vec(D: SemilinearMap, v: Sequence) -> bool:
    v = _vector(D, v)
    op = D.operator
    expected = [AlgebraBValue.zero(op.algebra, op.field)] * D.dim_W
    for pos, a in zip(D.embedding, v):
        expected[pos] = op.lift(a)
    return apply_vec(D, v) == expected


def exterior_power(D: SemilinearMap, n: int) -> SemilinearMap:
    """Lambda^n D; entries are n x n minors over K (x) B."""
    if n < 1 or n > D.dim_V:
        raise BadExponent(f"exterior power {n} of a {D.dim_V}-dimensional space")
    op = D.operator
    zero = AlgebraBValue.zero(op.algebra, op.field)
    cols = list(itertools.combinations(range(D.dim_V), n))
    rows = list(itertools.combinations(range(D.dim_W), n))
    matrix = [
        [determinant([[D.matrix[r][c] for c in cs] for r in rs], zero) for cs in cols]
        for rs in rows
    ]
    row_index = {rs: i for i, rs in enumerate(rows)}
    embedding = [row_index[tuple(D.embedding[c] for c in cs)] for cs in cols]
    return SemilinearMap(op, len(cols), len(rows), matrix, embedding)


def wedge(vectors: Sequence[Sequence], field) -> list:
    """Coordinates of v_1 ^ ... ^ v_n in the basis e_S of Lambda^n, S in lexicographic order."""
    n = len(vectors)
    dim = len(vectors[0])
    vectors = [[field.convert(a) for a in v] for v in vectors]
    return [
        determinant([[vectors[j][s] for j in range(n)] for s in subset], field.zero)
        for subset in itertools.combinations(range(dim), n)
    ]


@dataclass(frozen=True)
class LinearDisjointnessReport:
    kernel: List[List[str]]
    violations: List[Tuple[int, int, str]]
    wedge_constant: Optional[bool]

    @property
    def passed(self) -> bool:
        return not self.violations and self.wedge_constant is not False

    def to_dict(self) -> Dict[str, object]:
        return {
            "kernel": self.kernel,
            "constant_coefficients": not self.violations,
            "violations": [list(v) for v in self.violations],
            "wedge_constant": self.wedge_constant,
            "passed": self.passed,
        }


def wedge_is_constant(D: SemilinearMap, vectors: Sequence[Sequence]) -> bool:
    n = len(vectors)
    return is_constant_vec(exterior_power(D, n), wedge(vectors, D.field))


def dependency_constancy_check(D: SemilinearMap, vectors: Sequence[Sequence]) -> LinearDisjointnessReport:
    """Every entry of the echelon kernel basis of [v_0 ... v_n] must be a constant."""
    vectors = [_vector(D, v) for v in vectors]
    for i, v in enumerate(vectors):
        if not is_constant_vec(D, v):
            raise NotConstantInput(i)
    K = D.field
    columns = len(vectors)
    rows = [[v[r] for v in vectors] for r in range(D.dim_V)]
    kernel = nullspace(rows, columns, K)
    violations = [
        (b, i, str(a))
        for b, vec in enumerate(kernel)
        for i, a in enumerate(vec)
        if not is_constant(D.operator, a)
    ]
    independent = not kernel and 0 < columns <= D.dim_V
    wedge_constant = wedge_is_constant(D, vectors) if independent else None
    if violations:
        logger.warning("non-constant kernel coefficients: %s", violations)
    return LinearDisjointnessReport([[str(a) for a in vec] for vec in kernel], violations, wedge_constant)

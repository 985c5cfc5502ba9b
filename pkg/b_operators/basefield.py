"""Exact arithmetic for F_q, K = k(y_1..y_m) and one-level p-th root towers.

Elements of F_q are int codes: the element sum a_i g^i has code sum a_i p^i.
Multiplication goes through log/exp tables built once per field, addition
works digit-wise in base p.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from b_operators.errors import (
    DivisionByZero,
    FieldMismatch,
    NotIrreducible,
    UnsupportedTower,
    ValidationError,
    VariableClash,
)
from b_operators.matrices import solve
from b_operators.polynomial import (
    Poly,
    PolyRing,
    degrevlex,
    div_exact,
    exponents_divisible,
    iter_monomials,
    poly_gcd,
)

logger = logging.getLogger(__name__)

ADD_TABLE_LIMIT = 1024
MAX_IRREDUCIBILITY_DEGREE = 8
GENERATOR_NAME = "g"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _fp_poly_rem(a: List[int], b: List[int], p: int) -> List[int]:
    """Remainder of a by monic b over F_p (ascending coefficient lists)."""
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1]
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _is_irreducible(poly: List[int], p: int) -> bool:
    n = len(poly) - 1
    for d in range(1, n // 2 + 1):
        for tail in iter_monomials(d, p):
            divisor = list(tail) + [1]
            if not _fp_poly_rem(poly, divisor, p):
                return False
    return True


class BaseField:
    """The finite field F_q = F_p[g]/(min_poly)."""

    def __init__(self, p: int, min_poly: Optional[Sequence[int]] = None):
        if not _is_prime(p):
            raise ValidationError(f"characteristic {p} is not prime")
        min_poly = [0, 1] if min_poly is None else [int(c) % p for c in min_poly]
        while min_poly and min_poly[-1] == 0:
            min_poly.pop()
        if len(min_poly) < 2:
            raise NotIrreducible(f"minimal polynomial {min_poly} has degree < 1")
        lead_inv = pow(min_poly[-1], p - 2, p)
        min_poly = [(c * lead_inv) % p for c in min_poly]
        n = len(min_poly) - 1
        if n > MAX_IRREDUCIBILITY_DEGREE:
            raise ValidationError(f"extension degree {n} exceeds {MAX_IRREDUCIBILITY_DEGREE}")
        if not _is_irreducible(min_poly, p):
            raise NotIrreducible(f"{min_poly} is reducible over F_{p}")
        self.p = p
        self.deg = n
        self.q = p ** n
        self.min_poly = tuple(min_poly)
        self.zero = 0
        self.one = 1
        self._weights = p ** np.arange(n, dtype=np.int64)
        self.digits = (np.arange(self.q, dtype=np.int64)[:, None] // self._weights) % p
        self._build_tables()
        logger.debug("built F_%d with minimal polynomial %s", self.q, self.min_poly)

    def _mul_digits(self, a: Sequence[int], b: Sequence[int]) -> List[int]:
        p, n = self.p, self.deg
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _fp_poly_rem(prod, list(self.min_poly), p)
        return rem + [0] * (n - len(rem))

    def _code(self, digits: Iterable[int]) -> int:
        return int(sum(int(d) * self.p ** i for i, d in enumerate(digits)))

    def _build_tables(self):
        p, q = self.p, self.q
        if self.deg == 1:
            self._exp = self._log = None
        else:
            digit_rows = self.digits.tolist()
            for candidate in range(2, q):
                exp = [1]
                cur = digit_rows[candidate]
                while self._code(cur) != 1:
                    exp.append(self._code(cur))
                    cur = self._mul_digits(cur, digit_rows[candidate])
                if len(exp) == q - 1:
                    break
            log = [0] * q
            for i, c in enumerate(exp):
                log[c] = i
            self._exp = exp + exp
            self._log = log
            self._exp_np = np.array(self._exp, dtype=np.int64)
            self._log_np = np.array(self._log, dtype=np.int64)
        if self.deg > 1 and p > 2:
            self._add = self._add_np = None
            if q <= ADD_TABLE_LIMIT:
                self._add_np = ((self.digits[:, None, :] + self.digits[None, :, :]) % p) @ self._weights
                self._add = self._add_np.tolist()
            self._neg = (((-self.digits) % p) @ self._weights).tolist()
        else:
            self._add = self._add_np = None
            self._neg = None

    def __eq__(self, other):
        return isinstance(other, BaseField) and (self.p, self.min_poly) == (other.p, other.min_poly)

    def __hash__(self):
        return hash((self.p, self.min_poly))

    def __repr__(self):
        return f"BaseField(p={self.p}, min_poly={list(self.min_poly)})"

    @property
    def base(self) -> "BaseField":
        return self

    @property
    def generator(self) -> int:
        if self.deg > 1:
            return self.p
        return (-self.min_poly[0]) % self.p

    # field protocol

    def is_element(self, x) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= int(x) < self.q

    def is_zero(self, a: int) -> bool:
        return a == 0

    def from_int(self, n: int) -> int:
        return int(n) % self.p

    def lift_code(self, code: int) -> int:
        return int(code)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.deg:
            raise ValidationError(f"{list(coeffs)} has more than {self.deg} coefficients")
        return self._code(int(c) % self.p for c in coeffs)

    def coeffs(self, a: int) -> List[int]:
        return self.digits[a].tolist()

    def add(self, a: int, b: int) -> int:
        if self.deg == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a][b]
        return int(((self.digits[a] + self.digits[b]) % self.p) @ self._weights)

    def neg(self, a: int) -> int:
        if self.deg == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.deg == 1:
            return (a * b) % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero in F_q")
        if self.deg == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if a == 0:
            return 1 if n == 0 else 0
        if self.deg == 1:
            return pow(a, n, self.p)
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def pth_root(self, a: int) -> int:
        return self.pow(a, self.q // self.p)

    # vectorized

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.deg == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add_np is not None:
            return self._add_np[a, b]
        return ((self.digits[a] + self.digits[b]) % self.p) @ self._weights

    def vmul(self, a: np.ndarray, b) -> np.ndarray:
        if self.deg == 1:
            return (a * b) % self.p
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = self._exp_np[self._log_np[a] + self._log_np[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    # printing

    def _symmetric(self, v: int) -> int:
        return v - self.p if self.p > 2 and v > self.p // 2 else v

    def format(self, a: int) -> str:
        if a < self.p:
            return str(self._symmetric(a))
        parts = []
        for i, d in reversed(list(enumerate(self.coeffs(a)))):
            if not d:
                continue
            s = self._symmetric(d)
            mono = "" if i == 0 else (GENERATOR_NAME if i == 1 else f"{GENERATOR_NAME}^{i}")
            mag = abs(s)
            body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
            if not parts:
                parts.append(f"-{body}" if s < 0 else body)
            else:
                parts.append(f" - {body}" if s < 0 else f" + {body}")
        return "".join(parts)

    def format_coefficient(self, a: int) -> Tuple[bool, str]:
        if a < self.p:
            s = self._symmetric(a)
            mag = abs(s)
            return s < 0, "" if mag == 1 else str(mag)
        return False, f"({self.format(a)})"


class RationalFunctionField:
    """K = k(y_1..y_m) with elements stored as coprime num/den, den monic under degrevlex."""

    def __init__(self, base: BaseField, variables: Sequence[str] = ()):
        if GENERATOR_NAME in variables and base.deg > 1:
            raise VariableClash([GENERATOR_NAME])
        self.base = base
        self.p = base.p
        self.variables = tuple(variables)
        self.ring = PolyRing(base, self.variables)
        self.zero = RationalFunction(self, self.ring.zero, self.ring.one)
        self.one = RationalFunction(self, self.ring.one, self.ring.one)

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunctionField)
            and self.base == other.base
            and self.variables == other.variables
        )

    def __hash__(self):
        return hash((self.base, self.variables))

    def __repr__(self):
        return f"RationalFunctionField({self.base!r}, {list(self.variables)})"

    def new(self, num: Poly, den: Optional[Poly] = None) -> "RationalFunction":
        den = self.ring.one if den is None else den
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not num:
            return self.zero
        if not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = div_exact(num, g), div_exact(den, g)
        _, lc = den.leading(degrevlex)
        if lc != 1:
            inv = self.base.inv(lc)
            num, den = num.scale(inv), den.scale(inv)
        return RationalFunction(self, num, den)

    def gen(self, name: str) -> "RationalFunction":
        return RationalFunction(self, self.ring.gen(name), self.ring.one)

    def constant(self, code: int) -> "RationalFunction":
        return RationalFunction(self, self.ring.constant(code), self.ring.one)

    def lift_code(self, code: int) -> "RationalFunction":
        return self.constant(code)

    def from_int(self, n: int) -> "RationalFunction":
        return self.constant(self.base.from_int(n))

    def convert(self, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            if x.field != self:
                raise FieldMismatch(f"{x.field!r} is not {self!r}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        raise FieldMismatch(f"cannot convert {x!r} into {self!r}")

    def embed(self, a: "RationalFunction") -> "RationalFunction":
        """Move ``a`` from a field on a subset of the variables into this one."""
        if a.field == self:
            return a
        if a.field.base != self.base:
            raise FieldMismatch("different base fields")
        return RationalFunction(self, a.num.rename(self.ring), a.den.rename(self.ring))

    # field protocol

    def is_element(self, x) -> bool:
        return isinstance(x, RationalFunction) and x.field == self

    def is_zero(self, a) -> bool:
        return not a.num

    def add(self, a, b):
        if a.den == b.den:
            if a.den.is_constant():
                num = a.num + b.num
                return RationalFunction(self, num, a.den) if num else self.zero
            return self.new(a.num + b.num, a.den)
        return self.new(a.num * b.den + b.num * a.den, a.den * b.den)

    def neg(self, a):
        return RationalFunction(self, -a.num, a.den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a.num or not b.num:
            return self.zero
        if a.den.is_constant() and b.den.is_constant():
            return RationalFunction(self, a.num * b.num, a.den)
        return self.new(a.num * b.num, a.den * b.den)

    def inv(self, a):
        if not a.num:
            raise DivisionByZero(f"inverse of zero in {self!r}")
        return self.new(a.den, a.num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        return RationalFunction(self, a.num ** n, a.den ** n) if a.den.is_constant() else self.new(a.num ** n, a.den ** n)

    # Frobenius and roots

    def _frobenius_poly(self, f: Poly) -> Poly:
        p, base = self.p, self.base
        return self.ring.from_dict({tuple(e * p for e in m): base.frobenius(c) for m, c in f.terms.items()})

    def _root_poly(self, f: Poly) -> Optional[Poly]:
        if not exponents_divisible(f, self.p):
            return None
        p, base = self.p, self.base
        return self.ring.from_dict({tuple(e // p for e in m): base.pth_root(c) for m, c in f.terms.items()})

    def frobenius(self, a):
        return RationalFunction(self, self._frobenius_poly(a.num), self._frobenius_poly(a.den))

    def pth_root(self, a) -> Optional["RationalFunction"]:
        num, den = self._root_poly(a.num), self._root_poly(a.den)
        if num is None or den is None:
            return None
        return RationalFunction(self, num, den)

    def pth_power_decompose(self, a) -> Dict[Tuple[int, ...], "RationalFunction"]:
        """Coordinates of ``a`` over the K^p-basis {y^beta}, as p-th roots.

        Returns r with a = sum_beta r[beta]^p * y^beta.
        """
        p = self.p
        if not a.num:
            return {}
        # a = num * den^(p-1) / den^p, and den^p is a p-th power
        expanded = a.num * a.den ** (p - 1)
        groups: Dict[Tuple[int, ...], Dict] = {}
        for m, c in expanded.terms.items():
            beta = tuple(e % p for e in m)
            groups.setdefault(beta, {})[tuple(e - b for e, b in zip(m, beta))] = c
        out = {}
        for beta, terms in groups.items():
            root = self._root_poly(Poly(self.ring, terms))
            out[beta] = self.new(root, a.den)
        return out

    # printing

    def format(self, a) -> str:
        if a.den == self.ring.one:
            return a.num.format()
        num = a.num.format()
        if len(a.num.terms) > 1:
            num = f"({num})"
        den = a.den.format()
        if len(a.den.terms) > 1 or not _is_bare_monomial(a.den):
            den = f"({den})"
        return f"{num}/{den}"

    def format_coefficient(self, a) -> Tuple[bool, str]:
        if a.den == self.ring.one and len(a.num.terms) == 1:
            (m, c), = a.num.terms.items()
            negative, body = self.base.format_coefficient(c)
            if not any(m):
                return negative, body
            mono_text = self.ring.monomial(m).format()
            return negative, f"{body}*{mono_text}" if body else mono_text
        return False, f"({self.format(a)})"


def _is_bare_monomial(f: Poly) -> bool:
    if len(f.terms) != 1:
        return False
    (m, c), = f.terms.items()
    return c == 1 and sum(m) > 0 and sum(1 for e in m if e) == 1


class RationalFunction:
    """Element of a ``RationalFunctionField``."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: RationalFunctionField, num: Poly, den: Poly):
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    def _other(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field!r} is not {self.field!r}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return None

    def __add__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.field.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.field.sub(self, other)

    def __rsub__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.field.sub(other, self)

    def __mul__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.field.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.field.div(self, other)

    def __rtruediv__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.field.div(other, self)

    def __neg__(self):
        return self.field.neg(self)

    def __pow__(self, n: int):
        return self.field.pow(self, n)

    def __eq__(self, other):
        try:
            other = self._other(other)
        except FieldMismatch:
            return False
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __str__(self):
        return self.field.format(self)

    def __repr__(self):
        return f"RationalFunction({self.field.format(self)!r})"


class TowerField:
    """L = K(z_1..z_r) with z_i^p = t_i, t_i in K.

    Elements are polynomials over K in the root names with every degree below p.
    The t_i are checked to be non-p-th powers and pairwise p-independent only.
    """

    def __init__(self, base_field: RationalFunctionField, roots: Sequence[Tuple[str, RationalFunction]], check: bool = True):
        self.K = base_field
        self.base = base_field.base
        self.p = base_field.p
        self.names = tuple(name for name, _ in roots)
        self.relations = tuple(base_field.convert(t) for _, t in roots)
        clash = set(self.names) & (set(base_field.variables) | {GENERATOR_NAME})
        if clash:
            raise VariableClash(clash)
        self.ring = PolyRing(base_field, self.names)
        self.zero = TowerElement(self, self.ring.zero)
        self.one = TowerElement(self, self.ring.one)
        if check:
            self._check_relations()

    def _check_relations(self):
        for name, t in zip(self.names, self.relations):
            if self.K.pth_root(t) is not None:
                raise UnsupportedTower(f"{name}^{self.p} = {t} adjoins an element of K")
        for i in range(len(self.names)):
            single = TowerField(self.K, [(self.names[i], self.relations[i])], check=False)
            for j in range(i + 1, len(self.names)):
                if single._root_coordinates(self.relations[j]) is not None:
                    raise UnsupportedTower(
                        f"{self.relations[j]} is a p-th power in K({self.names[i]}); roots are not p-independent"
                    )

    def __eq__(self, other):
        return (
            isinstance(other, TowerField)
            and self.K == other.K
            and self.names == other.names
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.K, self.names, self.relations))

    def __repr__(self):
        rel = ", ".join(f"{n}^{self.p}={t}" for n, t in zip(self.names, self.relations))
        return f"TowerField({self.K!r}, {rel})"

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.K.variables + self.names

    def _reduce(self, f: Poly) -> Poly:
        p = self.p
        if all(e < p for m in f.terms for e in m):
            return f
        out = self.ring.zero
        for m, c in f.terms.items():
            for t, e in zip(self.relations, m):
                if e >= p:
                    c = c * t ** (e // p)
            out = out + self.ring.monomial(tuple(e % p for e in m), c)
        return out

    def constant(self, a: RationalFunction) -> "TowerElement":
        return TowerElement(self, self.ring.constant(self.K.convert(a)))

    embed = constant

    def gen(self, name: str) -> "TowerElement":
        if name in self.names:
            return TowerElement(self, self.ring.gen(name))
        return self.constant(self.K.gen(name))

    def lift_code(self, code: int) -> "TowerElement":
        return self.constant(self.K.constant(code))

    def from_int(self, n: int) -> "TowerElement":
        return self.constant(self.K.from_int(n))

    def convert(self, x) -> "TowerElement":
        if isinstance(x, TowerElement):
            if x.tower != self:
                raise FieldMismatch(f"{x.tower!r} is not {self!r}")
            return x
        if isinstance(x, RationalFunction):
            return self.constant(x)
        if isinstance(x, int):
            return self.from_int(x)
        raise FieldMismatch(f"cannot convert {x!r} into {self!r}")

    def in_base(self, a: "TowerElement") -> bool:
        return a.poly.is_constant()

    # field protocol

    def is_element(self, x) -> bool:
        return isinstance(x, TowerElement) and x.tower == self

    def is_zero(self, a) -> bool:
        return not a.poly

    def add(self, a, b):
        return TowerElement(self, a.poly + b.poly)

    def neg(self, a):
        return TowerElement(self, -a.poly)

    def sub(self, a, b):
        return TowerElement(self, a.poly - b.poly)

    def mul(self, a, b):
        return TowerElement(self, self._reduce(a.poly * b.poly))

    def norm(self, a) -> RationalFunction:
        """a^p, which always lies in K."""
        total = self.K.zero
        for m, c in a.poly.terms.items():
            term = self.K.frobenius(c)
            for t, e in zip(self.relations, m):
                if e:
                    term = term * t ** e
            total = total + term
        return total

    def inv(self, a):
        if not a.poly:
            raise DivisionByZero(f"inverse of zero in {self!r}")
        if self.in_base(a):
            return self.constant(self.K.inv(a.poly.constant_value()))
        return self.pow(a, self.p - 1) * self.constant(self.K.inv(self.norm(a)))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result, base = self.one, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def frobenius(self, a):
        return self.constant(self.norm(a))

    def _root_coordinates(self, w: RationalFunction) -> Optional[Dict[Tuple[int, ...], RationalFunction]]:
        """a_alpha in K with w = sum_alpha a_alpha^p t^alpha, or None."""
        K, p = self.K, self.p
        alphas = list(iter_monomials(len(self.names), p))
        columns = []
        for alpha in alphas:
            t_alpha = K.one
            for t, e in zip(self.relations, alpha):
                if e:
                    t_alpha = t_alpha * t ** e
            columns.append(K.pth_power_decompose(t_alpha))
        # w_beta = sum_alpha a_alpha * c_alpha_beta after taking p-th roots, linear over K
        target = K.pth_power_decompose(w)
        betas = sorted(set(target).union(*[set(c) for c in columns]))
        if not betas:
            return {alpha: K.zero for alpha in alphas}
        rows = [[col.get(beta, K.zero) for col in columns] for beta in betas]
        rhs = [target.get(beta, K.zero) for beta in betas]
        sol = solve(rows, rhs, K)
        if sol is None:
            return None
        return dict(zip(alphas, sol))

    def pth_root(self, a) -> Optional["TowerElement"]:
        if not self.in_base(a):
            return None
        coords = self._root_coordinates(a.poly.constant_value())
        if coords is None:
            return None
        return TowerElement(self, self.ring.from_dict(dict(coords)))

    def format(self, a) -> str:
        return a.poly.format()

    def format_coefficient(self, a) -> Tuple[bool, str]:
        if self.in_base(a):
            return self.K.format_coefficient(a.poly.constant_value())
        return False, f"({a.poly.format()})"


class TowerElement:
    """Element of a ``TowerField``."""

    __slots__ = ("tower", "poly")

    def __init__(self, tower: TowerField, poly: Poly):
        self.tower = tower
        self.poly = poly

    @property
    def field(self) -> TowerField:
        return self.tower

    @property
    def coeffs(self) -> Dict[Tuple[int, ...], RationalFunction]:
        return dict(self.poly.terms)

    def _other(self, other):
        if isinstance(other, (TowerElement, RationalFunction, int)):
            return self.tower.convert(other)
        return None

    def __add__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.tower.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.tower.sub(self, other)

    def __rsub__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.tower.sub(other, self)

    def __mul__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.tower.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else self.tower.div(self, other)

    def __neg__(self):
        return self.tower.neg(self)

    def __pow__(self, n: int):
        return self.tower.pow(self, n)

    def __eq__(self, other):
        try:
            other = self._other(other)
        except FieldMismatch:
            return False
        if other is None:
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __bool__(self):
        return bool(self.poly)

    def __str__(self):
        return self.tower.format(self)

    def __repr__(self):
        return f"TowerElement({self.tower.format(self)!r})"


FieldElement = "int | RationalFunction | TowerElement"


def _field_of(a, field):
    if field is not None:
        return field
    if isinstance(a, (RationalFunction, TowerElement)):
        return a.field
    raise FieldMismatch(f"cannot infer the field of {a!r}; pass it explicitly")


def frobenius(a, field=None):
    """a^p; additive in characteristic p."""
    return _field_of(a, field).frobenius(a)


def pth_root(a, field=None):
    """b with b^p = a, or None when a is not a p-th power."""
    return _field_of(a, field).pth_root(a)


def lambda0(a, field=None):
    """The p-th root of a when it exists, zero otherwise."""
    field = _field_of(a, field)
    root = field.pth_root(a)
    return field.zero if root is None else root


def pth_power_decompose(a: RationalFunction) -> Dict[Tuple[int, ...], RationalFunction]:
    return a.field.pth_power_decompose(a)


def pth_power_in_tower(w: RationalFunction, tower: TowerField) -> bool:
    """Whether w in K is a p-th power in the tower L, i.e. w in K^p(t_1..t_r)."""
    if not tower.names:
        return tower.K.pth_root(w) is not None
    return tower._root_coordinates(tower.K.convert(w)) is not None


def breaks_lambda0(w: RationalFunction, tower: TowerField) -> bool:
    """True when w lies in L^p but not in K^p, so K <= L does not preserve lambda0 at w."""
    return pth_power_in_tower(w, tower) and tower.K.pth_root(w) is None

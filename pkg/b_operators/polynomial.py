"""Sparse multivariate polynomials over an exact coefficient domain.

A polynomial is a dict from exponent tuples to non-zero coefficients. The
coefficient domain is any object exposing the field protocol used across
the package (``zero``, ``one``, ``add``, ``sub``, ``neg``, ``mul``, ``div``,
``is_zero``, ``from_int``, ``is_element``, ``format_coefficient``):
``BaseField`` codes, rational functions, or tower elements.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from b_operators.errors import DivisionByZero, RingMismatch, VariableClash, VariableMismatch

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def degrevlex(exp: Monomial):
    """Sort key of the degree reverse lexicographic order (larger is bigger)."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


class BlockOrder:
    """Two-block elimination order: degrevlex on the first block, ties by degrevlex on the rest."""

    def __init__(self, n_first: int):
        self.n_first = n_first

    def __call__(self, exp: Monomial):
        return (degrevlex(exp[: self.n_first]), degrevlex(exp[self.n_first :]))

    def __eq__(self, other):
        return isinstance(other, BlockOrder) and other.n_first == self.n_first

    def __hash__(self):
        return hash(("block", self.n_first))

    def __repr__(self):
        return f"BlockOrder({self.n_first})"


def block_order(n_first: int) -> BlockOrder:
    return BlockOrder(n_first)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _add_exp(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _sub_exp(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


class PolyRing:
    """Polynomial ring over ``domain`` in the declared ``variables``."""

    def __init__(self, domain, variables: Sequence[str]):
        self.domain = domain
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            seen, dupes = set(), set()
            for v in self.variables:
                (dupes if v in seen else seen).add(v)
            raise VariableClash(dupes)
        self.ngens = len(self.variables)
        self._index = {v: i for i, v in enumerate(self.variables)}
        self.zero_monomial: Monomial = (0,) * self.ngens

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.domain == other.domain
        )

    def __hash__(self):
        return hash((self.variables, self.domain))

    def __repr__(self):
        return f"PolyRing({self.domain!r}, {list(self.variables)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise VariableMismatch(f"unknown variable {name!r}") from None

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return Poly(self, {self.zero_monomial: self.domain.one})

    def gen(self, name) -> "Poly":
        i = name if isinstance(name, int) else self.index(name)
        exp = tuple(1 if j == i else 0 for j in range(self.ngens))
        return Poly(self, {exp: self.domain.one})

    @property
    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.gen(i) for i in range(self.ngens))

    def constant(self, c) -> "Poly":
        if self.domain.is_zero(c):
            return self.zero
        return Poly(self, {self.zero_monomial: c})

    def lift_code(self, code: int) -> "Poly":
        return self.constant(self.domain.lift_code(code))

    def from_int(self, n: int) -> "Poly":
        return self.constant(self.domain.from_int(n))

    def monomial(self, exp: Monomial, c=None) -> "Poly":
        c = self.domain.one if c is None else c
        return self.from_dict({tuple(exp): c})

    def from_dict(self, terms: Dict[Monomial, object]) -> "Poly":
        is_zero = self.domain.is_zero
        return Poly(self, {m: c for m, c in terms.items() if not is_zero(c)})

    def convert(self, x) -> "Poly":
        if isinstance(x, Poly):
            if x.ring != self:
                raise RingMismatch(f"{x.ring!r} is not {self!r}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if self.domain.is_element(x):
            return self.constant(x)
        raise RingMismatch(f"cannot convert {x!r} into {self!r}")

    def with_variables(self, variables: Sequence[str]) -> "PolyRing":
        return PolyRing(self.domain, variables)


class Poly:
    """Immutable sparse polynomial; ``terms`` never holds zero coefficients."""

    __slots__ = ("ring", "terms", "_hash", "_leading")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, object]):
        self.ring = ring
        self.terms = terms
        self._hash = None
        self._leading = {}

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{other.ring!r} is not {self.ring!r}")
            return other
        if isinstance(other, int) or self.ring.domain.is_element(other):
            return self.ring.convert(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        dom = self.ring.domain
        terms = dict(self.terms)
        for m, c in other.terms.items():
            if m in terms:
                s = dom.add(terms[m], c)
                if dom.is_zero(s):
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.domain.neg
        return Poly(self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return self.ring.zero
        dom = self.ring.domain
        if len(other.terms) == 1:
            (m, c), = other.terms.items()
            return self.mul_term(m, c)
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            return other.mul_term(m, c)
        terms: Dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _add_exp(m1, m2)
                prod = dom.mul(c1, c2)
                terms[m] = dom.add(terms[m], prod) if m in terms else prod
        return self.ring.from_dict(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            raise DivisionByZero("division of a polynomial by zero")
        if other.is_constant():
            return self.scale(self.ring.domain.inv(other.constant_value()))
        q = div_exact(self, other)
        if q is None:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def scale(self, c) -> "Poly":
        dom = self.ring.domain
        if dom.is_zero(c):
            return self.ring.zero
        return self.ring.from_dict({m: dom.mul(v, c) for m, v in self.terms.items()})

    def mul_term(self, exp: Monomial, c) -> "Poly":
        dom = self.ring.domain
        if dom.is_zero(c):
            return self.ring.zero
        return self.ring.from_dict({_add_exp(m, exp): dom.mul(v, c) for m, v in self.terms.items()})

    # comparison

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            other = self._coerce(other)
        except RingMismatch:
            return False
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_monomial in self.terms)

    def constant_value(self):
        return self.terms.get(self.ring.zero_monomial, self.ring.domain.zero)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, var) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def is_linear(self) -> bool:
        return self.total_degree() <= 1

    def variables_used(self) -> Tuple[int, ...]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return tuple(sorted(used))

    def leading(self, order: Callable = degrevlex):
        """Leading (monomial, coefficient) under ``order``."""
        cached = self._leading.get(order)
        if cached is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            m = max(self.terms, key=order)
            cached = (m, self.terms[m])
            self._leading[order] = cached
        return cached

    def monic(self, order: Callable = degrevlex) -> "Poly":
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self.scale(self.ring.domain.inv(c))

    def sorted_terms(self, order: Callable = degrevlex):
        return sorted(self.terms.items(), key=lambda t: order(t[0]), reverse=True)

    def coefficients_in(self, i: int) -> Dict[int, "Poly"]:
        """Coefficients as a polynomial in variable ``i`` (coefficients keep the same ring)."""
        out: Dict[int, Dict[Monomial, object]] = {}
        for m, c in self.terms.items():
            k = m[i]
            out.setdefault(k, {})[m[:i] + (0,) + m[i + 1 :]] = c
        return {k: Poly(self.ring, t) for k, t in out.items()}

    # substitution

    def evaluate(self, values: Sequence, coeff_map: Callable, zero):
        """Substitute ``values[i]`` for variable ``i``; coefficients go through ``coeff_map``."""
        powers = [dict() for _ in values]
        total = zero
        for exp, c in self.terms.items():
            term = coeff_map(c)
            for i, k in enumerate(exp):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = values[i] ** k
                    term = term * cache[k]
            total = total + term
        return total

    def map_coeffs(self, ring: PolyRing, fn: Callable) -> "Poly":
        return ring.from_dict({m: fn(c) for m, c in self.terms.items()})

    def rename(self, ring: PolyRing, mapping: Optional[Dict[str, str]] = None) -> "Poly":
        """Move into ``ring`` matching variables by (optionally renamed) name."""
        mapping = mapping or {}
        names = self.ring.variables
        target: Dict[int, int] = {}
        terms = {}
        for m, c in self.terms.items():
            new = [0] * ring.ngens
            for i, e in enumerate(m):
                if e:
                    if i not in target:
                        target[i] = ring.index(mapping.get(names[i], names[i]))
                    new[target[i]] += e
            terms[tuple(new)] = c
        return Poly(ring, terms)

    # printing

    def format(self, order: Callable = degrevlex) -> str:
        if not self.terms:
            return "0"
        dom = self.ring.domain
        out = []
        for m, c in self.sorted_terms(order):
            negative, body = dom.format_coefficient(c)
            mono = _format_monomial(self.ring.variables, m)
            if not mono:
                text = body or "1"
            elif body:
                text = f"{body}*{mono}"
            else:
                text = mono
            if not out:
                out.append(f"-{text}" if negative else text)
            else:
                out.append(f" - {text}" if negative else f" + {text}")
        return "".join(out)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.format()!r})"


def _format_monomial(variables: Sequence[str], exp: Monomial) -> str:
    parts = []
    for v, e in zip(variables, exp):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def div_exact(f: Poly, g: Poly, order: Callable = degrevlex) -> Optional[Poly]:
    """Quotient f/g when g divides f, else None."""
    if not g.terms:
        raise DivisionByZero("division of a polynomial by zero")
    dom = f.ring.domain
    lm_g, lc_g = g.leading(order)
    inv_lc = dom.inv(lc_g)
    rem = dict(f.terms)
    quot: Dict[Monomial, object] = {}
    while rem:
        m = max(rem, key=order)
        if not divides(lm_g, m):
            return None
        shift = _sub_exp(m, lm_g)
        c = dom.mul(rem[m], inv_lc)
        quot[shift] = c
        for mg, cg in g.terms.items():
            mm = _add_exp(mg, shift)
            v = dom.sub(rem.get(mm, dom.zero), dom.mul(c, cg))
            if dom.is_zero(v):
                rem.pop(mm, None)
            else:
                rem[mm] = v
    return Poly(f.ring, quot)


# gcd over a finite field: recursive primitive pseudo-remainder sequence


def _pseudo_remainder(a: Poly, b: Poly, i: int) -> Poly:
    db = b.degree(i)
    lcb = b.coefficients_in(i)[db]
    ring = a.ring
    r = a
    while r and r.degree(i) >= db:
        dr = r.degree(i)
        lcr = r.coefficients_in(i)[dr]
        shift = tuple(dr - db if j == i else 0 for j in range(ring.ngens))
        r = lcb * r - lcr * b.mul_term(shift, ring.domain.one)
    return r


def _content(f: Poly, i: int) -> Poly:
    coeffs = f.coefficients_in(i)
    g = None
    for k in sorted(coeffs):
        c = coeffs[k]
        g = c if g is None else _gcd(g, c, i + 1)
        if g.is_constant():
            return f.ring.one
    return g.monic()


def _primitive_part(f: Poly, i: int) -> Poly:
    c = _content(f, i)
    return f if c.is_constant() else div_exact(f, c)


def _gcd(f: Poly, g: Poly, i: int) -> Poly:
    ring = f.ring
    if not f:
        return g.monic()
    if not g:
        return f.monic()
    if f.is_constant() or g.is_constant():
        return ring.one
    if i >= ring.ngens:
        return ring.one
    cf, cg = _content(f, i), _content(g, i)
    c = _gcd(cf, cg, i + 1)
    a = f if cf.is_constant() else div_exact(f, cf)
    b = g if cg.is_constant() else div_exact(g, cg)
    if a.degree(i) < b.degree(i):
        a, b = b, a
    while b:
        if b.degree(i) == 0:
            a = ring.one
            break
        r = _pseudo_remainder(a, b, i)
        a, b = b, (_primitive_part(r, i) if r else ring.zero)
    if a.degree(i) > 0:
        a = _primitive_part(a, i)
    return (c * a).monic()


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic (degrevlex) gcd of two polynomials over a finite field."""
    if f.ring != g.ring:
        raise RingMismatch("gcd of polynomials from different rings")
    return _gcd(f, g, 0)


def exponents_divisible(f: Poly, p: int) -> bool:
    return all(e % p == 0 for m in f.terms for e in m)


def iter_monomials(n: int, bound: int) -> Iterable[Monomial]:
    """All exponent tuples of length n with entries in range(bound), lexicographic."""
    if n == 0:
        yield ()
        return
    for head in range(bound):
        for tail in iter_monomials(n - 1, bound):
            yield (head,) + tail

"""Buchberger's algorithm over F_q, K = k(y) and towers.

Pairs are selected by the normal strategy: smallest lcm of leading monomials
under the ideal's order, ties broken by the pair's (newer, older) indices.
Buchberger's product and chain criteria skip useless pairs. The result is
the reduced basis with monic elements, sorted by decreasing leading monomial.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from b_operators.errors import GroebnerBudgetExceeded, RingMismatch, VariableMismatch
from b_operators.polynomial import (
    BlockOrder,
    Poly,
    PolyRing,
    degrevlex,
    divides,
    lcm,
)

logger = logging.getLogger(__name__)

DEFAULT_GROEBNER_BUDGET = 20000


@dataclass(frozen=True)
class Ideal:
    ring: PolyRing
    gens: Tuple[Poly, ...]
    order: Callable = degrevlex

    def __post_init__(self):
        for g in self.gens:
            if g.ring != self.ring:
                raise RingMismatch(f"generator {g} does not live in {self.ring!r}")

    @classmethod
    def of(cls, ring: PolyRing, gens: Sequence[Poly], order: Callable = degrevlex) -> "Ideal":
        return cls(ring, tuple(ring.convert(g) for g in gens), order)

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.ring.variables

    def formatted(self) -> List[str]:
        return [g.format(self.order) for g in self.gens]


def normal_form(f: Poly, basis: Sequence[Poly], order: Callable = degrevlex) -> Poly:
    """Full reduction of f modulo ``basis``."""
    dom = f.ring.domain
    leads = [(g.leading(order), g) for g in basis if g]
    rest = dict(f.terms)
    remainder = {}
    while rest:
        m = max(rest, key=order)
        c = rest[m]
        for (lm, lc), g in leads:
            if divides(lm, m):
                factor = dom.div(c, lc)
                shift = tuple(a - b for a, b in zip(m, lm))
                for mg, cg in g.terms.items():
                    mm = tuple(a + b for a, b in zip(mg, shift))
                    v = dom.sub(rest.get(mm, dom.zero), dom.mul(factor, cg))
                    if dom.is_zero(v):
                        rest.pop(mm, None)
                    else:
                        rest[mm] = v
                break
        else:
            remainder[m] = c
            del rest[m]
    return Poly(f.ring, remainder)


def _s_polynomial(f: Poly, g: Poly, order: Callable) -> Poly:
    (mf, cf), (mg, cg) = f.leading(order), g.leading(order)
    dom = f.ring.domain
    m = lcm(mf, mg)
    left = f.mul_term(tuple(a - b for a, b in zip(m, mf)), dom.inv(cf))
    right = g.mul_term(tuple(a - b for a, b in zip(m, mg)), dom.inv(cg))
    return left - right


def _interreduce(basis: List[Poly], order: Callable) -> List[Poly]:
    minimal: List[Poly] = []
    for i, g in enumerate(basis):
        lm = g.leading(order)[0]
        dominated = any(
            divides(h.leading(order)[0], lm) and (h.leading(order)[0] != lm or j < i)
            for j, h in enumerate(basis)
            if j != i
        )
        if not dominated:
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        reduced.append(normal_form(g, others, order).monic(order))
    return sorted(reduced, key=lambda g: order(g.leading(order)[0]), reverse=True)


@functools.lru_cache(maxsize=256)
def _groebner(ring: PolyRing, gens: Tuple[Poly, ...], order: Callable, budget: Optional[int]) -> Tuple[Poly, ...]:
    basis: List[Poly] = []
    pending: List[Tuple[int, int]] = []

    def add(h: Poly):
        basis.append(h.monic(order))
        new = len(basis) - 1
        pending.extend((i, new) for i in range(new))

    for g in gens:
        if g:
            if g.is_constant():
                return (ring.one,)
            add(g)

    steps = 0
    while pending:
        lms = [g.leading(order)[0] for g in basis]
        pair = min(pending, key=lambda ij: (order(lcm(lms[ij[0]], lms[ij[1]])), ij[1], ij[0]))
        pending.remove(pair)
        steps += 1
        if budget is not None and steps > budget:
            raise GroebnerBudgetExceeded(budget)
        i, j = pair
        m = lcm(lms[i], lms[j])
        # coprime leading monomials: the S-polynomial reduces to zero
        if all(min(a, b) == 0 for a, b in zip(lms[i], lms[j])):
            continue
        # chain criterion: some other leading monomial divides the lcm and both side pairs are done
        if any(
            k not in pair
            and divides(lms[k], m)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(basis))
        ):
            continue
        h = normal_form(_s_polynomial(basis[i], basis[j], order), basis, order)
        if h:
            if h.is_constant():
                logger.debug("unit ideal after %d pairs", steps)
                return (ring.one,)
            add(h)
    logger.debug("Buchberger finished: %d pairs, %d basis elements", steps, len(basis))
    return tuple(_interreduce(basis, order))


def reduced_gb(ideal: Ideal, budget: Optional[int] = DEFAULT_GROEBNER_BUDGET) -> Ideal:
    """The reduced Groebner basis, as an Ideal with the same ring and order."""
    return Ideal(ideal.ring, _groebner(ideal.ring, ideal.gens, ideal.order, budget), ideal.order)


def _same_ring(a: Ideal, b: Ideal):
    if a.ring != b.ring or a.order != b.order:
        raise RingMismatch("ideals live in different rings or orders")


def ideal_member(f: Poly, ideal: Ideal, budget: Optional[int] = DEFAULT_GROEBNER_BUDGET) -> bool:
    if f.ring != ideal.ring:
        raise RingMismatch(f"{f} does not live in {ideal.ring!r}")
    return not normal_form(f, reduced_gb(ideal, budget).gens, ideal.order)


def ideal_equal(a: Ideal, b: Ideal, budget: Optional[int] = DEFAULT_GROEBNER_BUDGET) -> bool:
    _same_ring(a, b)
    return reduced_gb(a, budget).gens == reduced_gb(b, budget).gens


def is_trivial(ideal: Ideal, budget: Optional[int] = DEFAULT_GROEBNER_BUDGET) -> bool:
    gens = reduced_gb(ideal, budget).gens
    return len(gens) == 1 and gens[0].is_constant()


def eliminate(ideal: Ideal, keep_vars: Sequence[str], budget: Optional[int] = DEFAULT_GROEBNER_BUDGET) -> Ideal:
    """I intersected with K[keep_vars], in degrevlex over keep_vars (in the given order)."""
    ring = ideal.ring
    keep = list(keep_vars)
    unknown = set(keep) - set(ring.variables)
    if unknown:
        raise VariableMismatch(f"cannot keep unknown variables {sorted(unknown)}")
    drop = [v for v in ring.variables if v not in keep]
    elim_ring = PolyRing(ring.domain, drop + keep)
    order = BlockOrder(len(drop))
    gb = _groebner(elim_ring, tuple(g.rename(elim_ring) for g in ideal.gens), order, budget)
    keep_ring = PolyRing(ring.domain, keep)
    kept = [g.rename(keep_ring) for g in gb if not any(any(m[: len(drop)]) for m in g.terms)]
    logger.debug("eliminated %s: %d of %d basis elements survive", drop, len(kept), len(gb))
    return reduced_gb(Ideal(keep_ring, tuple(kept)), budget)

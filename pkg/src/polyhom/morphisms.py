"""Polyhomomorphisms between finite groups: relations carrying a per-point weight.

A nonzero value is a relation ``R`` of ``G x H`` with weight ``r`` on every
pair.  Each group carries a point mass (its Haar measure on a single element),
and the two domination ratios are

    alpha = r * #indef(R) / point_mass(G)
    beta  = r * #ker(R)   / point_mass(H)

both of which must lie in (0, 1].  The zero polyhomomorphism is its own variant.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import (
    DominationViolated,
    InternalInconsistency,
    MiddleGroupMismatch,
    NotASubgroup,
    ZeroPolyhom,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    all_subgroups,
    direct_product,
    index,
    intersect,
    quotient,
)
from .relations import Marginals, MultRelation, canonical_iso, pseudoinverse, rel_compose

Rational = Fraction | int


@dataclass(frozen=True)
class MeasuredGroup:
    group: FiniteGroup
    point_mass: Fraction = Fraction(1)

    def __post_init__(self):
        pm = Fraction(self.point_mass)
        if pm <= 0:
            raise ValueError("point mass must be positive")
        object.__setattr__(self, "point_mass", pm)

    @property
    def order(self) -> int:
        return self.group.order

    def total_mass(self) -> Fraction:
        return self.point_mass * self.group.order


@dataclass(frozen=True)
class Polyhom:
    """Use :func:`make_polyhom` or :func:`zero` rather than the constructor."""

    source: MeasuredGroup
    target: MeasuredGroup
    relation: MultRelation | None = None
    weight: Fraction | None = None
    alpha: Fraction = field(default=Fraction(0), compare=False)
    beta: Fraction = field(default=Fraction(0), compare=False)

    @property
    def is_zero(self) -> bool:
        return self.relation is None

    def marginals(self) -> Marginals:
        if self.relation is None:
            raise ZeroPolyhom("the zero polyhomomorphism has no carrier")
        return self.relation.marginals()

    def __repr__(self) -> str:
        if self.is_zero:
            return f"Polyhom(zero {self.source.group.name} -> {self.target.group.name})"
        return (
            f"Polyhom({self.source.group.name} -> {self.target.group.name}, "
            f"{len(self.relation)} pairs, weight={self.weight})"
        )


def make_polyhom(rel: MultRelation, weight: Rational, src: MeasuredGroup, tgt: MeasuredGroup) -> Polyhom:
    if rel.source != src.group or rel.target != tgt.group:
        raise MiddleGroupMismatch("relation groups do not match the measured groups")
    w = Fraction(weight)
    if w <= 0:
        raise ValueError("weight must be positive")
    _, _, ker, indef = rel.marginals()
    a = w * indef.order / src.point_mass
    b = w * ker.order / tgt.point_mass
    if a > 1:
        raise DominationViolated("alpha", a)
    if b > 1:
        raise DominationViolated("beta", b)
    return Polyhom(src, tgt, rel, w, a, b)


def zero(src: MeasuredGroup, tgt: MeasuredGroup) -> Polyhom:
    return Polyhom(src, tgt)


def identity(G: MeasuredGroup) -> Polyhom:
    return make_polyhom(MultRelation.identity(G.group), G.point_mass, G, G)


def alpha(P: Polyhom) -> Fraction:
    return P.alpha


def beta(P: Polyhom) -> Fraction:
    return P.beta


def weight_from_alpha(a: Fraction, rel: MultRelation, src: MeasuredGroup) -> Fraction:
    return a * src.point_mass / rel.marginals().indef.order


def weight_from_beta(b: Fraction, rel: MultRelation, tgt: MeasuredGroup) -> Fraction:
    return b * tgt.point_mass / rel.marginals().ker.order


def composition_indices(T: Polyhom, R: Polyhom) -> tuple[int, int]:
    """([indef R : indef R & dom T], [ker T : ker T & im R])."""
    _, imR, _, indefR = R.marginals()
    domT, _, kerT, _ = T.marginals()
    return index(indefR, intersect(indefR, domT)), index(kerT, intersect(kerT, imR))


def ph_compose(T: Polyhom, R: Polyhom) -> Polyhom:
    """T after R, with alpha and beta normalized by the two subgroup indices."""
    if R.target != T.source:
        raise MiddleGroupMismatch("middle measured groups differ")
    if R.is_zero or T.is_zero:
        return zero(R.source, T.target)
    rel = rel_compose(T.relation, R.relation)
    i_alpha, i_beta = composition_indices(T, R)
    a = R.alpha * T.alpha / i_alpha
    b = R.beta * T.beta / i_beta
    w_a = weight_from_alpha(a, rel, R.source)
    w_b = weight_from_beta(b, rel, T.target)
    if w_a != w_b:
        raise InternalInconsistency(f"weight from alpha {w_a} differs from weight from beta {w_b}")
    S = make_polyhom(rel, w_a, R.source, T.target)
    if S.alpha != a or S.beta != b:
        raise InternalInconsistency("recomputed alpha/beta differ from the composition formulas")
    return S


def compose_all(*factors: Polyhom) -> Polyhom:
    """compose_all(A, B, C) = A after B after C."""
    out = factors[-1]
    for F in reversed(factors[:-1]):
        out = ph_compose(F, out)
    return out


def involution(P: Polyhom) -> Polyhom:
    if P.is_zero:
        return zero(P.target, P.source)
    return Polyhom(P.target, P.source, pseudoinverse(P.relation), P.weight, P.beta, P.alpha)


def mu_phi_delta(G: MeasuredGroup, phi: Subgroup, delta: Subgroup) -> tuple[Polyhom, MeasuredGroup]:
    """G => phi/delta along g -> g*delta for g in phi; the quotient gets point mass #delta * pm."""
    if phi.parent != G.group:
        raise NotASubgroup("phi is not a subgroup of G")
    Q, qmap = quotient(phi, delta)
    target = MeasuredGroup(Q, G.point_mass * delta.order)
    codes = phi.array * Q.order + qmap.projection[phi.array]
    rel = MultRelation(G.group, Q, Subgroup(direct_product(G.group, Q), codes, check=False))
    return make_polyhom(rel, G.point_mass, G, target), target


@dataclass(frozen=True)
class Decomposition:
    first: Polyhom  # onto dom/ker
    middle: Polyhom  # isomorphism of the two quotients
    last: Polyhom  # back out of im/indef

    def recompose(self) -> Polyhom:
        return compose_all(self.last, self.middle, self.first)


def decompose(P: Polyhom) -> Decomposition:
    """Factor P as last . middle . first through dom/ker and im/indef."""
    if P.is_zero:
        raise ZeroPolyhom("cannot decompose the zero polyhomomorphism")
    dom, im, ker, indef = P.marginals()
    first, A = mu_phi_delta(P.source, dom, ker)
    out, B = mu_phi_delta(P.target, im, indef)
    iso = canonical_iso(P.relation)
    rel = MultRelation.graph(A.group, B.group, iso.map)
    middle = make_polyhom(rel, P.weight * ker.order * indef.order, A, B)
    return Decomposition(first, middle, involution(out))


# rational weights

@functools.lru_cache(maxsize=128)
def lambda_generators(G: FiniteGroup) -> frozenset[int]:
    """All indices [K1:K2] > 1 of nested subgroups K2 <= K1 of G."""
    subs = all_subgroups(G)
    gens = set()
    for K1 in subs:
        for K2 in subs:
            if K2.order < K1.order and K2.issubset(K1):
                gens.add(K1.order // K2.order)
    return frozenset(gens)


def in_semigroup(n: int, generators: Iterable[int]) -> bool:
    """Is n a (possibly empty) product of the generators?"""
    if n < 1:
        return False
    gens = sorted(g for g in set(generators) if g > 1 and n % g == 0)
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    reachable = {1}
    for d in divisors:
        if d in reachable:
            for g in gens:
                if n % (d * g) == 0:
                    reachable.add(d * g)
    return n in reachable


def lambda_membership(G: MeasuredGroup | FiniteGroup, q: Rational) -> bool:
    """Is 1/q in the semigroup generated by subgroup indices of G?"""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("q must be positive")
    if q.numerator != 1:
        return False
    group = G.group if isinstance(G, MeasuredGroup) else G
    return in_semigroup(q.denominator, lambda_generators(group))


def is_lambda_weighted(P: Polyhom, generators: Iterable[int] | None = None) -> bool:
    """alpha^-1 and beta^-1 lie in the index semigroup of the groups involved."""
    if P.is_zero:
        return True
    if generators is None:
        generators = lambda_generators(P.source.group) | lambda_generators(P.target.group)
    gens = set(generators)
    for r in (P.alpha, P.beta):
        inv = 1 / r
        if inv.denominator != 1 or not in_semigroup(inv.numerator, gens):
            return False
    return True


def box_measure(P: Polyhom, A: Iterable[int], B: Iterable[int]) -> Fraction:
    """Weight of the carrier inside A x B."""
    if P.is_zero:
        return Fraction(0)
    ma = np.zeros(P.source.order, dtype=bool)
    mb = np.zeros(P.target.order, dtype=bool)
    ma[list(A)] = True
    mb[list(B)] = True
    g, h = P.relation.pair_arrays()
    return P.weight * int(np.count_nonzero(ma[g] & mb[h]))


def unit(G: FiniteGroup) -> MeasuredGroup:
    return MeasuredGroup(G, Fraction(1))

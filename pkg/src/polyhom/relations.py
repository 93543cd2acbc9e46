"""Multiplicative relations: subgroups of a product G x H read as relations G => H."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ElementOutOfRange, EmptyRelation, MiddleGroupMismatch, NotAHomomorphism, NotASubgroup
from .groups import (
    FiniteGroup,
    QuotientMap,
    Subgroup,
    direct_product,
    is_normal,
    quotient,
    subgroup_generate,
)


class Marginals(NamedTuple):
    dom: Subgroup
    im: Subgroup
    ker: Subgroup
    indef: Subgroup


class MultRelation:
    """A subgroup of ``source x target``.

    Pairs are stored through ``direct_product(source, target).pair_encode``.
    """

    def __init__(self, source: FiniteGroup, target: FiniteGroup, carrier: Subgroup):
        prod = direct_product(source, target)
        if carrier.parent != prod:
            raise NotASubgroup("carrier does not live in source x target")
        if carrier.order == 0:
            raise EmptyRelation("a multiplicative relation contains at least (e, e)")
        self.source = source
        self.target = target
        self.carrier = carrier
        self._marginals: Marginals | None = None

    # construction

    @classmethod
    def from_pairs(cls, source: FiniteGroup, target: FiniteGroup, pairs: Iterable[tuple[int, int]]) -> "MultRelation":
        """Relation with exactly these pairs; they must already form a subgroup."""
        prod = direct_product(source, target)
        codes = [_encode(source, target, g, h) for g, h in pairs]
        if not codes:
            raise EmptyRelation("no pairs given")
        return cls(source, target, Subgroup(prod, codes))

    @classmethod
    def generated(cls, source: FiniteGroup, target: FiniteGroup, pairs: Iterable[tuple[int, int]]) -> "MultRelation":
        """Smallest relation containing the given pairs."""
        prod = direct_product(source, target)
        codes = [_encode(source, target, g, h) for g, h in pairs]
        return cls(source, target, subgroup_generate(prod, codes))

    @classmethod
    def graph(cls, source: FiniteGroup, target: FiniteGroup, f: Sequence[int] | Callable[[int], int]) -> "MultRelation":
        """Graph of a homomorphism given as a table or callable; the homomorphism law is checked."""
        table = np.array([f(g) for g in source.elements()] if callable(f) else list(f), dtype=np.int64)
        if table.shape != (source.order,):
            raise ValueError("map table must have one entry per source element")
        if table.min() < 0 or table.max() >= target.order:
            raise ValueError("map values must be target elements")
        lhs = table[source.cayley]
        rhs = target.cayley[table[:, None], table[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            raise NotAHomomorphism(int(bad[0][0]), int(bad[0][1]))
        codes = np.arange(source.order) * target.order + table
        prod = direct_product(source, target)
        return cls(source, target, Subgroup(prod, codes, check=False))

    @classmethod
    def identity(cls, G: FiniteGroup) -> "MultRelation":
        return cls.graph(G, G, range(G.order))

    @classmethod
    def diagonal(cls, S: Subgroup) -> "MultRelation":
        G = S.parent
        prod = direct_product(G, G)
        return cls(G, G, Subgroup(prod, [g * G.order + g for g in S], check=False))

    @classmethod
    def full(cls, source: FiniteGroup, target: FiniteGroup) -> "MultRelation":
        prod = direct_product(source, target)
        return cls(source, target, Subgroup(prod, range(prod.order), check=False))

    @classmethod
    def product_of(cls, A: Subgroup, B: Subgroup) -> "MultRelation":
        """The relation A x B."""
        G, H = A.parent, B.parent
        codes = (A.array[:, None] * H.order + B.array[None, :]).reshape(-1)
        return cls(G, H, Subgroup(direct_product(G, H), codes, check=False))

    # views

    def pairs(self) -> list[tuple[int, int]]:
        return [divmod(x, self.target.order) for x in self.carrier.elements]

    def pair_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.divmod(self.carrier.array, self.target.order)

    def __contains__(self, pair) -> bool:
        g, h = pair
        if not (0 <= g < self.source.order and 0 <= h < self.target.order):
            return False
        return g * self.target.order + h in self.carrier

    def __len__(self) -> int:
        return self.carrier.order

    def incidence(self) -> np.ndarray:
        """0/1 matrix with rows indexed by source and columns by target."""
        m = np.zeros((self.source.order, self.target.order), dtype=np.int64)
        g, h = self.pair_arrays()
        m[g, h] = 1
        return m

    def marginals(self) -> Marginals:
        if self._marginals is None:
            g, h = self.pair_arrays()
            G, H = self.source, self.target
            dom = Subgroup(G, np.unique(g), check=False)
            im = Subgroup(H, np.unique(h), check=False)
            ker = Subgroup(G, g[h == H.identity], check=False)
            indef = Subgroup(H, h[g == G.identity], check=False)
            assert is_normal(ker, dom), "kernel must be normal in the domain"
            assert is_normal(indef, im), "indefinity must be normal in the image"
            self._marginals = Marginals(dom, im, ker, indef)
        return self._marginals

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultRelation):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.carrier == other.carrier

    def __hash__(self) -> int:
        return hash(self.carrier)

    def __repr__(self) -> str:
        return f"MultRelation({self.source.name} => {self.target.name}, {len(self)} pairs)"


def _encode(G: FiniteGroup, H: FiniteGroup, g: int, h: int) -> int:
    if not (0 <= g < G.order and 0 <= h < H.order):
        raise ElementOutOfRange(f"pair ({g}, {h}) outside {G.order} x {H.order}")
    return g * H.order + h


def rel_compose(T: MultRelation, R: MultRelation) -> MultRelation:
    """T after R: pairs (g, k) with (g, h) in R and (h, k) in T for some h."""
    if R.target != T.source:
        raise MiddleGroupMismatch(f"{R.target!r} is not {T.source!r}")
    reach = (R.incidence() @ T.incidence()) > 0
    g, k = np.nonzero(reach)
    codes = g * T.target.order + k
    carrier = Subgroup(direct_product(R.source, T.target), codes, check=__debug__)
    return MultRelation(R.source, T.target, carrier)


def pseudoinverse(R: MultRelation) -> MultRelation:
    g, h = R.pair_arrays()
    codes = h * R.source.order + g
    return MultRelation(R.target, R.source, Subgroup(direct_product(R.target, R.source), codes, check=False))


def marginals(R: MultRelation) -> Marginals:
    return R.marginals()


def image_of_set(R: MultRelation, A: Iterable[int]) -> frozenset[int]:
    mask = np.zeros(R.source.order, dtype=bool)
    mask[list(A)] = True
    g, h = R.pair_arrays()
    return frozenset(int(x) for x in np.unique(h[mask[g]]))


@dataclass(frozen=True, eq=False)
class CanonicalIso:
    """dom R / ker R -> im R / indef R induced by R."""

    source_quotient: FiniteGroup
    target_quotient: FiniteGroup
    source_map: QuotientMap
    target_map: QuotientMap
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]


def canonical_iso(R: MultRelation) -> CanonicalIso:
    dom, im, ker, indef = R.marginals()
    A, qa = quotient(dom, ker)
    B, qb = quotient(im, indef)
    g, h = R.pair_arrays()
    images = [-1] * A.order
    for x, y in zip(qa.projection[g], qb.projection[h]):
        x, y = int(x), int(y)
        if images[x] == -1:
            images[x] = y
        assert images[x] == y, "induced map is not well defined"
    assert sorted(images) == list(range(B.order)), "induced map is not a bijection"
    for a in range(A.order):
        for b in range(A.order):
            assert images[A.mul(a, b)] == B.mul(images[a], images[b])
    return CanonicalIso(A, B, qa, qb, tuple(images))

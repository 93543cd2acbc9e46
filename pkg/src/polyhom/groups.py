"""Finite groups as Cayley tables, with subgroups, cosets and quotients.

Elements are dense indices ``0 .. order-1``.  Tables are numpy integer arrays
and are never mutated after construction, so groups and subgroups are safe to
share and to use as dictionary keys (equality is structural).
"""

from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ElementOutOfRange,
    GroupTooLarge,
    NoIdentity,
    NoInverse,
    NotASubgroup,
    NotASubgroupChain,
    NotAssociative,
    NotNormal,
)

DEFAULT_MAX_ORDER = 24
MAX_ORDER_ENV = "POLYHOM_MAX_ORDER"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``cayley[a, b]`` is the index of ``a*b``.  Use :func:`from_cayley_table`
    for untrusted input; the constructor itself does not validate.
    """

    def __init__(
        self,
        cayley,
        identity: int,
        inverses,
        labels: Sequence[str] | None = None,
        name: str | None = None,
        factors: tuple["FiniteGroup", "FiniteGroup"] | None = None,
    ):
        self.cayley = _frozen(cayley)
        self.identity = int(identity)
        self.inverses = _frozen(inverses)
        self.labels = tuple(labels) if labels is not None else None
        self.name = name
        self.factors = factors
        self._hash = hash((self.cayley.shape, self.cayley.tobytes()))

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self._hash == other._hash and np.array_equal(self.cayley, other.cayley)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    # product-group coordinates

    def pair_encode(self, g: int, h: int) -> int:
        if self.factors is None:
            raise TypeError(f"{self!r} is not a direct product")
        return g * self.factors[1].order + h

    def pair_decode(self, x: int) -> tuple[int, int]:
        if self.factors is None:
            raise TypeError(f"{self!r} is not a direct product")
        g, h = divmod(int(x), self.factors[1].order)
        return g, h


def from_cayley_table(table, labels=None, name: str | None = None) -> FiniteGroup:
    """Validate a square table and return the group it defines.

    Raises NotAssociative / NoIdentity / NoInverse with a witness.
    """
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise ValueError("Cayley table must be a non-empty square table")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise ElementOutOfRange("Cayley table entries must lie in 0..order-1")

    # (a*b)*c versus a*(b*c) for every triple
    left = t[t[:, :, None], np.arange(n)[None, None, :]]
    right = t[np.arange(n)[:, None, None], t[None, :, :]]
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(x) for x in bad[0])
        raise NotAssociative(a, b, c)

    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)]
    if not ids:
        raise NoIdentity("no two-sided identity element")
    e = ids[0]

    inverses = np.empty(n, dtype=np.int64)
    for a in range(n):
        cand = np.nonzero((t[a] == e) & (t[:, a] == e))[0]
        if not len(cand):
            raise NoInverse(a)
        inverses[a] = cand[0]
    return FiniteGroup(t, e, inverses, labels=labels, name=name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    ar = np.arange(n)
    table = (ar[:, None] + ar[None, :]) % n
    return FiniteGroup(table, 0, (-ar) % n, name=f"C{n}")


def elementary_abelian(p: int, n: int) -> FiniteGroup:
    """The additive group of F_p^n; element index = base-p digits, first coordinate most significant."""
    size = p**n
    digits = np.array([[(x // p ** (n - 1 - i)) % p for i in range(n)] for x in range(size)], dtype=np.int64)
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    table = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    inverses = ((-digits) % p) @ weights
    return FiniteGroup(table, 0, inverses, name=f"F{p}^{n}")


def symmetric(n: int) -> FiniteGroup:
    """S_n on permutations of range(n), listed in lexicographic order; product is composition (a*b)(i) = a(b(i))."""
    perms = list(itertools.permutations(range(n)))
    index = {q: i for i, q in enumerate(perms)}
    table = [[index[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms]
    inverses = []
    for a in perms:
        inv = [0] * n
        for i, ai in enumerate(a):
            inv[ai] = i
        inverses.append(index[tuple(inv)])
    labels = ["".join(str(i) for i in q) for q in perms]
    return FiniteGroup(table, index[tuple(range(n))], inverses, labels=labels, name=f"S{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; element r^k s^f has index k + n*f."""
    def mul(x, y):
        k1, f1 = x % n, x // n
        k2, f2 = y % n, y // n
        k = (k1 + (-k2 if f1 else k2)) % n
        return k + n * ((f1 + f2) % 2)

    m = 2 * n
    table = [[mul(x, y) for y in range(m)] for x in range(m)]
    return from_cayley_table(table, name=f"D{n}")


def quaternion() -> FiniteGroup:
    """Q8 = {±1, ±i, ±j, ±k}."""
    names = ["1", "i", "j", "k"]
    # unit products: i*j=k, j*k=i, k*i=j
    prod = {
        ("1", x): (1, x) for x in names
    }
    prod.update({(x, "1"): (1, x) for x in names})
    prod.update({(x, x): (-1, "1") for x in "ijk"})
    prod.update({("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j")})
    prod.update({("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, x) for s in (1, -1) for x in names]
    index = {q: i for i, q in enumerate(elems)}
    table = []
    for s1, x1 in elems:
        row = []
        for s2, x2 in elems:
            s, x = prod[(x1, x2)]
            row.append(index[(s * s1 * s2, x)])
        table.append(row)
    labels = [("" if s > 0 else "-") + x for s, x in elems]
    return from_cayley_table(table, labels=labels, name="Q8")


@functools.lru_cache(maxsize=256)
def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H with pair_encode(g, h) = g*#H + h and componentwise product."""
    nG, nH = G.order, H.order
    table = G.cayley[:, None, :, None] * nH + H.cayley[None, :, None, :]
    table = table.reshape(nG * nH, nG * nH)
    inverses = (G.inverses[:, None] * nH + H.inverses[None, :]).reshape(-1)
    name = f"{G.name or '?'}x{H.name or '?'}"
    return FiniteGroup(table, G.identity * nH + H.identity, inverses, name=name, factors=(G, H))


class Subgroup:
    """A subgroup stored as a sorted index tuple plus a boolean membership mask."""

    def __init__(self, parent: FiniteGroup, elements: Iterable[int], *, check: bool = True):
        els = np.unique(np.fromiter((int(x) for x in elements), dtype=np.int64))
        if len(els) and (els[0] < 0 or els[-1] >= parent.order):
            raise ElementOutOfRange(f"element outside 0..{parent.order - 1}")
        mask = np.zeros(parent.order, dtype=bool)
        mask[els] = True
        if check:
            if not mask[parent.identity]:
                raise NotASubgroup("set does not contain the identity")
            if not mask[parent.cayley[np.ix_(els, els)]].all():
                raise NotASubgroup("set is not closed under the product")
        self.parent = parent
        self.array = _frozen(els)
        self.elements = tuple(int(x) for x in els)
        mask.setflags(write=False)
        self.mask = mask

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return 0 <= x < self.parent.order and bool(self.mask[x])

    def issubset(self, other: "Subgroup") -> bool:
        return self.parent == other.parent and bool(other.mask[self.array].all())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.elements == other.elements and self.parent == other.parent

    def __hash__(self) -> int:
        return hash((self.parent, self.elements))

    def __repr__(self) -> str:
        return f"Subgroup({{{', '.join(map(str, self.elements))}}} of {self.parent.name or '?'})"


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, range(G.order), check=False)


def trivial(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, [G.identity], check=False)


def subgroup_generate(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``gens`` (closure under right multiplication by generators)."""
    gens = [int(g) for g in gens]
    for g in gens:
        if not 0 <= g < G.order:
            raise ElementOutOfRange(f"generator {g} not in 0..{G.order - 1}")
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    gens_arr = np.array(sorted(set(gens)), dtype=np.int64)
    while len(frontier) and len(gens_arr):
        new = np.unique(G.cayley[np.ix_(frontier, gens_arr)])
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return Subgroup(G, np.nonzero(mask)[0], check=False)


def _same_parent(A: Subgroup, B: Subgroup) -> None:
    if A.parent != B.parent:
        raise NotASubgroupChain("subgroups live in different groups")


def index(K: Subgroup, L: Subgroup) -> int:
    """[K:L]; requires L inside K."""
    _same_parent(K, L)
    if not L.issubset(K):
        raise NotASubgroupChain("second subgroup is not contained in the first")
    q, r = divmod(K.order, L.order)
    assert r == 0, "Lagrange violated"
    return q


def is_normal(N: Subgroup, K: Subgroup) -> bool:
    _same_parent(N, K)
    if not N.issubset(K):
        raise NotASubgroupChain("N is not contained in K")
    G = N.parent
    k = K.array
    conj = G.cayley[G.cayley[k[:, None], N.array[None, :]], G.inverses[k][:, None]]
    return bool(N.mask[conj].all())


def intersect(A: Subgroup, B: Subgroup) -> Subgroup:
    _same_parent(A, B)
    return Subgroup(A.parent, np.nonzero(A.mask & B.mask)[0], check=False)


def set_product(A: Subgroup, B: Subgroup) -> frozenset[int]:
    """The set {ab}; a subgroup only when one factor normalizes the other."""
    _same_parent(A, B)
    return frozenset(int(x) for x in np.unique(A.parent.cayley[np.ix_(A.array, B.array)]))


def left_cosets(K: Subgroup, N: Subgroup) -> list[tuple[int, ...]]:
    """Cosets xN of N in K, each sorted, ordered by their minimal element."""
    _same_parent(K, N)
    G = K.parent
    seen = np.zeros(G.order, dtype=bool)
    cosets = []
    for x in K.elements:
        if seen[x]:
            continue
        c = np.unique(G.cayley[x, N.array])
        seen[c] = True
        cosets.append(tuple(int(y) for y in c))
    return cosets


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """Projection K -> K/N.  ``projection[x]`` is -1 for x outside K."""

    source: FiniteGroup
    domain: Subgroup
    target: FiniteGroup
    projection: np.ndarray
    representatives: tuple[int, ...]

    def __call__(self, x: int) -> int:
        y = int(self.projection[x])
        if y < 0:
            raise ElementOutOfRange(f"{x} is outside the quotiented subgroup")
        return y

    def fiber(self, y: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.nonzero(self.projection == y)[0])


def quotient(K: Subgroup, N: Subgroup) -> tuple[FiniteGroup, QuotientMap]:
    """K/N with cosets represented (and ordered) by their minimal element index."""
    if not is_normal(N, K):
        raise NotNormal("subgroup is not normal")
    G = K.parent
    cosets = left_cosets(K, N)
    proj = np.full(G.order, -1, dtype=np.int64)
    for i, c in enumerate(cosets):
        proj[list(c)] = i
    reps = np.array([c[0] for c in cosets], dtype=np.int64)
    table = proj[G.cayley[reps[:, None], reps[None, :]]]
    inverses = proj[G.inverses[reps]]
    e = int(proj[G.identity])
    labels = None
    if G.labels:
        labels = [G.labels[r] + "N" for r in reps]
    base = G.name or "?"
    Q = FiniteGroup(table, e, inverses, labels=labels, name=f"{base}/{len(N)}")
    proj.setflags(write=False)
    return Q, QuotientMap(G, K, Q, proj, tuple(int(r) for r in reps))


def max_order_bound() -> int:
    raw = os.environ.get(MAX_ORDER_ENV)
    return int(raw) if raw else DEFAULT_MAX_ORDER


def all_subgroups(G: FiniteGroup, bound: int | None = None) -> list[Subgroup]:
    """Every subgroup of G, sorted by (order, elements).

    Every subgroup is a join of cyclic subgroups, so we close the set of cyclic
    subgroups under joins with a single cyclic subgroup at a time.
    """
    bound = max_order_bound() if bound is None else bound
    if G.order > bound:
        raise GroupTooLarge(f"order {G.order} exceeds the bound {bound}")
    return list(_all_subgroups(G))


@functools.lru_cache(maxsize=64)
def _all_subgroups(G: FiniteGroup) -> tuple[Subgroup, ...]:
    cyclics = {}
    for g in range(G.order):
        S = subgroup_generate(G, [g])
        cyclics.setdefault(S.elements, S)
    found = dict(cyclics)
    frontier = list(cyclics.values())
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyclics.values():
                if C.issubset(S):
                    continue
                J = subgroup_generate(G, S.elements + C.elements)
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    return tuple(sorted(found.values(), key=lambda S: (S.order, S.elements)))


def normal_pairs(G: FiniteGroup, bound: int | None = None) -> list[tuple[Subgroup, Subgroup]]:
    """All (Phi, Delta) with Delta normal in Phi."""
    subs = all_subgroups(G, bound)
    return [(F, D) for F in subs for D in subs if D.issubset(F) and is_normal(D, F)]

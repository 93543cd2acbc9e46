"""Seeded sample pools of groups, relations and polyhomomorphisms for the verification suites."""

from __future__ import annotations

import functools
import random
from fractions import Fraction

import numpy as np

from . import gfp
from .fp import (
    FpPolyhom,
    FpWindow,
    fp_graph,
    fp_identity,
    make_fp_polyhom,
    s_minus,
    s_plus,
    theta,
)
from .groups import (
    FiniteGroup,
    all_subgroups,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    is_normal,
    quaternion,
    symmetric,
)
from .morphisms import MeasuredGroup, Polyhom, identity, involution, make_polyhom, mu_phi_delta
from .relations import MultRelation

ALPHA_CHOICES = (Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 6), Fraction(1, 8), Fraction(2, 3), Fraction(3, 4))
POINT_MASSES = (Fraction(1), Fraction(1), Fraction(1), Fraction(1, 2), Fraction(2), Fraction(1, 3))


@functools.lru_cache(maxsize=1)
def pool_groups() -> tuple[FiniteGroup, ...]:
    """Every pool group has order at most 16."""
    C2, C4 = cyclic(2), cyclic(4)
    S3 = symmetric(3)
    return (
        C2,
        cyclic(3),
        C4,
        cyclic(6),
        cyclic(8),
        direct_product(C2, C2),
        S3,
        direct_product(C2, C4),
        dihedral(4),
        quaternion(),
        elementary_abelian(2, 3),
        direct_product(C2, S3),
        direct_product(C4, C4),
        direct_product(C2, cyclic(8)),
    )


def small_groups(limit: int) -> tuple[FiniteGroup, ...]:
    return tuple(G for G in pool_groups() if G.order <= limit)


def random_relation(rng: random.Random, G: FiniteGroup, H: FiniteGroup) -> MultRelation:
    kind = rng.random()
    if kind < 0.15:
        A = rng.choice(all_subgroups(G))
        B = rng.choice(all_subgroups(H))
        return MultRelation.product_of(A, B)
    gens = [(rng.randrange(G.order), rng.randrange(H.order)) for _ in range(rng.randint(1, 3))]
    return MultRelation.generated(G, H, gens)


def random_weighted(rng: random.Random, rel: MultRelation, src: MeasuredGroup, tgt: MeasuredGroup) -> Polyhom:
    _, _, ker, indef = rel.marginals()
    # alpha / beta = #indef * pm(tgt) / (#ker * pm(src)), and beta <= 1
    bound = min(Fraction(1), Fraction(indef.order, ker.order) * tgt.point_mass / src.point_mass)
    choices = [a for a in ALPHA_CHOICES if a <= bound] or [bound]
    a = rng.choice(choices)
    return make_polyhom(rel, a * src.point_mass / indef.order, src, tgt)


def random_measured(rng: random.Random, groups=None) -> MeasuredGroup:
    G = rng.choice(groups or pool_groups())
    return MeasuredGroup(G, rng.choice(POINT_MASSES))


def random_polyhom(rng: random.Random, src: MeasuredGroup, tgt: MeasuredGroup) -> Polyhom:
    return random_weighted(rng, random_relation(rng, src.group, tgt.group), src, tgt)


def random_chain(rng: random.Random, length: int, groups=None) -> list[Polyhom]:
    """Composable polyhomomorphisms P1: X0 -> X1, ..., Pk: X(k-1) -> Xk (listed in that order)."""
    spaces = [random_measured(rng, groups) for _ in range(length + 1)]
    return [random_polyhom(rng, spaces[i], spaces[i + 1]) for i in range(length)]


def structured_polyhoms(limit: int = 16) -> list[Polyhom]:
    """Identities, quotient maps onto every normal quotient and their involutions."""
    out = []
    for G in small_groups(limit):
        MG = MeasuredGroup(G)
        out.append(identity(MG))
        subs = all_subgroups(G)
        for phi in subs:
            for delta in subs:
                if delta.issubset(phi) and is_normal(delta, phi):
                    P, _ = mu_phi_delta(MG, phi, delta)
                    out.append(P)
                    out.append(involution(P))
    return out


def polyhom_pool(seed: int = 0, count: int = 300, limit: int = 16) -> list[Polyhom]:
    rng = random.Random(seed)
    groups = small_groups(limit)
    out = []
    for _ in range(count):
        out.append(random_polyhom(rng, random_measured(rng, groups), random_measured(rng, groups)))
    return out


# F_p pools

def weighted_fp(win: FpWindow, basis, extra: int = 0) -> FpPolyhom:
    """Carrier with the largest admissible weight divided by p^extra."""
    n, p = win.dim, win.p
    B = np.asarray(basis, dtype=np.int64).reshape(-1, 2 * n)
    U, V = B[:, :n], B[:, n:]
    dk = gfp.rank(gfp.left_nullspace(V, p) @ U, p) if B.shape[0] else 0
    di = gfp.rank(gfp.left_nullspace(U, p) @ V, p) if B.shape[0] else 0
    return make_fp_polyhom(win, B, win.point_mass / Fraction(p) ** (max(dk, di) + extra))


def random_fp(rng: random.Random, win: FpWindow, max_dim: int | None = None) -> FpPolyhom:
    n, p = win.dim, win.p
    top = 2 * n if max_dim is None else max_dim
    k = rng.randint(0, top)
    nprng = np.random.default_rng(rng.randrange(1 << 30))
    B = nprng.integers(0, p, size=(k, 2 * n))
    return weighted_fp(win, B, rng.choice((0, 0, 1)))


def random_invertible(rng: random.Random, n: int, p: int) -> np.ndarray:
    nprng = np.random.default_rng(rng.randrange(1 << 30))
    while True:
        g = nprng.integers(0, p, size=(n, n))
        if gfp.inverse(g, p) is not None:
            return g


def fp_structured(win: FpWindow) -> list[FpPolyhom]:
    out = [fp_identity(win)]
    N = min(-win.lo, win.hi)
    out.extend(theta(win, m) for m in range(N + 1))
    for m in range(N + 1):
        for j in range(1, N + 1):
            if m + 2 * j <= win.hi:
                out.append(s_plus(win, m, j))
            if -m - 2 * j >= win.lo:
                out.append(s_minus(win, m, j))
    return list(dict.fromkeys(out))


def fp_pool(win: FpWindow, seed: int, random_count: int, max_dim: int | None = None) -> list[FpPolyhom]:
    rng = random.Random(seed)
    out = fp_structured(win)
    for _ in range(random_count // 2):
        out.append(fp_graph(win, random_invertible(rng, win.dim, win.p)))
    for _ in range(random_count - random_count // 2):
        out.append(random_fp(rng, win, max_dim))
    return list(dict.fromkeys(out))


def transvection(n: int, i: int, j: int) -> np.ndarray:
    g = np.eye(n, dtype=np.int64)
    g[i, j] = 1
    return g

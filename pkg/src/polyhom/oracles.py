"""Brute-force reference implementations for cross-checking the main modules.

Nothing here imports from the rest of the package: inputs are plain tables,
pair sets, integer bases and Fractions, and every routine is a direct
enumeration of its definition.  They are slow on purpose.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

ENUMERATION_LIMIT = 4096


class TooLarge(Exception):
    pass


# finite groups

def naive_inverse(table: Sequence[Sequence[int]], a: int) -> int:
    n = len(table)
    e = next(x for x in range(n) if all(table[x][y] == y for y in range(n)))
    return next(b for b in range(n) if table[a][b] == e)


def naive_closure(table: Sequence[Sequence[int]], gens: Iterable[int]) -> frozenset[int]:
    """Fixed point of adding pairwise products and inverses, starting from gens and the identity."""
    n = len(table)
    e = next(x for x in range(n) if all(table[x][y] == y for y in range(n)))
    S = set(gens) | {e}
    while True:
        new = {table[a][b] for a in S for b in S} | {naive_inverse(table, a) for a in S}
        if new <= S:
            return frozenset(S)
        S |= new


def naive_is_associative(table: Sequence[Sequence[int]]) -> bool:
    n = len(table)
    return all(
        table[table[a][b]][c] == table[a][table[b][c]] for a in range(n) for b in range(n) for c in range(n)
    )


# relations

def naive_rel_compose(
    T_pairs: Iterable[tuple[int, int]],
    R_pairs: Iterable[tuple[int, int]],
    orders: tuple[int, int, int],
) -> frozenset[tuple[int, int]]:
    """{(g, k) : (g, h) in R and (h, k) in T for some h}, looping over every (g, h, k)."""
    R, T = set(R_pairs), set(T_pairs)
    nG, nH, nK = orders
    return frozenset(
        (g, k) for g in range(nG) for h in range(nH) for k in range(nK) if (g, h) in R and (h, k) in T
    )


def naive_marginal_measure(pairs: Iterable[tuple[int, int]], weight, side: str, order: int) -> list[Fraction]:
    """Push the weighted counting measure on the pairs to one side."""
    if side not in ("source", "target"):
        raise ValueError("side is 'source' or 'target'")
    out = [Fraction(0)] * order
    i = 0 if side == "source" else 1
    for pair in pairs:
        out[pair[i]] += Fraction(weight)
    return out


def naive_operator(pairs: Iterable[tuple[int, int]], weight, point_mass, rows: int, cols: int) -> list[list[Fraction]]:
    """Entry (g, h) = weight / point_mass for each pair, as nested lists of Fractions."""
    M = [[Fraction(0)] * cols for _ in range(rows)]
    for g, h in pairs:
        M[g][h] = Fraction(weight) / Fraction(point_mass)
    return M


def naive_matmul(A: Sequence[Sequence[Fraction]], B: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum((A[i][k] * B[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)] for i in range(len(A))]


# linear relations over F_p

def naive_span(basis: Sequence[Sequence[int]], p: int, width: int) -> frozenset[tuple[int, ...]]:
    """Every F_p-combination of the rows."""
    rows = np.asarray(basis, dtype=np.int64)
    if rows.ndim != 2:
        rows = rows.reshape(0 if rows.size == 0 else -1, width)
    k = rows.shape[0]
    if p**k > ENUMERATION_LIMIT * 64:
        raise TooLarge(f"{p}^{k} combinations")
    coeffs = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64).reshape(p**k, k)
    vecs = (coeffs @ rows) % p
    return frozenset(tuple(int(x) for x in v) for v in vecs)


def naive_fp_compose(
    T_basis, T_weight, R_basis, R_weight, p: int, n: int, point_mass
) -> tuple[frozenset[tuple[int, ...]], Fraction]:
    """Compose two weighted linear relations by grouping carrier vectors on the middle coordinates.

    Returns the full carrier vector set of the product and the measure of one
    of its points: weight_R * weight_T * (number of middle vectors over a
    point) / point_mass, which must not depend on the point.
    """
    if p**n > ENUMERATION_LIMIT:
        raise TooLarge(f"{p}^{n} middle vectors")
    by_mid_R = defaultdict(list)
    for vec in naive_span(R_basis, p, 2 * n):
        by_mid_R[vec[n:]].append(vec[:n])
    by_mid_T = defaultdict(list)
    for vec in naive_span(T_basis, p, 2 * n):
        by_mid_T[vec[:n]].append(vec[n:])
    count = defaultdict(int)
    for mid in itertools.product(range(p), repeat=n):
        for u in by_mid_R.get(mid, ()):
            for w in by_mid_T.get(mid, ()):
                count[u + w] += 1
    sizes = set(count.values())
    if len(sizes) != 1:
        raise AssertionError(f"fiber sizes are not constant: {sorted(sizes)}")
    (c,) = sizes
    weight = Fraction(R_weight) * Fraction(T_weight) * c / Fraction(point_mass)
    return frozenset(count), weight


def naive_linear_marginals(vectors: Iterable[tuple[int, ...]], n: int) -> dict[str, frozenset]:
    """dom, im, ker, indef of a carrier given as its set of vectors."""
    vs = list(vectors)
    zero = (0,) * n
    return {
        "dom": frozenset(v[:n] for v in vs),
        "im": frozenset(v[n:] for v in vs),
        "ker": frozenset(v[:n] for v in vs if v[n:] == zero),
        "indef": frozenset(v[n:] for v in vs if v[:n] == zero),
    }


def naive_chi(g, split: tuple[int, int, int], p: int) -> frozenset[tuple[int, ...]]:
    """All (v, u) such that (y, v, 0) g = (x, u, 0) for some x, y, by enumerating y and v."""
    s_lo, d, s_hi = split
    g = np.asarray(g, dtype=np.int64)
    out = set()
    for yv in itertools.product(range(p), repeat=s_lo + d):
        w = np.array(list(yv) + [0] * s_hi, dtype=np.int64)
        img = (w @ g) % p
        if not img[s_lo + d :].any():
            out.add(tuple(int(x) for x in yv[s_lo:]) + tuple(int(x) for x in img[s_lo : s_lo + d]))
    return frozenset(out)


def naive_box_measure(vectors: Iterable[tuple[int, ...]], weight, v, w, free_cols: int) -> Fraction:
    """Weight times the number of carrier points (a, b) with a - v and b - w vanishing off the first free_cols coordinates."""
    n = len(v)
    total = 0
    for vec in vectors:
        a, b = vec[:n], vec[n:]
        if all(a[i] == v[i] and b[i] == w[i] for i in range(free_cols, n)):
            total += 1
    return Fraction(weight) * total

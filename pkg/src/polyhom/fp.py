"""Linear relations over F_p on a finite coordinate window, with weights.

A window is the coordinate range ``lo <= l < hi`` (coordinate ``lo`` first in
every vector).  The point mass is ``p**lo``, which gives the subspace W^0 of
vectors vanishing at all coordinates ``l >= 0`` total measure 1.  In general

    W^m = {v : v_l = 0 for l >= -m},   dim W^m = -m - lo   (clipped to the window)

so W^{-N} is the whole radius-N window, W^N is zero and W^m shrinks as m grows.

A weighted relation is stored as the reduced row echelon basis of its carrier
inside F_p^n + F_p^n (source coordinates first) plus the measure of one
carrier point.  Matrices act on row vectors: the graph of g is {(w, w g)}.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import gfp
from .errors import (
    DominationViolated,
    InternalInconsistency,
    NotInvertible,
    OutOfWindow,
    SplitMismatch,
    TooLarge,
    WindowMismatch,
)
from .groups import Subgroup, direct_product, elementary_abelian
from .morphisms import MeasuredGroup, Polyhom, make_polyhom, zero
from .relations import MultRelation

LOWERING_LIMIT = 1024  # largest product group built by lower()


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def p_log(x: Fraction, p: int) -> int | None:
    """The integer e with x == p**e, or None."""
    x = Fraction(x)
    if x <= 0:
        return None
    num, den = x.numerator, x.denominator
    e = 0
    while num % p == 0:
        num //= p
        e += 1
    while den % p == 0:
        den //= p
        e -= 1
    return e if num == den == 1 else None


@dataclass(frozen=True)
class FpWindow:
    p: int
    lo: int
    hi: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.hi < self.lo:
            raise ValueError("window upper end below lower end")

    @classmethod
    def radius(cls, p: int, N: int) -> "FpWindow":
        if N < 0:
            raise ValueError("radius must be nonnegative")
        return cls(p, -N, N)

    @classmethod
    def middle(cls, p: int, d: int) -> "FpWindow":
        """The d coordinates around 0 used for the middle block of a split matrix."""
        return cls(p, -(d // 2), d - d // 2)

    @property
    def dim(self) -> int:
        return self.hi - self.lo

    @property
    def point_mass(self) -> Fraction:
        return Fraction(self.p) ** self.lo

    def col(self, l: int) -> int:
        if not self.lo <= l < self.hi:
            raise OutOfWindow(f"coordinate {l} outside [{self.lo}, {self.hi})")
        return l - self.lo

    def free_below(self, c: int) -> int:
        """Number of window coordinates l < c."""
        return min(max(c - self.lo, 0), self.dim)

    def __str__(self) -> str:
        return f"F_{self.p}[{self.lo},{self.hi})"


def _rows(B, width: int) -> np.ndarray:
    """Coerce to a (k, width) integer array; empty input gives k = 0."""
    B = np.asarray(B, dtype=np.int64)
    return np.zeros((0, width), dtype=np.int64) if B.size == 0 else B.reshape(-1, width)


def _units(n: int, cols: Sequence[int]) -> np.ndarray:
    E = np.zeros((len(cols), n), dtype=np.int64)
    E[np.arange(len(cols)), list(cols)] = 1
    return E


def w_subspace(win: FpWindow, m: int) -> np.ndarray:
    """Basis (RREF rows) of W^m inside the window."""
    if not -win.hi <= m <= -win.lo:
        raise OutOfWindow(f"W^{m} is not defined inside {win}")
    return _units(win.dim, range(win.free_below(-m)))


def w_dim(win: FpWindow, m: int) -> int:
    return w_subspace(win, m).shape[0]


class FpMarginals(NamedTuple):
    dom: np.ndarray
    im: np.ndarray
    ker: np.ndarray
    indef: np.ndarray


class FpPolyhom:
    """A weighted linear relation on one window, or the zero polyhomomorphism (basis None)."""

    __slots__ = ("window", "basis", "weight", "_marginals", "_key")

    def __init__(self, window: FpWindow, basis: np.ndarray | None, weight: Fraction | None):
        self.window = window
        self.basis = basis
        self.weight = weight
        self._marginals: FpMarginals | None = None
        key = None if basis is None else (basis.shape, basis.tobytes())
        self._key = (window, key, weight)

    @property
    def is_zero(self) -> bool:
        return self.basis is None

    @property
    def p(self) -> int:
        return self.window.p

    @property
    def n(self) -> int:
        return self.window.dim

    def source_part(self) -> np.ndarray:
        return self.basis[:, : self.n]

    def target_part(self) -> np.ndarray:
        return self.basis[:, self.n :]

    def marginals(self) -> FpMarginals:
        if self.is_zero:
            raise ValueError("the zero polyhomomorphism has no marginals")
        if self._marginals is None:
            p, n = self.p, self.n
            U, V = self.source_part(), self.target_part()
            ker = gfp.left_nullspace(V, p) @ U
            indef = gfp.left_nullspace(U, p) @ V
            self._marginals = FpMarginals(
                gfp.span(U, p, n), gfp.span(V, p, n), gfp.span(ker, p, n), gfp.span(indef, p, n)
            )
        return self._marginals

    def marginal_dims(self) -> tuple[int, int, int, int]:
        m = self.marginals()
        return m.dom.shape[0], m.im.shape[0], m.ker.shape[0], m.indef.shape[0]

    @property
    def dim(self) -> int:
        return 0 if self.is_zero else self.basis.shape[0]

    @property
    def alpha(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return self.weight * self.p ** self.marginal_dims()[3] / self.window.point_mass

    @property
    def beta(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return self.weight * self.p ** self.marginal_dims()[2] / self.window.point_mass

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpPolyhom):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        if self.is_zero:
            return f"FpPolyhom(zero on {self.window})"
        return f"FpPolyhom({self.window}, dim={self.dim}, weight={self.weight})"


def make_fp_polyhom(win: FpWindow, basis, weight) -> FpPolyhom:
    """Validate and canonicalize.  The weight must be a power of p times the point mass."""
    n = win.dim
    B = np.asarray(basis, dtype=np.int64)
    if B.size == 0:
        B = np.zeros((0, 2 * n), dtype=np.int64)
    if B.ndim != 2 or B.shape[1] != 2 * n:
        raise WindowMismatch(f"basis rows must have length {2 * n}")
    R, _ = gfp.rref(B, win.p, 2 * n)
    w = Fraction(weight)
    if w <= 0:
        raise ValueError("weight must be positive")
    if p_log(w / win.point_mass, win.p) is None:
        raise ValueError(f"weight {w} is not a power of {win.p} times the point mass")
    R.setflags(write=False)
    P = FpPolyhom(win, R, w)
    if P.alpha > 1:
        raise DominationViolated("alpha", P.alpha)
    if P.beta > 1:
        raise DominationViolated("beta", P.beta)
    return P


def fp_zero(win: FpWindow) -> FpPolyhom:
    return FpPolyhom(win, None, None)


def with_alpha(win: FpWindow, basis, alpha: Fraction) -> FpPolyhom:
    """The weighted relation on this carrier whose alpha is the given value."""
    n = win.dim
    B = _rows(basis, 2 * n)
    U, V = B[:, :n], B[:, n:]
    dim_indef = gfp.rank(gfp.left_nullspace(U, win.p) @ V, win.p)
    return make_fp_polyhom(win, B, Fraction(alpha) * win.point_mass / Fraction(win.p) ** dim_indef)


def fp_identity(win: FpWindow) -> FpPolyhom:
    n = win.dim
    eye = np.eye(n, dtype=np.int64)
    return make_fp_polyhom(win, np.hstack([eye, eye]), win.point_mass)


def fp_graph(win: FpWindow, g) -> FpPolyhom:
    """Graph {(w, w g)} of an invertible matrix, with alpha = beta = 1."""
    g = np.asarray(g, dtype=np.int64) % win.p
    n = win.dim
    if g.shape != (n, n):
        raise WindowMismatch(f"matrix must be {n} x {n}")
    if gfp.inverse(g, win.p) is None:
        raise NotInvertible("matrix is singular over F_p")
    return make_fp_polyhom(win, np.hstack([np.eye(n, dtype=np.int64), g]), win.point_mass)


def marginal_dims(R: FpPolyhom) -> tuple[int, int, int, int]:
    return R.marginal_dims()


def _check_window(A: FpPolyhom, B: FpPolyhom) -> None:
    if A.window != B.window:
        raise WindowMismatch(f"{A.window} differs from {B.window}")


def fp_composition_indices(T: FpPolyhom, R: FpPolyhom) -> tuple[int, int]:
    """Exponents e1, e2 with [indef R : indef R & dom T] = p^e1, [ker T : ker T & im R] = p^e2."""
    p, n = R.p, R.n
    mR, mT = R.marginals(), T.marginals()
    e1 = mR.indef.shape[0] - gfp.intersection_dim(mR.indef, mT.dom, p, n)
    e2 = mT.ker.shape[0] - gfp.intersection_dim(mT.ker, mR.im, p, n)
    return e1, e2


def fp_compose(T: FpPolyhom, R: FpPolyhom) -> FpPolyhom:
    """T after R by elimination over the middle coordinates."""
    _check_window(T, R)
    if T.is_zero or R.is_zero:
        return fp_zero(R.window)
    p, n = R.p, R.n
    Ru, Rv = R.source_part(), R.target_part()
    Tv, Tw = T.source_part(), T.target_part()
    L = gfp.left_nullspace(np.vstack([Rv, (-Tv) % p]), p)
    kR = Ru.shape[0]
    rows = np.hstack([L[:, :kR] @ Ru, L[:, kR:] @ Tw]) % p
    basis, _ = gfp.rref(rows, p, 2 * n)
    e1, e2 = fp_composition_indices(T, R)
    a = R.alpha * T.alpha / Fraction(p) ** e1
    b = R.beta * T.beta / Fraction(p) ** e2
    U, V = basis[:, :n], basis[:, n:]
    dim_ker = gfp.rank(gfp.left_nullspace(V, p) @ U, p)
    dim_indef = gfp.rank(gfp.left_nullspace(U, p) @ V, p)
    pm = R.window.point_mass
    w_a = a * pm / Fraction(p) ** dim_indef
    w_b = b * pm / Fraction(p) ** dim_ker
    if w_a != w_b:
        raise InternalInconsistency(f"weight from alpha {w_a} differs from weight from beta {w_b}")
    return make_fp_polyhom(R.window, basis, w_a)


def theta_block(win: FpWindow, a: int, b: int) -> FpPolyhom:
    """Zero at coordinates >= b, equal on [a, b), free below a; alpha = beta = 1."""
    if not win.lo <= a <= b <= win.hi:
        raise OutOfWindow(f"block [{a}, {b}) does not fit in {win}")
    n = win.dim
    low = range(a - win.lo)
    mid = range(a - win.lo, b - win.lo)
    Z = np.zeros((len(low), n), dtype=np.int64)
    rows = [
        np.hstack([_units(n, mid), _units(n, mid)]),
        np.hstack([_units(n, low), Z]),
        np.hstack([Z, _units(n, low)]),
    ]
    weight = win.point_mass / Fraction(win.p) ** len(low)
    return make_fp_polyhom(win, np.vstack(rows), weight)


def theta(win: FpWindow, m: int) -> FpPolyhom:
    """Truncation with dom = im = W^{-m} and ker = indef = W^m."""
    if m < 0 or -m < win.lo or m > win.hi:
        raise OutOfWindow(f"theta_{m} does not fit in {win}")
    return theta_block(win, -m, m)


def sandwich(R: FpPolyhom, m: int) -> FpPolyhom:
    t = theta(R.window, m)
    return fp_compose(t, fp_compose(R, t))


# passing between a window and a middle block of it

def reduce_to_middle(Q: FpPolyhom, a: int, b: int) -> FpPolyhom:
    """The induced relation on coordinates [a, b) when dom, im vanish above b and ker, indef contain all of below a."""
    win = Q.window
    if not win.lo <= a <= b <= win.hi:
        raise OutOfWindow(f"block [{a}, {b}) does not fit in {win}")
    mid = FpWindow(win.p, a, b)
    if Q.is_zero:
        return fp_zero(mid)
    n, p = win.dim, win.p
    top = list(range(b - win.lo, n))
    low = a - win.lo
    m = Q.marginals()
    if m.dom[:, top].any() or m.im[:, top].any():
        raise OutOfWindow("domain or image reaches above the block")
    if m.ker.shape[0] < low or m.indef.shape[0] < low:
        raise OutOfWindow("kernel or indefinity misses coordinates below the block")
    low_units = _units(n, range(low))
    for S in (m.ker, m.indef):
        if not gfp.in_span(S, gfp.rref(S, p, n)[1], low_units, p).all():
            raise OutOfWindow("kernel or indefinity misses coordinates below the block")
    cols = list(range(low, b - win.lo))
    B = np.hstack([Q.source_part()[:, cols], Q.target_part()[:, cols]])
    return make_fp_polyhom(mid, gfp.span(B, p, 2 * (b - a)), Q.weight * Fraction(p) ** (2 * low))


def lift_from_middle(Qm: FpPolyhom, win: FpWindow) -> FpPolyhom:
    """Inverse of reduce_to_middle: free below the block, zero above it."""
    a, b = Qm.window.lo, Qm.window.hi
    if win.p != Qm.p or not win.lo <= a <= b <= win.hi:
        raise OutOfWindow(f"{Qm.window} is not a block of {win}")
    if Qm.is_zero:
        return fp_zero(win)
    n, d = win.dim, Qm.n
    low = a - win.lo
    rows = []
    for r in Qm.basis:
        u = np.zeros(2 * n, dtype=np.int64)
        u[low : low + d] = r[:d]
        u[n + low : n + low + d] = r[d:]
        rows.append(u)
    Z = np.zeros((low, n), dtype=np.int64)
    rows.extend(np.hstack([_units(n, range(low)), Z]))
    rows.extend(np.hstack([Z, _units(n, range(low))]))
    return make_fp_polyhom(win, _rows(rows, 2 * n), Qm.weight / Fraction(win.p) ** (2 * low))


# characteristic relations of split matrices

def split_blocks(g: np.ndarray, split: tuple[int, int, int]) -> dict[tuple[int, int], np.ndarray]:
    cuts = np.cumsum((0,) + tuple(split))
    return {
        (i + 1, j + 1): g[cuts[i] : cuts[i + 1], cuts[j] : cuts[j + 1]]
        for i in range(3)
        for j in range(3)
    }


def _check_split(g, split, p) -> np.ndarray:
    g = np.asarray(g, dtype=np.int64) % p
    if len(split) != 3 or min(split) < 0:
        raise SplitMismatch("split must be three nonnegative block sizes")
    n = sum(split)
    if g.shape != (n, n):
        raise SplitMismatch(f"matrix is {g.shape}, split needs {n} x {n}")
    if gfp.inverse(g, p) is None:
        raise NotInvertible("matrix is singular over F_p")
    return g


def chi(g, split: tuple[int, int, int], p: int, orientation: str = "row") -> FpPolyhom:
    """Relation on the middle block: (v, u) with (y, v, 0) g = (x, u, 0) for some x, y.

    ``orientation="column"`` reads the system as g (y, v, 0)^T = (x, u, 0)^T
    instead, which is the row reading applied to the transpose.
    """
    g = _check_split(g, split, p)
    if orientation == "column":
        g = g.T.copy()
    elif orientation != "row":
        raise ValueError("orientation is 'row' or 'column'")
    s_lo, d, s_hi = split
    blk = split_blocks(g, split)
    # (y, v) with y g13 + v g23 = 0
    sol = gfp.left_nullspace(np.vstack([blk[1, 3], blk[2, 3]]).reshape(s_lo + d, s_hi), p)
    y, v = sol[:, :s_lo], sol[:, s_lo:]
    u = (y @ blk[1, 2] + v @ blk[2, 2]) % p
    mid = FpWindow.middle(p, d)
    rk = gfp.rank(blk[1, 3], p)
    return with_alpha(mid, _rows(np.hstack([v, u]), 2 * d), Fraction(1, p**rk))


def embedding_window(p: int, split: tuple[int, int, int]) -> FpWindow:
    s_lo, d, s_hi = split
    mid = FpWindow.middle(p, d)
    return FpWindow(p, mid.lo - s_lo, mid.hi + s_hi)


def chi_by_embedding(g, split: tuple[int, int, int], p: int) -> FpPolyhom:
    """The same middle relation computed by sandwiching the graph of g between truncations."""
    g = _check_split(g, split, p)
    win = embedding_window(p, split)
    mid = FpWindow.middle(p, split[1])
    t = theta_block(win, mid.lo, mid.hi)
    Q = fp_compose(t, fp_compose(fp_graph(win, g), t))
    return reduce_to_middle(Q, mid.lo, mid.hi)


# swap sequences

def _swap_graph(win: FpWindow, first: range, second: range) -> FpPolyhom:
    for l in (*first, *second):
        win.col(l)
    perm = list(range(win.dim))
    for x, y in zip(first, second):
        perm[win.col(x)], perm[win.col(y)] = perm[win.col(y)], perm[win.col(x)]
    return fp_graph(win, np.eye(win.dim, dtype=np.int64)[perm])


def s_plus(win: FpWindow, m: int, j: int) -> FpPolyhom:
    """Swap coordinate blocks [m, m+j) and [m+j, m+2j)."""
    if m + 2 * j > win.hi or m < win.lo:
        raise OutOfWindow(f"S+ with m={m}, j={j} does not fit in {win}")
    return _swap_graph(win, range(m, m + j), range(m + j, m + 2 * j))


def s_minus(win: FpWindow, m: int, j: int) -> FpPolyhom:
    """Swap coordinate blocks [-m-j, -m) and [-m-2j, -m-j)."""
    if -m - 2 * j < win.lo or -m > win.hi:
        raise OutOfWindow(f"S- with m={m}, j={j} does not fit in {win}")
    return _swap_graph(win, range(-m - j, -m), range(-m - 2 * j, -m - j))


# box measures

@dataclass(frozen=True, eq=False)
class BoxFamily:
    """Boxes (v + W^k) x (w + W^k) for every pair of listed representatives."""

    window: FpWindow
    k: int
    pairs: np.ndarray  # rows (v | w)

    def __len__(self) -> int:
        return self.pairs.shape[0]


def coset_family(win: FpWindow, k: int, l: int, limit: int = 1 << 20) -> BoxFamily:
    """All pairs of cosets of W^k inside W^{-l}."""
    if k + l < 0:
        raise ValueError("need W^k inside W^{-l}, i.e. k + l >= 0")
    w_subspace(win, k)
    w_subspace(win, -l)
    n = win.dim
    cols = list(range(win.free_below(-k), win.free_below(l)))
    count = win.p ** (2 * len(cols))
    if count > limit:
        raise TooLarge(f"box family would have {count} members")
    digits = gfp.all_vectors(win.p, len(cols))
    reps = np.zeros((digits.shape[0], n), dtype=np.int64)
    reps[:, cols] = digits
    r = reps.shape[0]
    pairs = np.hstack([np.repeat(reps, r, axis=0), np.tile(reps, (r, 1))])
    return BoxFamily(win, k, pairs)


def box_measures(P: FpPolyhom, family: BoxFamily) -> list[Fraction]:
    """Measure of every box in the family."""
    if P.window != family.window:
        raise WindowMismatch("family belongs to another window")
    if P.is_zero:
        return [Fraction(0)] * len(family)
    p, n = P.p, P.n
    Wk = w_subspace(P.window, family.k)
    Z = np.zeros_like(Wk)
    WW = np.vstack([np.hstack([Wk, Z]), np.hstack([Z, Wk])])
    R, piv = gfp.rref(np.vstack([P.basis, WW]), p, 2 * n)
    hit = gfp.in_span(R, piv, family.pairs, p)
    # points of the carrier inside one box: a coset of C & (W^k + W^k)
    inside = gfp.intersection_dim(P.basis, WW, p, 2 * n)
    mass = P.weight * p**inside
    return [mass if h else Fraction(0) for h in hit]


def box_discrepancy(A: FpPolyhom, B: FpPolyhom, family: BoxFamily) -> Fraction:
    _check_window(A, B)
    ma, mb = box_measures(A, family), box_measures(B, family)
    return max((abs(x - y) for x, y in zip(ma, mb)), default=Fraction(0))


# finitary realization

@dataclass(frozen=True, eq=False)
class MiddleData:
    """Bases adapted to a relation Q on F_p^d."""

    ker: np.ndarray
    lifts: np.ndarray  # carrier rows (c | phi(c)) with c completing ker to dom
    dom_complement: np.ndarray
    indef: np.ndarray
    im_complement: np.ndarray
    t: int  # alpha = p^-t


def _middle_data(Q: FpPolyhom) -> MiddleData:
    p, d = Q.p, Q.n
    m = Q.marginals()
    t = p_log(Q.alpha, p)
    if t is None or t > 0:
        raise ValueError("alpha must be a nonpositive power of p")
    picked = []
    current = m.ker
    r0 = current.shape[0]
    for row in Q.basis:
        trial = np.vstack([current, row[:d]])
        if gfp.rank(trial, p) > r0:
            current, r0 = trial, r0 + 1
            picked.append(row)
    lifts = np.array(picked, dtype=np.int64) if picked else np.zeros((0, 2 * d), dtype=np.int64)
    im_part = np.vstack([m.indef, lifts[:, d:]])
    return MiddleData(
        ker=m.ker,
        lifts=lifts,
        dom_complement=gfp.complement(m.dom, p, d),
        indef=m.indef,
        im_complement=gfp.complement(im_part, p, d),
        t=-t,
    )


def minimal_padding(Q: FpPolyhom) -> tuple[int, int]:
    """Smallest (s_lo, s_hi) for which :func:`construct_witness` applies."""
    D = _middle_data(Q)
    return D.indef.shape[0] + D.t, D.dom_complement.shape[0] + D.t


def construct_witness(Q: FpPolyhom, s_lo: int, s_hi: int) -> np.ndarray | None:
    """An invertible g with chi(g, (s_lo, d, s_hi)) == Q, built from adapted bases.

    Returns None when the padding is too small or beta > 1 forbids it.
    """
    p, d = Q.p, Q.n
    D = _middle_data(Q)
    k, j, a, b, t = (D.ker.shape[0], D.indef.shape[0], D.dom_complement.shape[0], D.im_complement.shape[0], D.t)
    r = D.lifts.shape[0]
    if t < k - j or s_lo < j + t or s_hi < a + t:
        return None
    n = s_lo + d + s_hi
    L, M, T = 0, s_lo, s_lo + d  # block offsets

    def low(i):
        return L + i

    def top(i):
        return T + i

    def embed_mid(v):
        w = np.zeros(n, dtype=np.int64)
        w[M : M + d] = v
        return w

    def unit(c):
        w = np.zeros(n, dtype=np.int64)
        w[c] = 1
        return w

    src, img = [], []
    low_out = iter(range(s_lo))
    top_out = iter(range(s_hi))
    for v in D.ker:
        src.append(embed_mid(v))
        img.append(unit(low(next(low_out))))
    for row in D.lifts:
        src.append(embed_mid(row[:d]))
        img.append(embed_mid(row[d:]))
    for v in D.dom_complement:
        src.append(embed_mid(v))
        img.append(unit(top(next(top_out))))
    for i in range(s_lo):
        src.append(unit(low(i)))
        if i < j:
            img.append(embed_mid(D.indef[i]))
        elif i < j + t:
            img.append(unit(top(next(top_out))))
        else:
            img.append(unit(low(next(low_out))))
    t_lo = j + t - k
    for i in range(s_hi):
        src.append(unit(top(i)))
        if i < b:
            img.append(embed_mid(D.im_complement[i]))
        elif i < b + t_lo:
            img.append(unit(low(next(low_out))))
        else:
            img.append(unit(top(next(top_out))))
    assert r + k + a == d
    B_in = np.array(src, dtype=np.int64).reshape(len(src), n)
    Img = np.array(img, dtype=np.int64).reshape(len(img), n)
    inv = gfp.inverse(B_in, p)
    assert inv is not None and gfp.inverse(Img, p) is not None
    return (inv @ Img) % p


def candidate_matrices(n: int, p: int, max_support: int):
    """Matrices 1 + E by increasing number of nonzero entries of E, then position order."""
    positions = [(i, j) for i in range(n) for j in range(n)]
    eye = np.eye(n, dtype=np.int64)
    for s in range(max_support + 1):
        for pos in itertools.combinations(positions, s):
            for vals in itertools.product(range(1, p), repeat=s):
                g = eye.copy()
                for (i, j), x in zip(pos, vals):
                    g[i, j] = (g[i, j] + x) % p
                yield g


@dataclass(frozen=True, eq=False)
class Realization:
    g: np.ndarray
    split: tuple[int, int, int]
    method: str
    tried: int


def _search(Qm: FpPolyhom, split: tuple[int, int, int], budget: int, seed: int) -> Realization | None:
    p, n = Qm.p, sum(split)
    tried = 0
    for g in candidate_matrices(n, p, n * n):
        if tried >= budget // 2:
            break
        tried += 1
        if gfp.inverse(g, p) is not None and chi(g, split, p) == Qm:
            return Realization(g, split, "search", tried)
    rng = np.random.default_rng(seed)
    while tried < budget:
        tried += 1
        g = rng.integers(0, p, size=(n, n))
        if gfp.inverse(g, p) is not None and chi(g, split, p) == Qm:
            return Realization(g, split, "random", tried)
    return None


def realize_middle(
    Q: FpPolyhom,
    padding: tuple[int, int] | None = None,
    method: str = "auto",
    budget: int = 20000,
    seed: int = 0,
) -> Realization | None:
    """A finitary g whose characteristic relation on the middle block is Q, or None.

    ``method`` is "construct", "search" or "auto" (construct, then search).
    Construction uses at least :func:`minimal_padding`, enlarging ``padding``
    if needed.  Search keeps ``padding`` fixed and walks
    :func:`candidate_matrices` (fewest changed entries first), then seeded
    random matrices, for at most ``budget`` candidates.  None means the search
    gave up, not that no witness exists.  Every returned witness has been
    checked by sandwiching its graph in the embedding window.
    """
    if method not in ("auto", "construct", "search"):
        raise ValueError("method is 'auto', 'construct' or 'search'")
    if Q.is_zero:
        return None
    if Q.window != FpWindow.middle(Q.p, Q.n):
        raise WindowMismatch(f"{Q.window} is not the centered block of size {Q.n}")
    want = minimal_padding(Q)
    pad = padding if padding is not None else want
    found = None
    if method != "search":
        s_lo, s_hi = max(pad[0], want[0]), max(pad[1], want[1])
        g = construct_witness(Q, s_lo, s_hi)
        if g is not None:
            found = Realization(g, (s_lo, Q.n, s_hi), "construct", 1)
    if found is None and method != "construct":
        found = _search(Q, (pad[0], Q.n, pad[1]), budget, seed)
    if found is not None and chi_by_embedding(found.g, found.split, Q.p) != Q:
        raise InternalInconsistency("witness does not reproduce the relation after embedding")
    return found


def realize_finitary(
    R: FpPolyhom,
    m: int,
    budget: int = 20000,
    method: str = "auto",
    seed: int = 0,
) -> Realization | None:
    """g with theta_m R theta_m == theta_m g theta_m on the block W^{-m}/W^m, or None.

    The witness acts on the coordinates of R's window padded below and above
    as far as needed: inside a fixed finite window theta_m g theta_m has
    alpha >= p^-(padding), so small windows cannot reach every sandwich.
    """
    Q = sandwich(R, m)
    if Q.is_zero:
        return None
    Qm = reduce_to_middle(Q, -m, m)
    win = R.window
    return realize_middle(Qm, (-m - win.lo, win.hi - m), method, budget, seed)


# lowering to finite groups

def vector_codes(V: np.ndarray, p: int) -> np.ndarray:
    """Base-p integer code of each row, first coordinate most significant."""
    n = V.shape[1]
    return V @ (p ** np.arange(n - 1, -1, -1, dtype=np.int64))


def lower_window(win: FpWindow) -> MeasuredGroup:
    if win.p ** (2 * win.dim) > LOWERING_LIMIT:
        raise TooLarge(f"{win} is too large to lower to a Cayley table")
    return MeasuredGroup(elementary_abelian(win.p, win.dim), win.point_mass)


def lower(R: FpPolyhom) -> Polyhom:
    """The same polyhomomorphism on the additive group F_p^n as a finite group."""
    G = lower_window(R.window)
    if R.is_zero:
        return zero(G, G)
    p, n = R.p, R.n
    vecs = gfp.span_vectors(R.basis, p, 2 * n)
    codes = vector_codes(vecs[:, :n], p) * p**n + vector_codes(vecs[:, n:], p)
    prod = direct_product(G.group, G.group)
    rel = MultRelation(G.group, G.group, Subgroup(prod, codes))
    return make_polyhom(rel, R.weight, G, G)


def is_p_power_weighted(R: FpPolyhom) -> bool:
    """alpha^-1 and beta^-1 are nonnegative powers of p."""
    if R.is_zero:
        return True
    ea, eb = p_log(R.alpha, R.p), p_log(R.beta, R.p)
    return ea is not None and eb is not None and ea <= 0 and eb <= 0


def all_subspaces(p: int, n: int):
    """Every subspace of F_p^n as an RREF basis, by dimension and then pivot pattern."""
    for k in range(n + 1):
        for piv in itertools.combinations(range(n), k):
            # free entries: row i, columns after its pivot that are not pivots
            free = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, n) if c not in piv]
            for vals in itertools.product(range(p), repeat=len(free)):
                B = np.zeros((k, n), dtype=np.int64)
                for i, pc in enumerate(piv):
                    B[i, pc] = 1
                for (i, c), x in zip(free, vals):
                    B[i, c] = x
                yield B

"""Exact rational matrices realizing polyhomomorphisms on l^2 of finite groups.

Matrices have rows indexed by source elements and columns by target elements,
so ``pi(P)`` maps functions on the target to functions on the source and

    pi(compose(T, R)) == pi(R) @ pi(T).

Every space carries the inner product <f, g> = point_mass * sum f(x) g(x).
The row and column point masses travel with the matrix so adjoints and norms
are taken against the right measures.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotNormal, PartialIsometryViolated, SamePair, ZeroPolyhom
from .groups import Subgroup, index, intersect, is_normal
from .morphisms import MeasuredGroup, Polyhom
from .relations import MultRelation, image_of_set, pseudoinverse

_INT64_SAFE = 2**62


def _gcd_all(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        g = 0
        for x in arr.flat:
            g = math.gcd(g, int(x))
            if g == 1:
                break
        return g
    return int(np.gcd.reduce(np.abs(arr), axis=None))


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(x)) for x in arr.flat)
    return int(np.abs(arr).max())


class RationalMatrix:
    """Integer numerator array over a common positive denominator, kept in lowest terms.

    Numerators are int64 while products provably fit, otherwise Python ints
    (object dtype).
    """

    __slots__ = ("num", "den", "row_mass", "col_mass")

    def __init__(self, num, den: int = 1, row_mass: Fraction = Fraction(1), col_mass: Fraction = Fraction(1)):
        num = np.asarray(num)
        if num.ndim != 2:
            raise DimensionMismatch("a matrix needs two axes")
        if num.dtype != object:
            num = num.astype(np.int64)
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(_gcd_all(num), den)
        if g > 1:
            num = num // g
            den //= g
        if num.dtype == object and _maxabs(num) < _INT64_SAFE:
            num = num.astype(np.int64)
        num.setflags(write=False)
        self.num = num
        self.den = den
        self.row_mass = Fraction(row_mass)
        self.col_mass = Fraction(col_mass)

    # construction

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence], row_mass=Fraction(1), col_mass=Fraction(1)) -> "RationalMatrix":
        fr = [[Fraction(x) for x in r] for r in rows]
        den = 1
        for r in fr:
            for x in r:
                den = den * x.denominator // math.gcd(den, x.denominator)
        num = np.array([[int(x * den) for x in r] for r in fr], dtype=object)
        if num.ndim != 2:
            num = num.reshape(len(fr), -1)
        return cls(num, den, row_mass, col_mass)

    @classmethod
    def identity(cls, n: int, mass=Fraction(1)) -> "RationalMatrix":
        return cls(np.eye(n, dtype=np.int64), 1, mass, mass)

    @classmethod
    def zeros(cls, rows: int, cols: int, row_mass=Fraction(1), col_mass=Fraction(1)) -> "RationalMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), 1, row_mass, col_mass)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.num[i, j]), self.den)

    def to_fractions(self) -> list[list[Fraction]]:
        return [[Fraction(int(x), self.den) for x in row] for row in self.num]

    def is_nonnegative(self) -> bool:
        return bool((self.num >= 0).all())

    def is_zero(self) -> bool:
        return not bool((self.num != 0).any())

    # arithmetic

    def _check_same_space(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape or self.row_mass != other.row_mass or self.col_mass != other.col_mass:
            raise DimensionMismatch(f"shapes/masses differ: {self.shape} vs {other.shape}")

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.col_mass != other.row_mass:
            raise DimensionMismatch("inner point masses differ")
        a, b = self.num, other.num
        k = self.shape[1]
        if a.dtype != object and b.dtype != object and _maxabs(a) * _maxabs(b) * max(k, 1) < _INT64_SAFE:
            prod = a @ b
        else:
            prod = a.astype(object) @ b.astype(object)
        return RationalMatrix(prod, self.den * other.den, self.row_mass, other.col_mass)

    def _combine(self, other: "RationalMatrix", sign: int) -> "RationalMatrix":
        self._check_same_space(other)
        den = self.den * other.den // math.gcd(self.den, other.den)
        a, b = self.num, other.num
        fa, fb = den // self.den, den // other.den
        if a.dtype != object and b.dtype != object and (_maxabs(a) * fa + _maxabs(b) * fb) < _INT64_SAFE:
            out = a * fa + sign * (b * fb)
        else:
            out = a.astype(object) * fa + sign * (b.astype(object) * fb)
        return RationalMatrix(out, den, self.row_mass, self.col_mass)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._combine(other, -1)

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        num = self.num
        if num.dtype != object and _maxabs(num) * abs(c.numerator) >= _INT64_SAFE:
            num = num.astype(object)
        return RationalMatrix(num * c.numerator, self.den * c.denominator, self.row_mass, self.col_mass)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.den == other.den
            and self.row_mass == other.row_mass
            and self.col_mass == other.col_mass
            and bool((self.num == other.num).all())
        )

    __hash__ = None  # mutable-looking value type; compare, do not hash

    def adjoint(self) -> "RationalMatrix":
        """Adjoint for the weighted inner products on rows and columns."""
        c = self.row_mass / self.col_mass
        t = RationalMatrix(self.num.T, self.den, self.col_mass, self.row_mass)
        return t.scale(c)

    def apply(self, vector: Sequence) -> tuple[Fraction, ...]:
        v = [Fraction(x) for x in vector]
        if len(v) != self.shape[1]:
            raise DimensionMismatch("vector length does not match the column count")
        out = []
        for row in self.num:
            s = sum((int(a) * x for a, x in zip(row, v) if a), Fraction(0))
            out.append(s / self.den)
        return tuple(out)

    def __repr__(self) -> str:
        return f"RationalMatrix({self.shape[0]}x{self.shape[1]}, den={self.den})"

    # text output

    def rows_text(self) -> list[list[str]]:
        return [[format_fraction(x) for x in row] for row in self.to_fractions()]

    def to_grid(self) -> str:
        cells = self.rows_text()
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)

    def to_csv(self) -> str:
        return "\n".join(",".join(r) for r in self.rows_text())


def format_fraction(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def weighted_norm_sq(vector: Sequence, mass) -> Fraction:
    return Fraction(mass) * sum((Fraction(x) ** 2 for x in vector), Fraction(0))


# operators attached to relations and polyhomomorphisms

def pi_star(R: MultRelation) -> RationalMatrix:
    """0/1 summation operator of a relation."""
    return RationalMatrix(R.incidence())


def pi(P: Polyhom) -> RationalMatrix:
    """Entry (g, h) = weight * [(g, h) in R] / point_mass(source)."""
    rm, cm = P.source.point_mass, P.target.point_mass
    if P.is_zero:
        return RationalMatrix.zeros(P.source.order, P.target.order, rm, cm)
    c = P.weight / rm
    return RationalMatrix(P.relation.incidence() * c.numerator, c.denominator, rm, cm)


@functools.lru_cache(maxsize=4096)
def projection(G: MeasuredGroup, phi: Subgroup, delta: Subgroup) -> RationalMatrix:
    """Orthogonal projection onto delta-invariant functions supported on phi."""
    if not is_normal(delta, phi):
        raise NotNormal("delta is not normal in phi")
    grp = G.group
    m = np.zeros((grp.order, grp.order), dtype=np.int64)
    cols = grp.cayley[np.ix_(phi.array, delta.array)]
    m[np.repeat(phi.array, delta.order), cols.reshape(-1)] = 1
    P = RationalMatrix(m, delta.order, G.point_mass, G.point_mass)
    assert P @ P == P, "projection is not idempotent"
    assert P.adjoint() == P, "projection is not self-adjoint"
    return P


def verify_partial_isometry(P: Polyhom) -> tuple[Fraction, RationalMatrix, RationalMatrix]:
    """Return (alpha*beta, initial projection, final projection) after checking both identities."""
    if P.is_zero:
        raise ZeroPolyhom("the zero operator is not checked as a partial isometry")
    dom, im, ker, indef = P.marginals()
    A = pi(P)
    As = A.adjoint()
    s2 = P.alpha * P.beta
    initial = projection(P.target, im, indef)
    final = projection(P.source, dom, ker)
    d1 = As @ A - initial.scale(s2)
    if not d1.is_zero():
        raise PartialIsometryViolated("pi* pi differs from alpha beta times the initial projection", d1)
    d2 = A @ As - final.scale(s2)
    if not d2.is_zero():
        raise PartialIsometryViolated("pi pi* differs from alpha beta times the final projection", d2)
    return s2, initial, final


def angle_sigma(phi: Subgroup, delta: Subgroup, psi: Subgroup, gamma: Subgroup) -> Fraction:
    return Fraction(1, index(delta, intersect(delta, psi)) * index(gamma, intersect(gamma, phi)))


def angle_check(G: MeasuredGroup, phi: Subgroup, delta: Subgroup, psi: Subgroup, gamma: Subgroup) -> Fraction:
    """sigma for two projections, after checking M @ M == sigma * M for M = P Q P."""
    if (phi, delta) == (psi, gamma):
        raise SamePair("the two (subgroup, normal subgroup) pairs coincide")
    P = projection(G, phi, delta)
    Q = projection(G, psi, gamma)
    sigma = angle_sigma(phi, delta, psi, gamma)
    M = P @ Q @ P
    if M @ M != M.scale(sigma):
        raise PartialIsometryViolated(f"P Q P does not square to {sigma} times itself", M @ M - M.scale(sigma))
    return sigma


def indicator(n: int, B: Iterable[int]) -> tuple[int, ...]:
    v = [0] * n
    for b in B:
        v[b] = 1
    return tuple(v)


def is_invariant(B: Iterable[int], S: Subgroup) -> bool:
    """Is B a union of cosets bS?"""
    Bs = set(B)
    table = S.parent.cayley
    return all(int(table[b, s]) in Bs for b in Bs for s in S.array)


def apply_indicator(P: Polyhom, B: Iterable[int]) -> tuple[Fraction, ...]:
    """pi(P) applied to the indicator of B.

    When B lies in im R and is invariant under indef R the result is checked
    against alpha times the indicator of the preimage of B.
    """
    B = frozenset(B)
    out = pi(P).apply(indicator(P.target.order, B))
    if not P.is_zero:
        _, im, _, indef = P.marginals()
        if B <= set(im.elements) and is_invariant(B, indef):
            pre = image_of_set(pseudoinverse(P.relation), B)
            expected = tuple(P.alpha * x for x in indicator(P.source.order, pre))
            assert out == expected, "indicator identity failed"
    return out


def is_contraction_on_indicators(P: Polyhom) -> bool:
    """||pi(P) 1_x||^2 <= ||1_x||^2 for every point indicator, with weighted norms."""
    A = pi(P)
    for h in range(P.target.order):
        v = indicator(P.target.order, [h])
        if weighted_norm_sq(A.apply(v), P.source.point_mass) > weighted_norm_sq(v, P.target.point_mass):
            return False
    return True

"""The brute-force references checked against hand-listed values."""

from fractions import Fraction

import pytest

from polyhom import oracles

Z4 = [[(a + b) % 4 for b in range(4)] for a in range(4)]
Z6 = [[(a + b) % 6 for b in range(6)] for a in range(6)]
# S3 as permutations of (0, 1, 2), composed left to right
PERMS = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
S3 = [[PERMS.index(tuple(q[p[i]] for i in range(3))) for q in PERMS] for p in PERMS]


def test_closure_by_hand():
    assert oracles.naive_closure(Z6, [0]) == {0}
    assert oracles.naive_closure(Z6, [2]) == {0, 2, 4}
    assert len(oracles.naive_closure(S3, [1, 3])) == 6
    assert oracles.naive_inverse(Z4, 1) == 3


def test_associativity_oracle():
    assert oracles.naive_is_associative(S3)
    assert not oracles.naive_is_associative([[0, 1, 2], [1, 0, 0], [2, 2, 1]])


def test_relation_composition_by_hand():
    ident = [(x, x) for x in range(4)]
    T = [(0, 0), (2, 2)]
    R = [(x, 2 * x % 4) for x in range(4)]
    assert oracles.naive_rel_compose(T, ident, (4, 4, 4)) == frozenset(T)
    assert oracles.naive_rel_compose(T, R, (4, 4, 4)) == frozenset(R)
    full = [(a, b) for a in range(2) for b in range(2)]
    assert oracles.naive_rel_compose(full, full, (2, 2, 2)) == frozenset(full)


def test_marginal_measure_by_hand():
    ident = [(x, x) for x in range(3)]
    assert oracles.naive_marginal_measure(ident, 1, "source", 3) == [1, 1, 1]
    assert oracles.naive_marginal_measure([], 1, "target", 2) == [0, 0]
    R = [(x, 2 * x % 4) for x in range(4)]
    # alpha = 1/2 on dom = C4, beta = 1 on im = {0, 2}
    assert oracles.naive_marginal_measure(R, Fraction(1, 2), "target", 4) == [1, 0, 1, 0]
    with pytest.raises(ValueError):
        oracles.naive_marginal_measure(R, 1, "middle", 4)


def test_operator_and_matmul():
    A = oracles.naive_operator([(0, 1), (1, 0)], Fraction(1, 2), 1, 2, 2)
    assert A == [[0, Fraction(1, 2)], [Fraction(1, 2), 0]]
    assert oracles.naive_matmul(A, A) == [[Fraction(1, 4), 0], [0, Fraction(1, 4)]]


def test_span_and_linear_marginals():
    vecs = oracles.naive_span([[1, 0, 1, 0], [0, 1, 0, 0]], 2, 4)
    assert len(vecs) == 4
    marg = oracles.naive_linear_marginals(vecs, 2)
    assert marg["dom"] == {(0, 0), (1, 0), (0, 1), (1, 1)}
    assert marg["ker"] == {(0, 0), (0, 1)}
    assert marg["indef"] == {(0, 0)}
    assert oracles.naive_span([], 3, 0) == {()}


def test_fp_compose_by_hand():
    # identity on F_2^1 composed with itself, window point mass 1
    vecs, w = oracles.naive_fp_compose([[1, 1]], 1, [[1, 1]], 1, 2, 1, 1)
    assert vecs == {(0, 0), (1, 1)} and w == 1
    # full relation after full relation: every middle vector counts
    full = [[1, 0], [0, 1]]
    vecs, w = oracles.naive_fp_compose(full, Fraction(1, 2), full, Fraction(1, 2), 2, 1, 1)
    assert len(vecs) == 4 and w == Fraction(1, 2)


def test_chi_by_hand():
    # identity matrix: chi is the diagonal
    eye = [[int(i == j) for j in range(3)] for i in range(3)]
    assert oracles.naive_chi(eye, (1, 1, 1), 2) == {(0, 0), (1, 1)}


def test_box_measure_by_hand():
    vecs = {(0, 0, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1), (1, 1, 1, 1)}
    assert oracles.naive_box_measure(vecs, Fraction(1, 4), (0, 0), (0, 0), 1) == Fraction(1, 2)
    assert oracles.naive_box_measure(vecs, Fraction(1, 4), (0, 1), (0, 0), 1) == 0


def test_enumeration_limit():
    with pytest.raises(oracles.TooLarge):
        oracles.naive_fp_compose([], 1, [], 1, 2, 13, 1)

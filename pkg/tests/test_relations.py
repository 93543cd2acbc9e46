import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyhom import oracles
from polyhom.errors import MiddleGroupMismatch, NotAHomomorphism
from polyhom.groups import Subgroup, all_subgroups, cyclic, direct_product, intersect, is_normal, whole
from polyhom.pools import pool_groups, random_relation
from polyhom.relations import (
    MultRelation,
    canonical_iso,
    image_of_set,
    pseudoinverse,
    rel_compose,
)

C4 = cyclic(4)
DOUBLE = MultRelation.graph(C4, C4, lambda x: 2 * x % 4)


def test_double_marginals():
    dom, im, ker, indef = DOUBLE.marginals()
    assert dom.elements == (0, 1, 2, 3)
    assert im.elements == (0, 2)
    assert ker.elements == (0, 2)
    assert indef.elements == (0,)


def test_compose_with_diagonal():
    T = MultRelation.diagonal(Subgroup(C4, [0, 2]))
    S = rel_compose(T, DOUBLE)
    assert set(S.pairs()) == {(x, 2 * x % 4) for x in range(4)}
    naive = oracles.naive_rel_compose(T.pairs(), DOUBLE.pairs(), (4, 4, 4))
    assert naive == frozenset(S.pairs())


def test_compose_identity_and_diagonals():
    G = direct_product(cyclic(2), cyclic(4))
    T = MultRelation.generated(G, C4, [(1, 1), (2, 2)])
    assert rel_compose(T, MultRelation.identity(G)) == T
    subs = all_subgroups(G)
    for A in subs:
        for B in subs:
            assert rel_compose(MultRelation.diagonal(B), MultRelation.diagonal(A)) == MultRelation.diagonal(
                intersect(A, B)
            )


def test_compose_middle_mismatch():
    with pytest.raises(MiddleGroupMismatch):
        rel_compose(MultRelation.identity(cyclic(3)), DOUBLE)


def test_pseudoinverse():
    inv = pseudoinverse(DOUBLE)
    assert set(inv.pairs()) == {(2 * x % 4, x) for x in range(4)}
    assert inv.marginals().dom == DOUBLE.marginals().im
    assert pseudoinverse(inv) == DOUBLE
    f = MultRelation.graph(C4, C4, lambda x: 3 * x % 4)
    assert pseudoinverse(f) == f  # x -> 3x is its own inverse


def test_full_relation():
    G, H = cyclic(2), cyclic(3)
    R = MultRelation.full(G, H)
    dom, im, ker, indef = R.marginals()
    assert (dom, im, ker, indef) == (whole(G), whole(H), whole(G), whole(H))
    iso = canonical_iso(R)
    assert iso.source_quotient.order == iso.target_quotient.order == 1


def test_graph_of_surjection():
    R = MultRelation.graph(C4, cyclic(2), lambda x: x % 2)
    assert len(R) == 4
    dom, im, ker, indef = R.marginals()
    assert ker.elements == (0, 2) and indef.elements == (0,) and im.order == 2
    trivial_map = MultRelation.graph(C4, cyclic(2), [0, 0, 0, 0])
    assert set(trivial_map.pairs()) == {(x, 0) for x in range(4)}


def test_graph_rejects_non_homomorphism():
    with pytest.raises(NotAHomomorphism):
        MultRelation.graph(C4, C4, [0, 1, 1, 0])


def test_canonical_iso_of_double():
    iso = canonical_iso(DOUBLE)
    # coset of 1 in C4/{0,2} goes to 2 in {0,2}/{0}
    x = iso.source_map(1)
    y = iso.target_map(2)
    assert iso(x) == y
    assert iso.source_quotient.order == iso.target_quotient.order == 2


def test_image_of_set():
    assert image_of_set(DOUBLE, []) == frozenset()
    assert image_of_set(DOUBLE, [1, 3]) == {2}
    assert image_of_set(DOUBLE, [1]) == {2}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_rel_compose_matches_triple_loop(seed):
    rng = random.Random(seed)
    groups = [G for G in pool_groups() if G.order <= 8]
    G, H, K = (rng.choice(groups) for _ in range(3))
    R, T = random_relation(rng, G, H), random_relation(rng, H, K)
    naive = oracles.naive_rel_compose(T.pairs(), R.pairs(), (G.order, H.order, K.order))
    assert frozenset(rel_compose(T, R).pairs()) == naive


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_marginal_normality_and_iso(seed):
    rng = random.Random(seed)
    G, H = rng.choice(pool_groups()), rng.choice(pool_groups())
    R = random_relation(rng, G, H)
    dom, im, ker, indef = R.marginals()
    assert is_normal(ker, dom) and is_normal(indef, im)
    assert dom.order // ker.order == im.order // indef.order
    assert len(R) == dom.order * indef.order
    canonical_iso(R)
    assert set(ker.elements) == {g for g, h in R.pairs() if h == H.identity}

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyhom import oracles
from polyhom.errors import (
    ElementOutOfRange,
    NotAssociative,
    NotASubgroup,
    NotASubgroupChain,
    NotNormal,
)
from polyhom.groups import (
    Subgroup,
    all_subgroups,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    from_cayley_table,
    index,
    intersect,
    is_normal,
    left_cosets,
    normal_pairs,
    quaternion,
    quotient,
    set_product,
    subgroup_generate,
    symmetric,
    trivial,
    whole,
)
from polyhom.pools import pool_groups


def test_trivial_table():
    G = from_cayley_table([[0]])
    assert G.order == 1 and G.identity == 0


def test_cyclic_four_from_table():
    G = from_cayley_table([[(a + b) % 4 for b in range(4)] for a in range(4)])
    assert G.identity == 0
    assert G.inv(1) == 3


def test_non_associative_table_is_rejected_with_witness():
    # a Latin square with identity 0 that is not associative
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    assert not oracles.naive_is_associative(table)
    with pytest.raises(NotAssociative) as info:
        from_cayley_table(table)
    a, b, c = info.value.witness
    assert table[table[a][b]][c] != table[a][table[b][c]]


def test_klein_and_product_law():
    K = direct_product(cyclic(2), cyclic(2))
    assert K.order == 4 and K.is_abelian()
    G = direct_product(cyclic(4), cyclic(2))
    x, y = G.pair_encode(1, 1), G.pair_encode(3, 1)
    assert G.pair_decode(G.mul(x, y)) == (0, 0)


def test_product_with_trivial_group():
    G = symmetric(3)
    P = direct_product(cyclic(1), G)
    for a, b in itertools.product(range(6), repeat=2):
        assert P.pair_decode(P.mul(P.pair_encode(0, a), P.pair_encode(0, b))) == (0, G.mul(a, b))


def test_generate_in_c6():
    C6 = cyclic(6)
    assert subgroup_generate(C6, [2]).elements == (0, 2, 4)
    assert subgroup_generate(C6, [0]).elements == (0,)
    assert oracles.naive_closure(C6.cayley.tolist(), [2]) == {0, 2, 4}


def test_transposition_and_three_cycle_generate_s3():
    S3 = symmetric(3)
    three_cycle = next(x for x in range(6) if subgroup_generate(S3, [x]).order == 3)
    swap = next(x for x in range(6) if subgroup_generate(S3, [x]).order == 2)
    assert subgroup_generate(S3, [swap, three_cycle]).order == 6
    assert len(oracles.naive_closure(S3.cayley.tolist(), [swap, three_cycle])) == 6


def test_index():
    C6 = cyclic(6)
    K = Subgroup(C6, [0, 2, 4])
    assert index(K, K) == 1
    assert index(whole(C6), K) == 2
    with pytest.raises(NotASubgroupChain):
        index(K, Subgroup(C6, [0, 3]))


def test_normality_in_s3():
    S3 = symmetric(3)
    subs = all_subgroups(S3)
    A3 = next(S for S in subs if S.order == 3)
    swap = next(S for S in subs if S.order == 2)
    assert is_normal(A3, whole(S3))
    assert not is_normal(swap, whole(S3))
    assert all(is_normal(S, whole(cyclic(6))) for S in all_subgroups(cyclic(6)))


def test_quotients():
    C4 = cyclic(4)
    Q, _ = quotient(whole(C4), whole(C4))
    assert Q.order == 1
    Q, q = quotient(whole(C4), Subgroup(C4, [0, 2]))
    assert Q.order == 2 and q(1) == q(3) == 1
    S3 = symmetric(3)
    A3 = next(S for S in all_subgroups(S3) if S.order == 3)
    assert quotient(whole(S3), A3)[0].order == 2
    swap = next(S for S in all_subgroups(S3) if S.order == 2)
    with pytest.raises(NotNormal):
        quotient(whole(S3), swap)


def test_intersection_and_product_set():
    C6 = cyclic(6)
    A, B = Subgroup(C6, [0, 2, 4]), Subgroup(C6, [0, 3])
    assert intersect(A, A) == A
    assert intersect(A, B).elements == (0,)
    assert set_product(B, A) == frozenset(range(6))


def test_subgroup_counts():
    assert len(all_subgroups(cyclic(1))) == 1
    assert len(all_subgroups(cyclic(4))) == 3
    assert len(all_subgroups(direct_product(cyclic(2), cyclic(2)))) == 5
    assert len(all_subgroups(symmetric(3))) == 6
    assert len(all_subgroups(dihedral(4))) == 10
    assert len(all_subgroups(quaternion())) == 6
    assert len(all_subgroups(elementary_abelian(2, 3))) == 16


def test_subgroup_validation():
    C4 = cyclic(4)
    with pytest.raises(NotASubgroup):
        Subgroup(C4, [0, 1])
    with pytest.raises(NotASubgroup):
        Subgroup(C4, [2])
    with pytest.raises(ElementOutOfRange):
        Subgroup(C4, [0, 4])


def test_cosets_partition():
    D4 = dihedral(4)
    for K in all_subgroups(D4):
        for N in all_subgroups(D4):
            if N.issubset(K):
                cosets = left_cosets(K, N)
                assert sorted(itertools.chain.from_iterable(cosets)) == list(K.elements)
                assert all(len(c) == N.order for c in cosets)


def test_normal_pairs_are_normal():
    for G in pool_groups()[:8]:
        for F, D in normal_pairs(G):
            assert D.issubset(F) and is_normal(D, F)


def test_max_order_bound_from_environment(monkeypatch):
    from polyhom.errors import GroupTooLarge

    monkeypatch.setenv("POLYHOM_MAX_ORDER", "8")
    with pytest.raises(GroupTooLarge):
        all_subgroups(direct_product(cyclic(4), cyclic(4)))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(pool_groups()), st.data())
def test_group_tables_match_oracles(G, data):
    table = G.cayley.tolist()
    a = data.draw(st.integers(0, G.order - 1))
    assert G.inv(a) == oracles.naive_inverse(table, a)
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    assert set(subgroup_generate(G, gens).elements) == oracles.naive_closure(table, gens)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([G for G in pool_groups() if G.order <= 8]))
def test_tables_associative(G):
    assert oracles.naive_is_associative(G.cayley.tolist())


def test_subgroups_closed_and_cached_lattice():
    G = dihedral(4)
    subs = all_subgroups(G)
    assert len(set(subs)) == len(subs)
    for S in subs:
        prod = G.cayley[np.ix_(S.array, S.array)]
        assert set(prod.ravel()) <= set(S.elements)
    assert trivial(G) in subs and whole(G) in subs

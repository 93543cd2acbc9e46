import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyhom import oracles
from polyhom.errors import DominationViolated, ZeroPolyhom
from polyhom.groups import Subgroup, cyclic, direct_product, trivial, whole
from polyhom.morphisms import (
    MeasuredGroup,
    box_measure,
    compose_all,
    decompose,
    identity,
    in_semigroup,
    involution,
    is_lambda_weighted,
    lambda_generators,
    lambda_membership,
    make_polyhom,
    mu_phi_delta,
    ph_compose,
    unit,
    zero,
)
from polyhom.pools import random_chain
from polyhom.relations import MultRelation, canonical_iso, rel_compose

C4 = cyclic(4)
M4 = unit(C4)
DOUBLE = MultRelation.graph(C4, C4, lambda x: 2 * x % 4)
P = make_polyhom(DOUBLE, Fraction(1, 2), M4, M4)


def test_identity_weights():
    I = identity(M4)
    assert I.alpha == I.beta == 1


def test_double_weights():
    assert P.alpha == Fraction(1, 2)
    assert P.beta == 1
    with pytest.raises(DominationViolated) as info:
        make_polyhom(DOUBLE, 1, M4, M4)
    assert info.value.which == "beta"


def test_alpha_beta_of_zero_diagonal_and_full():
    Z = zero(M4, M4)
    assert (Z.alpha, Z.beta) == (0, 0)
    D = make_polyhom(MultRelation.diagonal(Subgroup(C4, [0, 2])), 1, M4, M4)
    assert D.alpha == D.beta == 1
    C2 = unit(cyclic(2))
    F = make_polyhom(MultRelation.full(C2.group, C2.group), Fraction(1, 2), C2, C2)
    assert F.alpha == F.beta == 1


def test_alpha_measured_against_marginal_projection():
    # pushing the carrier measure to the source gives alpha times the point mass on dom
    for Q in (P, involution(P)):
        dom, im, _, _ = Q.marginals()
        src = oracles.naive_marginal_measure(Q.relation.pairs(), Q.weight, "source", Q.source.order)
        tgt = oracles.naive_marginal_measure(Q.relation.pairs(), Q.weight, "target", Q.target.order)
        assert all(src[g] == (Q.alpha * Q.source.point_mass if g in dom else 0) for g in range(4))
        assert all(tgt[h] == (Q.beta * Q.target.point_mass if h in im else 0) for h in range(4))


def test_compose_double_with_itself():
    S = ph_compose(P, P)
    assert set(S.relation.pairs()) == {(x, 0) for x in range(4)}
    assert S.alpha == Fraction(1, 4)
    assert S.beta == 1
    assert S.weight == Fraction(1, 4)


def test_compose_with_identity_and_zero():
    I = identity(M4)
    assert ph_compose(I, P) == P == ph_compose(P, I)
    Z = zero(M4, M4)
    assert ph_compose(Z, P).is_zero and ph_compose(P, Z).is_zero


def test_involution():
    Q = involution(P)
    assert set(Q.relation.pairs()) == {(2 * x % 4, x) for x in range(4)}
    assert (Q.alpha, Q.beta) == (P.beta, P.alpha)
    assert involution(Q) == P
    assert involution(zero(M4, unit(cyclic(2)))) == zero(unit(cyclic(2)), M4)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_involution_reverses_products(seed):
    R, T = random_chain(random.Random(seed), 2)
    assert involution(ph_compose(T, R)) == ph_compose(involution(R), involution(T))


def test_quotient_polyhoms():
    I, target = mu_phi_delta(M4, whole(C4), trivial(C4))
    assert I.alpha == I.beta == 1 and target.group.order == 4
    Q, target = mu_phi_delta(M4, whole(C4), whole(C4))
    assert target.group.order == 1 and target.point_mass == 4
    H = Subgroup(C4, [0, 2])
    Q, target = mu_phi_delta(M4, H, H)
    assert len(Q.relation) == 2
    assert target.group.order == 1 and target.point_mass == 2


def test_decompose_double():
    D = decompose(P)
    assert D.first.target.group.order == 2
    assert D.middle.source.group.order == D.middle.target.group.order == 2
    assert D.recompose() == P
    assert compose_all(D.last, D.middle, D.first) == P
    I = identity(M4)
    DI = decompose(I)
    for part in (DI.first, DI.middle, DI.last):
        canonical_iso(part.relation)
        assert part.relation.marginals().ker.order == 1
    assert DI.recompose() == I
    with pytest.raises(ZeroPolyhom):
        decompose(zero(M4, M4))


def test_lambda_membership():
    assert lambda_membership(C4, 1)
    assert lambda_generators(C4) == {2, 4}
    assert lambda_membership(C4, Fraction(1, 8))
    assert not lambda_membership(cyclic(3), Fraction(1, 2))
    assert lambda_membership(cyclic(3), Fraction(1, 9))
    assert not lambda_membership(C4, Fraction(2, 3))


def test_in_semigroup_divisor_search():
    assert in_semigroup(1, [])
    assert in_semigroup(12, [2, 3])
    assert not in_semigroup(12, [4, 6])
    assert in_semigroup(24, [4, 6])
    assert not in_semigroup(10, [4, 6])
    assert is_lambda_weighted(P)


def test_box_measure():
    assert box_measure(P, [], [0]) == 0
    I = identity(M4)
    assert box_measure(I, range(4), range(4)) == 4
    assert box_measure(P, [1, 3], [2]) == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_composition_weight_identity(seed):
    """weight(TR) == weight(R) weight(T) #(indef R & ker T) / pm(middle)."""
    from polyhom.groups import intersect

    R, T = random_chain(random.Random(seed), 2)
    S = ph_compose(T, R)
    c = intersect(R.marginals().indef, T.marginals().ker).order
    assert S.weight == R.weight * T.weight * c / R.target.point_mass
    assert S.relation == rel_compose(T.relation, R.relation)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_associativity_property(seed):
    A, B, C = random_chain(random.Random(seed), 3)
    assert ph_compose(ph_compose(C, B), A) == ph_compose(C, ph_compose(B, A))


def test_measured_point_mass_scales_weights():
    G = direct_product(cyclic(2), cyclic(2))
    half = MeasuredGroup(G, Fraction(1, 2))
    I = identity(half)
    assert I.weight == Fraction(1, 2) and I.alpha == I.beta == 1

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyhom import oracles
from polyhom.errors import DimensionMismatch, PartialIsometryViolated, SamePair, ZeroPolyhom
from polyhom.groups import Subgroup, all_subgroups, cyclic, direct_product, symmetric, trivial, whole
from polyhom.morphisms import identity, involution, make_polyhom, mu_phi_delta, ph_compose, unit, zero
from polyhom.operators import (
    RationalMatrix,
    angle_check,
    apply_indicator,
    format_fraction,
    is_contraction_on_indicators,
    pi,
    pi_star,
    projection,
    verify_partial_isometry,
)
from polyhom.pools import polyhom_pool, random_chain
from polyhom.relations import MultRelation

C4 = cyclic(4)
M4 = unit(C4)
DOUBLE = MultRelation.graph(C4, C4, lambda x: 2 * x % 4)
P = make_polyhom(DOUBLE, Fraction(1, 2), M4, M4)
KLEIN = direct_product(cyclic(2), cyclic(2))


def test_pi_star_basics():
    assert pi_star(MultRelation.identity(C4)) == RationalMatrix.identity(4)
    full = pi_star(MultRelation.full(C4, cyclic(2)))
    assert full.to_fractions() == [[Fraction(1)] * 2] * 4


def test_pi_identity_and_zero():
    assert pi(identity(M4)) == RationalMatrix.identity(4)
    assert pi(zero(M4, M4)).is_zero()


def test_pi_of_double_composition():
    S = ph_compose(P, P)
    assert pi(S) == pi(P) @ pi(P)
    naive = oracles.naive_matmul(pi(P).to_fractions(), pi(P).to_fractions())
    assert naive == pi(S).to_fractions()


def test_projection_values():
    assert projection(M4, whole(C4), trivial(C4)) == RationalMatrix.identity(4)
    avg = projection(M4, whole(C4), whole(C4))
    assert avg.to_fractions() == [[Fraction(1, 4)] * 4] * 4
    H = Subgroup(C4, [0, 2])
    half = projection(M4, H, H).to_fractions()
    for g in range(4):
        for x in range(4):
            assert half[g][x] == (Fraction(1, 2) if g in (0, 2) and x in (0, 2) else 0)


def test_partial_isometry_examples():
    s2, initial, final = verify_partial_isometry(identity(M4))
    assert s2 == 1 and initial == final == RationalMatrix.identity(4)
    H = Subgroup(C4, [0, 2])
    mu, _ = mu_phi_delta(M4, whole(C4), H)
    A = pi(mu)
    assert A.adjoint() @ A == RationalMatrix.identity(2, mu.target.point_mass)
    s2, initial, final = verify_partial_isometry(P)
    assert s2 == Fraction(1, 2)
    dom, im, ker, indef = P.marginals()
    assert initial == projection(M4, im, indef)
    assert final == projection(M4, dom, ker)
    with pytest.raises(ZeroPolyhom):
        verify_partial_isometry(zero(M4, M4))


def test_angle_klein():
    MK = unit(KLEIN)
    halves = [S for S in all_subgroups(KLEIN) if S.order == 2]
    F, S = halves[0], halves[1]
    e = trivial(KLEIN)
    assert angle_check(MK, F, e, S, e) == 1
    assert angle_check(MK, F, F, S, S) == Fraction(1, 4)
    with pytest.raises(SamePair):
        angle_check(MK, F, e, F, e)


def test_angle_in_s3():
    S3 = symmetric(3)
    A3 = next(S for S in all_subgroups(S3) if S.order == 3)
    swap = next(S for S in all_subgroups(S3) if S.order == 2)
    assert angle_check(unit(S3), whole(S3), A3, swap, trivial(S3)) == Fraction(1, 3)


def test_indicator_examples():
    assert apply_indicator(identity(M4), [1, 3]) == (0, 1, 0, 1)
    assert apply_indicator(P, [1, 3]) == (0,) * 4  # disjoint from the image {0, 2}
    assert apply_indicator(P, [0, 2]) == (Fraction(1, 2),) * 4


def test_adjoint_laws():
    A = pi(P)
    assert A @ RationalMatrix.identity(4) == A
    assert A.adjoint().adjoint() == A
    with pytest.raises(DimensionMismatch):
        A @ RationalMatrix.identity(3)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_adjoint_is_pi_of_involution(seed):
    (R,) = random_chain(random.Random(seed), 1)
    assert pi(R).adjoint() == pi(involution(R))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_functoriality_property(seed):
    R, T = random_chain(random.Random(seed), 2)
    assert pi(ph_compose(T, R)) == pi(R) @ pi(T)


def test_contraction_on_point_indicators():
    for R in polyhom_pool(seed=11, count=40, limit=12):
        assert is_contraction_on_indicators(R)


def test_matrix_text():
    A = pi(P)
    assert A.to_grid().splitlines()[0].split() == ["1/2", "0/1", "0/1", "0/1"]
    assert A.to_csv().splitlines()[1] == "0/1,0/1,1/2,0/1"
    assert format_fraction(3) == "3/1"


def test_big_numerators_stay_exact():
    big = RationalMatrix(np.array([[2**40, 1], [0, 2**40]], dtype=object), 3)
    sq = big @ big
    assert sq.entry(0, 0) == Fraction(2**80, 9)


def test_partial_isometry_violation_is_reported():
    # hand-build an inconsistent polyhom by bypassing the constructor checks
    from polyhom.morphisms import Polyhom

    bad = Polyhom(M4, M4, DOUBLE, Fraction(1, 2), Fraction(1), Fraction(1))
    with pytest.raises(PartialIsometryViolated):
        verify_partial_isometry(bad)

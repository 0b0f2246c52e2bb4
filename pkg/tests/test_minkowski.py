from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from fuchsq.errors import GeometryError
from fuchsq.exactnum import mat2_det
from fuchsq.minkowski import (
    INF,
    LorentzVector,
    VectorKind,
    apply,
    boundary,
    boundary_to_vector,
    classify,
    geodesic_meet,
    inner,
    involution_halfplane,
    mobius_boundary,
    ray,
    rotation_lorentz,
    strictly_increasing,
    vector_to_boundary,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=20)


def test_boundary_dictionary():
    assert boundary_to_vector(Fraction(0)) == LorentzVector.of(0, -1, 1)
    assert boundary_to_vector(INF) == LorentzVector.of(0, 1, 1)
    assert ray(Fraction(-1)) == LorentzVector.of(-1, 0, 1)
    assert boundary("inf") is INF


@given(small)
def test_boundary_round_trip(r):
    v = boundary_to_vector(r)
    assert inner(v, v) == 0
    assert vector_to_boundary(v) == r
    assert vector_to_boundary(ray(r)) == r
    assert oracles.ray_point(v) == r


def test_classification():
    assert classify(LorentzVector.of(0, 0, 1)) is VectorKind.TIMELIKE_FUTURE
    assert classify(LorentzVector.of(0, 0, -1)) is VectorKind.TIMELIKE_PAST
    assert classify(LorentzVector.of(1, 0, 1)) is VectorKind.LIGHTLIKE_FUTURE
    assert classify(LorentzVector.of(1, 0, 0)) is VectorKind.SPACELIKE
    assert classify(LorentzVector.of(0, 0, 0)) is VectorKind.ZERO


def test_vector_to_boundary_rejects_non_rays():
    with pytest.raises(GeometryError):
        vector_to_boundary(LorentzVector.of(0, 0, 1))


def test_rotation_about_origin_point():
    f = LorentzVector.of(0, 0, 1)
    rot = rotation_lorentz(f)
    assert apply(rot, ray(Fraction(1))) == ray(Fraction(-1))
    assert apply(rot, ray(Fraction(0))) == ray(INF)


def test_rotation_requires_timelike_center():
    with pytest.raises(GeometryError):
        rotation_lorentz(LorentzVector.of(1, 0, 1))


def test_golden_rotation_center():
    f = LorentzVector.of(-1, Fraction(-3, 2), Fraction(5, 2))
    v1 = vector_to_boundary(apply(rotation_lorentz(f), ray(Fraction(-2))))
    assert v1 == Fraction(-1, 7)
    hp = involution_halfplane(f)
    assert hp.a == Fraction(-1, 4) and hp.b_sq == Fraction(3, 16)
    assert hp.matrix == ((1, 1), (-4, -1))


@given(small, small, st.fractions(min_value=0, max_value=20, max_denominator=20).filter(lambda t: t > 0))
def test_rotation_matches_vector_formula(r, s, lam):
    if r == s:
        return
    f = boundary_to_vector(r) + boundary_to_vector(s).scaled(lam)
    rot = rotation_lorentz(f)
    for w in (Fraction(0), Fraction(3, 7), INF):
        x = boundary_to_vector(w)
        assert tuple(apply(rot, x)) == oracles.rotate(f, x)
    assert apply(rot, apply(rot, ray(Fraction(5)))) == ray(Fraction(5))


def test_geodesic_meet_symmetric_case():
    f = geodesic_meet(ray(Fraction(-1)), ray(Fraction(1)), ray(Fraction(0)), ray(INF))
    assert f == LorentzVector.of(0, 0, 1)


def test_geodesic_meet_rejects_disjoint_geodesics():
    with pytest.raises(GeometryError):
        geodesic_meet(ray(Fraction(0)), ray(Fraction(1)), ray(Fraction(2)), ray(Fraction(3)))


def test_mobius_boundary_handles_infinity():
    m = ((Fraction(1), Fraction(2)), (Fraction(1), Fraction(0)))
    assert mobius_boundary(m, INF) == 1
    assert mobius_boundary(m, Fraction(0)) is INF
    assert mat2_det(m) == -2


def test_strict_ordering_with_infinity_on_top():
    assert strictly_increasing(Fraction(-2), Fraction(-1), Fraction(0), INF)
    assert not strictly_increasing(Fraction(0), Fraction(0))
    assert not strictly_increasing(INF, Fraction(0))

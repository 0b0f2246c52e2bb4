from dataclasses import replace
from fractions import Fraction
from types import SimpleNamespace

import pytest

from fuchsq.btree import LatticeClass, group_stabilizes, in_gl2_zp
from fuchsq.certify import (
    NoncommensurabilityCertificate,
    build_family,
    certify_family,
    certify_pair,
    denominator_bound,
)
from fuchsq.construct import validate_blueprint
from fuchsq.errors import CertificateError, InputError
from fuchsq.exactnum import canonical_projective, is_prime, next_prime_3mod4
from fuchsq.fuchsian import fixes_boundary_point

F = Fraction


@pytest.fixture(scope="module")
def pair_family():
    return build_family([0, 1], 2)


def _gens(*pairs):
    return SimpleNamespace(generators=[SimpleNamespace(a=F(a), b_sq=F(b)) for a, b in pairs])


def test_denominator_bound_examples(golden):
    assert denominator_bound(_gens((0, 1), (2, 1), (-3, 1))).m == 1
    assert denominator_bound(_gens(("1/2", "1/4"), ("-5/6", "1/36"))).m == 18
    # the numerator of b^2 = det counts too: at q | 7 the determinant is not a unit
    assert denominator_bound(_gens((0, 7))).m == 7
    assert denominator_bound(golden).m == 25


def test_generators_are_integral_beyond_the_bound(golden):
    m = denominator_bound(golden).m
    for q in (q for q in range(m + 1, 200) if is_prime(q)):
        for g in golden.generators:
            assert in_gl2_zp(canonical_projective(g.proj), q)


def test_family_of_two(pair_family):
    b1, b2 = pair_family
    assert (b1.prime, b2.prime) == (3, 103)
    assert b2.prime > denominator_bound(b1.blueprint).m
    for member in pair_family:
        assert validate_blueprint(member.blueprint).ok
        for i, y in enumerate(member.blueprint.points, start=1):
            assert fixes_boundary_point(member.blueprint.witnesses()[i - 1], y)


def test_golden_family_certificate(pair_family):
    b1, b2 = pair_family
    cert = certify_pair(b1.blueprint, b1.prime, b2.blueprint, b2.prime, ids=(b1.id, b2.id))
    assert cert.prime == 103
    assert cert.verdict_a.stabilizes and cert.verdict_a.witness == LatticeClass.standard(103)
    assert not cert.verdict_b.stabilizes and cert.verdict_b.pair == (1, 2)
    assert cert.validate(b1.blueprint, b2.blueprint)
    again = NoncommensurabilityCertificate.from_json(cert.to_json())
    assert again == cert and again.validate(b1.blueprint, b2.blueprint)


def test_swapped_arguments_are_rejected(pair_family):
    b1, b2 = pair_family
    with pytest.raises(CertificateError, match="does not dominate"):
        certify_pair(b2.blueprint, b2.prime, b1.blueprint, b1.prime)


def test_tampered_certificate_fails(pair_family):
    b1, b2 = pair_family
    cert = certify_pair(b1.blueprint, b1.prime, b2.blueprint, b2.prime)
    wrong_pair = replace(cert, verdict_b=replace(cert.verdict_b, pair=(0, 3)))
    assert not wrong_pair.validate(b1.blueprint, b2.blueprint)
    bad_witness = replace(cert, verdict_a=replace(cert.verdict_a, witness=LatticeClass(103, 1, F(0))))
    assert not bad_witness.validate(b1.blueprint, b2.blueprint)
    assert not cert.validate(b2.blueprint, b1.blueprint)


def test_single_member_family_has_no_certificates():
    fam = build_family([0, 1], 1)
    assert len(fam) == 1 and certify_family(fam) == {}
    with pytest.raises(InputError):
        build_family([0, 1], 0)


def test_steering_prime_breaks_stabilization(pair_family):
    for m in pair_family:
        assert not group_stabilizes(m.blueprint, m.prime).stabilizes
    assert next_prime_3mod4(denominator_bound(pair_family[0].blueprint).m) <= pair_family[1].prime

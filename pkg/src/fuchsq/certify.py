"""Families of pairwise noncommensurable groups and their certificates.

Each new group is steered at a prime p = 3 (mod 4) larger than the
denominator bound of every earlier group.  At that prime every earlier group
fixes a vertex of the tree while the new one does not, which separates their
commensurability classes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .btree import StabilizationVerdict, group_stabilizes, verdict_from_json
from .construct import ConstructionInput, GroupBlueprint, construct_group
from .errors import CertificateError, InputError
from .exactnum import next_prime_3mod4

INVARIANCE_NOTE = (
    "Fixing a vertex of the tree at p is inherited by finite-index subgroups "
    "and preserved under conjugation in PGL2(Q), so groups that disagree on it "
    "are not commensurable."
)


def max_denominator(entries: Iterable) -> int:
    return max((Fraction(e).denominator for e in entries), default=1)


@dataclass(frozen=True)
class DenominatorBound:
    m: int


def denominator_bound(b: GroupBlueprint) -> DenominatorBound:
    """Bound m beyond which every generator lies in GL2(Z_q) up to scaling.

    Covers the denominators of the entries a and a^2 + b^2 of each matrix
    [[a, -(a^2 + b^2)], [1, -a]], and also the numerator of its determinant
    b^2, which has to be a q-adic unit as well.
    """
    m = 1
    for g in b.generators:
        m = max(m, max_denominator([g.a, g.a * g.a + g.b_sq]), g.b_sq.numerator)
    return DenominatorBound(m)


@dataclass(frozen=True)
class FamilyMember:
    id: str
    blueprint: GroupBlueprint
    prime: int


def build_family(points: Sequence, count: int,
                 base_input: ConstructionInput | None = None) -> list[FamilyMember]:
    """Inductively steer each new group at a prime beyond all earlier bounds."""
    if count < 1:
        raise InputError("family size must be positive")
    if base_input is None:
        base_input = ConstructionInput.make(points, 3)
    members: list[FamilyMember] = []
    prime = next_prime_3mod4(base_input.prime - 1)
    bound = 0
    for j in range(1, count + 1):
        if j > 1:
            prime = next_prime_3mod4(max(prime, bound))
        inp = replace(base_input, prime=prime, classes=(prime,) + base_input.classes[1:])
        inp.validate()
        blueprint = construct_group(inp)
        members.append(FamilyMember(f"group_{j}", blueprint, prime))
        bound = max(bound, denominator_bound(blueprint).m)
    return members


@dataclass(frozen=True)
class NoncommensurabilityCertificate:
    prime: int
    group_a: str
    verdict_a: StabilizationVerdict
    group_b: str
    verdict_b: StabilizationVerdict
    note: str = INVARIANCE_NOTE

    def to_json(self) -> dict:
        return {
            "schema": "fuchsian-certificate/1",
            "prime": self.prime,
            "group_a": self.group_a,
            "verdict_a": self.verdict_a.to_json(),
            "group_b": self.group_b,
            "verdict_b": self.verdict_b.to_json(),
            "note": self.note,
        }

    @classmethod
    def from_json(cls, data) -> "NoncommensurabilityCertificate":
        return cls(
            prime=int(data["prime"]),
            group_a=data["group_a"],
            verdict_a=verdict_from_json(data["verdict_a"]),
            group_b=data["group_b"],
            verdict_b=verdict_from_json(data["verdict_b"]),
            note=data.get("note", INVARIANCE_NOTE),
        )

    def validate(self, blueprint_a: GroupBlueprint, blueprint_b: GroupBlueprint) -> bool:
        """Recompute both verdicts and compare with the stored ones."""
        p = self.prime
        if p % 4 != 3:
            return False
        va = group_stabilizes(blueprint_a, p)
        vb = group_stabilizes(blueprint_b, p)
        if not va.stabilizes or vb.stabilizes:
            return False
        stored_witness = self.verdict_a.witness
        if stored_witness is None or not all(stored_witness.is_fixed_by(g.proj)
                                             for g in blueprint_a.generators):
            return False
        return vb.pair == self.verdict_b.pair and va.witness == stored_witness


def certify_pair(bi: GroupBlueprint, pi: int, bj: GroupBlueprint, pj: int,
                 ids: tuple[str, str] = ("group_a", "group_b")) -> NoncommensurabilityCertificate:
    """Separate an earlier group ``bi`` from a later one ``bj`` at the prime ``pj``."""
    bound = denominator_bound(bi).m
    if pj <= bound:
        raise CertificateError(
            f"prime does not dominate denominator bound: {pj} <= {bound}")
    va = group_stabilizes(bi, pj)
    vb = group_stabilizes(bj, pj)
    if not va.stabilizes:
        raise CertificateError(f"{ids[0]} fixes no vertex at p={pj}")
    if vb.stabilizes:
        raise CertificateError(f"{ids[1]} fixes a vertex at p={pj}")
    return NoncommensurabilityCertificate(pj, ids[0], va, ids[1], vb)


def certify_family(members: Sequence[FamilyMember]) -> dict[tuple[int, int], NoncommensurabilityCertificate]:
    certs = {}
    for i, mi in enumerate(members):
        for j in range(i + 1, len(members)):
            mj = members[j]
            certs[(i + 1, j + 1)] = certify_pair(mi.blueprint, mi.prime, mj.blueprint, mj.prime,
                                                 ids=(mi.id, mj.id))
    return certs

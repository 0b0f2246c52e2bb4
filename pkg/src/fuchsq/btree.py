"""The Bruhat-Tits tree of SL2(Q_p), handled through exact rationals.

Vertices are homothety classes of Z_p-lattices in Q_p^2.  Each class has a
unique basis of the form [[p^a, b], [0, 1]] where b is reduced modulo
p^a Z_(p); that pair (a, b) is the canonical key.  Everything the group
theory needs is expressed through valuations, so no p-adic field arithmetic
is implemented.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import ballscan
from .errors import CriterionError, InvariantViolation, SearchExhausted
from .exactnum import (
    Mat2,
    mat2,
    mat2_det,
    mat2_inv,
    mat2_mul,
    mat2_trace,
    qstr,
    rational_sqrt,
    vp,
    vp_half,
    vp_of_sqrt,
)
from .fuchsian import GroupElement, InvolutionData

DEFAULT_BALL_CAP = 5_000_000


def _matrix(g) -> Mat2:
    return g.proj if isinstance(g, GroupElement) else g


def _reduce_mod_power(b: Fraction, p: int, a: int) -> Fraction:
    """Canonical representative of b in Q / p^a Z_(p)."""
    if b == 0:
        return Fraction(0)
    e = max(0, -vp(b, p))
    if a + e <= 0:
        return Fraction(0)
    mod = p ** (a + e)
    scaled = b * p**e  # p-integral
    residue = scaled.numerator * pow(scaled.denominator, -1, mod) % mod
    return Fraction(residue, p**e)


@dataclass(frozen=True)
class LatticeClass:
    """A vertex of the tree at ``p``, keyed by its canonical basis."""

    p: int
    a: int
    b: Fraction

    @property
    def basis(self) -> Mat2:
        return mat2(Fraction(self.p) ** self.a, self.b, 0, 1)

    @classmethod
    def standard(cls, p: int) -> "LatticeClass":
        return cls(p, 0, Fraction(0))

    @classmethod
    def from_basis(cls, m: Mat2, p: int) -> "LatticeClass":
        """Canonicalize the class of the lattice spanned by the columns of ``m``."""
        if mat2_det(m) == 0:
            raise ValueError("basis matrix must be invertible")
        (u0, w0), (u1, w1) = m
        if w1 == 0 or (u1 != 0 and vp(u1, p) < vp(w1, p)):
            u0, w0, u1, w1 = w0, u0, w1, u1
        # clear the bottom-left entry with a Z_(p) column operation
        s = u1 / w1
        u0 = u0 - s * w0
        # rescale the class by 1/w1, then the first column by a unit
        u0, w0 = u0 / w1, w0 / w1
        a = vp(u0, p)
        return cls(p, a, _reduce_mod_power(w0, p, a))

    def act(self, g) -> "LatticeClass":
        return LatticeClass.from_basis(mat2_mul(_matrix(g), self.basis), self.p)

    def is_fixed_by(self, g) -> bool:
        return self.act(g) == self

    def to_json(self) -> dict:
        return {"prime": self.p, "basis": [[qstr(e) for e in row] for row in self.basis]}

    @classmethod
    def from_json(cls, data) -> "LatticeClass":
        rows = data["basis"]
        return cls.from_basis(mat2(*rows[0], *rows[1]), int(data["prime"]))


def in_gl2_zp(m: Mat2, p: int) -> bool:
    if mat2_det(m) == 0:
        raise ValueError("matrix must be invertible")
    entries_ok = all(e == 0 or vp(e, p) >= 0 for row in m for e in row)
    return entries_ok and vp(mat2_det(m), p) == 0


def _min_vp(m: Mat2, p: int) -> int:
    return min(vp(e, p) for row in m for e in row if e != 0)


def distance(l1: LatticeClass, l2: LatticeClass, p: int | None = None) -> int:
    """Tree distance via elementary divisors of basis(l1)^-1 basis(l2)."""
    p = l1.p if p is None else p
    m = mat2_mul(mat2_inv(l1.basis), l2.basis)
    return abs(vp(mat2_det(m), p) - 2 * _min_vp(m, p))


def neighbors(lat: LatticeClass, p: int | None = None) -> list[LatticeClass]:
    """The p + 1 classes of index-p sublattices."""
    p = lat.p if p is None else p
    steps = [mat2(p, j, 0, 1) for j in range(p)] + [mat2(1, 0, 0, p)]
    return [LatticeClass.from_basis(mat2_mul(lat.basis, s), p) for s in steps]


def displacement(g, p: int) -> int:
    """Distance moved by the standard vertex under ``g``."""
    m = _matrix(g)
    return vp(mat2_det(m), p) - 2 * _min_vp(m, p)


def fixes_some_vertex(g, p: int) -> bool:
    """Fixed-vertex criterion: vp(det) even and 2 vp(tr) >= vp(det)."""
    m = _matrix(g)
    vdet = vp(mat2_det(m), p)
    if vdet % 2:
        return False
    tr = mat2_trace(m)
    return tr == 0 or 2 * vp(tr, p) >= vdet


def ball_size(p: int, radius: int) -> int:
    if radius == 0:
        return 1
    return 1 + (p + 1) * (p**radius - 1) // (p - 1)


def prepare(g, p: int, radius: int):
    """Reduce ``g`` to the kernel's integer form, or None if vp(det) is odd."""
    m = _matrix(g)
    s = _min_vp(m, p)
    scale = Fraction(p) ** -s
    m = tuple(tuple(e * scale for e in row) for row in m)
    vdet = vp(mat2_det(m), p)
    if vdet % 2:
        return None
    k = vdet // 2
    mod = p ** (radius + k)
    ints = [e.numerator * pow(e.denominator, -1, mod) % mod for row in m for e in row]
    return (*ints, p**k, mod)


def _vertex(hit, p: int) -> LatticeClass:
    d, kind, c = hit
    q = p**d
    if kind == ballscan.KIND_A:
        basis = mat2(1, 0, c, q)
    else:
        basis = mat2(q, p * c, 0, 1)
    return LatticeClass.from_basis(basis, p)


def ball_common_fixed(gs: Iterable, p: int, radius: int,
                      cap: int = DEFAULT_BALL_CAP) -> LatticeClass | None:
    """Brute-force search of the ball around the standard vertex.

    Returns the first vertex, in breadth-first order, fixed by every element
    of ``gs``, or None when the whole ball has been scanned without success.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if ball_size(p, radius) > cap:
        raise SearchExhausted(f"search exhausted: ball of radius {radius} at p={p} exceeds cap {cap}")
    prepared = []
    for g in gs:
        pg = prepare(g, p, radius)
        if pg is None:
            return None
        prepared.append(pg)
    hit = ballscan.first_fixed(prepared, p, radius)
    return None if hit is None else _vertex(hit, p)


def count_common_fixed(gs: Iterable, p: int, radius: int) -> int:
    prepared = []
    for g in gs:
        pg = prepare(g, p, radius)
        if pg is None:
            return 0
        prepared.append(pg)
    return ballscan.count_fixed(prepared, p, radius)


def ball_vertices_bfs(p: int, radius: int) -> list[LatticeClass]:
    """All classes within ``radius`` of the standard vertex, via neighbors."""
    start = LatticeClass.standard(p)
    seen = {start}
    layer = [start]
    out = [start]
    for _ in range(radius):
        nxt = []
        for lat in layer:
            for nb in neighbors(lat, p):
                if nb not in seen:
                    seen.add(nb)
                    nxt.append(nb)
        out.extend(nxt)
        layer = nxt
    return out


# -- valuation criteria for groups generated by involutions ------------------

def _require_nonsquare_minus_one(p: int) -> None:
    if p % 4 != 3:
        raise CriterionError("criterion requires -1 to be a nonsquare (p = 3 mod 4)")


def pair_condition(gen_m, gen_k, p: int) -> bool:
    """v(a_m - a_k) >= v(b_m) = v(b_k), with v(b) = vp(b^2)/2.

    Exact for stabilization when both b lie in Q_p; see :func:`pair_verdict`.
    """
    _require_nonsquare_minus_one(p)
    vm, vk = vp_of_sqrt(gen_m.b_sq, p), vp_of_sqrt(gen_k.b_sq, p)
    if vm != vk:
        return False
    return vp_half(gen_m.a - gen_k.a, p) >= vm


def cocycle_in_gl2_zp(gen_m, gen_k, p: int) -> bool:
    """Whether C_k^-1 C_m lies in GL2(Z_p), where C_j = [[b_j, a_j], [0, 1]].

    When both b_j are rational the matrix is formed and tested directly;
    otherwise the entries are tested through their squares.
    """
    bm, bk = rational_sqrt(gen_m.b_sq), rational_sqrt(gen_k.b_sq)
    if bm is not None and bk is not None:
        c = mat2(bm / bk, (gen_m.a - gen_k.a) / bk, 0, 1)
        return in_gl2_zp(c, p)
    ratio = gen_m.b_sq / gen_k.b_sq
    if vp(ratio, p) != 0:
        return False
    diff = gen_m.a - gen_k.a
    return diff == 0 or vp(diff * diff / gen_k.b_sq, p) >= 0


def construction_order(n: int) -> list[int]:
    """Generator indices in the order they are built: 1, ..., n, 0."""
    return list(range(1, n + 1)) + [0]


@dataclass(frozen=True)
class StabilizationVerdict:
    prime: int
    stabilizes: bool
    witness: LatticeClass | None = None
    pair: tuple[int, int] | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out: dict = {"prime": self.prime, "verdict": "stabilizes" if self.stabilizes else "no"}
        if self.stabilizes:
            out["witness"] = self.witness.to_json()
        else:
            out["violating_pair"] = list(self.pair)
        out["reason"] = self.reason
        return out


def b_in_qp(gen, p: int) -> bool:
    """Whether b = sqrt(b^2) lies in Q_p (p odd).

    This is the hypothesis under which the fixed set of rho is a single
    vertex and the pair test is exact.
    """
    e = vp(gen.b_sq, p)
    if e % 2:
        return False
    unit = gen.b_sq / Fraction(p) ** e
    residue = unit.numerator * pow(unit.denominator, -1, p) % p
    return pow(residue, (p - 1) // 2, p) == 1


def _pair_reason(gm, gk, p: int) -> str:
    vm, vk = vp_of_sqrt(gm.b_sq, p), vp_of_sqrt(gk.b_sq, p)
    if vm != vk:
        return f"valuation mismatch: v(b_{gm.index}) = {vm}, v(b_{gk.index}) = {vk}"
    return (f"v(a_{gm.index} - a_{gk.index}) = {vp_half(gm.a - gk.a, p)} "
            f"< v(b) = {vm}")


def _elementwise_reason(gm, gk, p: int) -> str | None:
    """Why <rho_m, rho_k> fixes no vertex, by the single-element criterion."""
    for g in (gm, gk):
        if not fixes_some_vertex(g.proj, p):
            detail = ""
            if not vp_of_sqrt(g.b_sq, p).is_integer:
                detail = f" (v(b_{g.index}) = {vp_of_sqrt(g.b_sq, p)})"
            return f"rho_{g.index} fixes no vertex{detail}"
    if not fixes_some_vertex(pair_product(gm, gk), p):
        return f"rho_{gm.index} rho_{gk.index} fixes no vertex"
    return None


def pair_verdict(gm, gk, p: int) -> str | None:
    """None if rho_m and rho_k fix a common vertex, else the reason they do not.

    When both b lie in Q_p the valuation test decides.  Otherwise a fixed set
    may be a whole line, and the pair is decided by the elementwise criterion:
    two elliptic tree automorphisms share a fixed vertex iff their product
    fixes a vertex.
    """
    if b_in_qp(gm, p) and b_in_qp(gk, p):
        return None if pair_condition(gm, gk, p) else _pair_reason(gm, gk, p)
    reason = _elementwise_reason(gm, gk, p)
    if reason is not None and not pair_condition(gm, gk, p):
        reason = f"{_pair_reason(gm, gk, p)}; {reason}"
    return reason


def generator_ball_radius(gens: Sequence, p: int) -> int:
    return max((displacement(g, p) for g in gens), default=0)


def group_stabilizes(blueprint, p: int) -> StabilizationVerdict:
    """Decide whether the group fixes a vertex of the tree at ``p``.

    Pairs are tested in construction order and the first failing pair is
    reported.  If every pair shares a fixed vertex, so does the whole group
    (fixed sets are subtrees, which have the Helly property), and the nearest
    common vertex lies within the largest generator displacement of the
    standard vertex; the ball search produces it as a witness.
    """
    _require_nonsquare_minus_one(p)
    gens = {g.index: g for g in blueprint.generators}
    order = [j for j in construction_order(len(gens) - 1) if j in gens]
    for pos, m in enumerate(order):
        for k in order[pos + 1:]:
            reason = pair_verdict(gens[m], gens[k], p)
            if reason is not None:
                return StabilizationVerdict(p, False, pair=(m, k), reason=reason)
    for j in order:
        # reachable only with a single generator
        if not fixes_some_vertex(gens[j].proj, p):
            return StabilizationVerdict(p, False, pair=(j, j),
                                        reason=f"rho_{j} fixes no vertex")
    mats = [gens[j].proj for j in order]
    radius = generator_ball_radius(mats, p)
    witness = ball_common_fixed(mats, p, radius)
    if witness is None or not all(witness.is_fixed_by(m) for m in mats):
        raise InvariantViolation(
            f"every pair fixes a vertex at p={p} but no common fixed vertex within radius {radius}")
    return StabilizationVerdict(p, True, witness=witness,
                                reason="every generator pair fixes a common vertex")


def verdict_from_json(data) -> StabilizationVerdict:
    p = int(data["prime"])
    if data["verdict"] == "stabilizes":
        return StabilizationVerdict(p, True, witness=LatticeClass.from_json(data["witness"]),
                                    reason=data.get("reason", ""))
    m, k = data["violating_pair"]
    return StabilizationVerdict(p, False, pair=(int(m), int(k)), reason=data.get("reason", ""))


def pair_product(gm: InvolutionData, gk: InvolutionData) -> GroupElement:
    """rho_m rho_k as a group element."""
    return GroupElement.generator(gm) * GroupElement.generator(gk)

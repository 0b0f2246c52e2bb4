"""Exact geometry of Minkowski space R^{2,1} over the rationals.

Coordinates are taken in a Lorentz orthonormal basis (e1, e2, e0) and the
form is ``<u, v> = u1 v1 + u2 v2 - u0 v0``.  Boundary points of the hyperbolic
plane are identified with future light-like rays through the dictionary

    r   ->  (2r, r^2 - 1, r^2 + 1)
    inf ->  (0, 1, 1)

which is the one under which rotation by pi about a time-like vector agrees
with the Mobius action of the matrix from :func:`involution_halfplane`.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import NamedTuple, Union

from .errors import GeometryError
from .exactnum import (
    Mat2,
    Mat3,
    Q,
    RationalLike,
    canonical_projective,
    mat2_det,
    primitive_integer_vector,
    qstr,
)


class _Infinity:
    """The boundary point at infinity of the upper half plane."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
BoundaryPoint = Union[Fraction, _Infinity]


def boundary(r) -> BoundaryPoint:
    """Parse a boundary point: a rational, or ``"inf"``/INF."""
    if r is INF:
        return INF
    if isinstance(r, str) and r.strip().lower() in ("inf", "infinity", "oo", "∞"):
        return INF
    return Q(r)


def boundary_str(r: BoundaryPoint) -> str:
    return "inf" if r is INF else qstr(r)


class LorentzVector(NamedTuple):
    x1: Fraction
    x2: Fraction
    x0: Fraction

    @classmethod
    def of(cls, x1: RationalLike, x2: RationalLike, x0: RationalLike) -> "LorentzVector":
        return cls(Q(x1), Q(x2), Q(x0))

    def __add__(self, other):  # type: ignore[override]
        return LorentzVector(self.x1 + other.x1, self.x2 + other.x2, self.x0 + other.x0)

    def __sub__(self, other):
        return LorentzVector(self.x1 - other.x1, self.x2 - other.x2, self.x0 - other.x0)

    def __neg__(self):
        return LorentzVector(-self.x1, -self.x2, -self.x0)

    def scaled(self, s: RationalLike) -> "LorentzVector":
        s = Q(s)
        return LorentzVector(s * self.x1, s * self.x2, s * self.x0)

    def to_json(self) -> list[str]:
        return [qstr(c) for c in self]

    @classmethod
    def from_json(cls, data) -> "LorentzVector":
        if len(data) != 3:
            raise ValueError("a Lorentz vector has three coordinates")
        return cls.of(*data)


E1 = LorentzVector.of(1, 0, 0)
E2 = LorentzVector.of(0, 1, 0)
E0 = LorentzVector.of(0, 0, 1)
FORM = (1, 1, -1)


class VectorKind(enum.Enum):
    LIGHTLIKE_FUTURE = "LightlikeFuture"
    TIMELIKE_FUTURE = "TimelikeFuture"
    SPACELIKE = "Spacelike"
    LIGHTLIKE_PAST = "LightlikePast"
    TIMELIKE_PAST = "TimelikePast"
    ZERO = "Zero"


def inner(u: LorentzVector, v: LorentzVector) -> Fraction:
    return u[0] * v[0] + u[1] * v[1] - u[2] * v[2]


def classify(v: LorentzVector) -> VectorKind:
    q = inner(v, v)
    if q > 0:
        return VectorKind.SPACELIKE
    if q == 0:
        if v.x0 > 0:
            return VectorKind.LIGHTLIKE_FUTURE
        if v.x0 < 0:
            return VectorKind.LIGHTLIKE_PAST
        # a light-like vector with x0 = 0 is the zero vector
        return VectorKind.ZERO
    return VectorKind.TIMELIKE_FUTURE if v.x0 > 0 else VectorKind.TIMELIKE_PAST


def boundary_to_vector(r: BoundaryPoint) -> LorentzVector:
    if r is INF:
        return LorentzVector.of(0, 1, 1)
    r = Q(r)
    return LorentzVector(2 * r, r * r - 1, r * r + 1)


def ray(r: BoundaryPoint) -> LorentzVector:
    """Primitive integral representative of the light-like ray of ``r``."""
    return LorentzVector.of(*primitive_integer_vector(boundary_to_vector(boundary(r))))


def vector_to_boundary(v: LorentzVector) -> BoundaryPoint:
    if classify(v) is not VectorKind.LIGHTLIKE_FUTURE:
        raise GeometryError("not a future boundary ray")
    if v.x2 == v.x0:
        return INF
    return -v.x1 / (v.x2 - v.x0)


def vector_to_symmetric(v: LorentzVector) -> Mat2:
    """The symmetric matrix [[<v,e2+e0>, <v,e1>], [<v,e1>, <v,-e2+e0>]]."""
    top = inner(v, E2 + E0)
    off = inner(v, E1)
    bottom = inner(v, E0 - E2)
    return ((top, off), (off, bottom))


def rotation_lorentz(f: LorentzVector) -> Mat3:
    """Rotation by pi about the time-like vector ``f``: x -> (2<x,f>/<f,f>) f - x."""
    if classify(f) is not VectorKind.TIMELIKE_FUTURE:
        raise GeometryError("rotation center must be time-like")
    ff = inner(f, f)
    jf = tuple(s * c for s, c in zip(FORM, f))
    return tuple(
        tuple(2 * f[i] * jf[j] / ff - (1 if i == j else 0) for j in range(3))
        for i in range(3)
    )


def apply(m: Mat3, v: LorentzVector) -> LorentzVector:
    return LorentzVector(*(m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] for i in range(3)))


class HalfPlaneInvolution(NamedTuple):
    a: Fraction
    b_sq: Fraction
    matrix: Mat2


def involution_halfplane(f: LorentzVector) -> HalfPlaneInvolution:
    """Half-plane data of the rotation by pi about ``f``.

    The fixed point is a + b i with a = -<f,e1>/<f,e2+e0> and
    b^2 = |<f,f>| / <f,e2+e0>^2; the matrix [[a, -(a^2+b^2)], [1, -a]] is
    returned in canonical projective form.
    """
    if classify(f) is not VectorKind.TIMELIKE_FUTURE:
        raise GeometryError("rotation center must be time-like")
    s = inner(f, E2 + E0)
    a = -inner(f, E1) / s
    b_sq = abs(inner(f, f)) / (s * s)
    m = ((a, -(b_sq + a * a)), (Fraction(1), -a))
    return HalfPlaneInvolution(a, b_sq, canonical_projective(m))


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def geodesic_meet(x: LorentzVector, y: LorentzVector,
                  u: LorentzVector, w: LorentzVector) -> LorentzVector:
    """Intersection point of the geodesics with endpoints {x, y} and {u, w}.

    Returned as the primitive integral time-like future vector spanning
    span{x, y} ∩ span{u, w}.
    """
    d = _cross(_cross(x, y), _cross(u, w))
    if all(c == 0 for c in d):
        raise GeometryError("degenerate intersection")
    v = LorentzVector(*(Q(c) for c in d))
    if inner(v, v) >= 0:
        raise GeometryError("geodesics do not meet")
    if v.x0 < 0:
        v = -v
    return LorentzVector.of(*primitive_integer_vector(v))


def mobius_boundary(m: Mat2, r: BoundaryPoint) -> BoundaryPoint:
    """Fractional linear action of ``m`` on Q ∪ {inf}."""
    if mat2_det(m) == 0:
        raise ValueError("singular matrix has no Mobius action")
    (a, b), (c, d) = m
    if r is INF:
        return INF if c == 0 else a / c
    num = a * r + b
    den = c * r + d
    if den == 0:
        return INF
    return num / den


def boundary_lt(r: BoundaryPoint, s: BoundaryPoint) -> bool:
    """Order on the boundary minus the point at infinity, with inf on top."""
    if r is INF:
        return False
    if s is INF:
        return True
    return r < s


def strictly_increasing(*points: BoundaryPoint) -> bool:
    return all(boundary_lt(a, b) for a, b in zip(points, points[1:]))

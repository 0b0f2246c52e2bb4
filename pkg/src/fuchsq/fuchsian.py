"""Group elements of the constructed groups, in both models.

A group is generated by involutions rho_0..rho_n and is treated abstractly as
the free product of n+1 copies of Z/2.  Elements carry their word, a
canonical projective 2x2 matrix, the 3x3 Lorentz matrix and the square class
of the determinant (a square-free integer label).
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import FuchsianError, InvariantViolation
from .exactnum import (
    Mat2,
    Mat3,
    canonical_projective,
    mat2_det,
    mat2_is_scalar,
    mat2_mul,
    mat2_trace,
    mat3_identity,
    mat3_mul,
    rational_sqrt,
    same_square_class,
    squarefree_mul,
)
from .minkowski import (
    INF,
    BoundaryPoint,
    LorentzVector,
    apply,
    boundary_to_vector,
    involution_halfplane,
    rotation_lorentz,
)


@dataclass(frozen=True)
class InvolutionData:
    """One generator rho_j: rotation by pi about the time-like vector ``f``."""

    index: int
    f: LorentzVector
    lorentz: Mat3
    proj: Mat2
    a: Fraction
    b_sq: Fraction
    det_class: int

    @classmethod
    def from_center(cls, index: int, f: LorentzVector, det_class: int) -> "InvolutionData":
        hp = involution_halfplane(f)
        return cls(index, f, rotation_lorentz(f), hp.matrix, hp.a, hp.b_sq, det_class)

    def class_is_consistent(self) -> bool:
        return rational_sqrt(self.b_sq / self.det_class) is not None


def reduce_word(word: Sequence[int]) -> tuple[int, ...]:
    """Free-product normal form: cancel adjacent repeated involutions."""
    out: list[int] = []
    for g in word:
        if out and out[-1] == g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class GroupElement:
    word: tuple[int, ...]
    proj: Mat2
    lorentz: Mat3
    det_class: int

    @classmethod
    def identity(cls) -> "GroupElement":
        one = Fraction(1)
        zero = Fraction(0)
        return cls((), ((one, zero), (zero, one)), mat3_identity(), 1)

    @classmethod
    def generator(cls, gen: InvolutionData) -> "GroupElement":
        return cls((gen.index,), gen.proj, gen.lorentz, gen.det_class)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(
        reduce_word(g.word + h.word),
        canonical_projective(mat2_mul(g.proj, h.proj)),
        mat3_mul(g.lorentz, h.lorentz),
        squarefree_mul(g.det_class, h.det_class),
    )


def word_element(generators: Sequence[InvolutionData], word: Sequence[int]) -> GroupElement:
    by_index = {gen.index: gen for gen in generators}
    out = GroupElement.identity()
    for j in word:
        out = multiply(out, GroupElement.generator(by_index[j]))
    return out


class ElementType(enum.Enum):
    IDENTITY = "Identity"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"


def trace_discriminant(m: Mat2) -> Fraction:
    """tr^2 - 4 det, whose sign is projectively invariant when det > 0."""
    return mat2_trace(m) ** 2 - 4 * mat2_det(m)


def classify_matrix(m: Mat2) -> ElementType:
    if mat2_det(m) <= 0:
        raise InvariantViolation("representative has nonpositive determinant")
    if mat2_is_scalar(m):
        return ElementType.IDENTITY
    disc = trace_discriminant(m)
    if disc > 0:
        return ElementType.HYPERBOLIC
    if disc == 0:
        return ElementType.PARABOLIC
    return ElementType.ELLIPTIC


def classify_element(g: GroupElement | Mat2) -> ElementType:
    return classify_matrix(g.proj if isinstance(g, GroupElement) else g)


def fixes_boundary_point(g: GroupElement | Mat2, r: BoundaryPoint) -> bool:
    """Eigenvector test for the homogeneous vector of ``r``."""
    (a, b), (c, d) = g.proj if isinstance(g, GroupElement) else g
    if r is INF:
        return c == 0
    # (a r + b, c r + d) parallel to (r, 1)
    return (a * r + b) - (c * r + d) * r == 0


def fixes_light_ray(g: GroupElement, r: BoundaryPoint) -> bool:
    """Lorentz-side check: the image of the ray of ``r`` is parallel to it."""
    v = boundary_to_vector(r)
    w = apply(g.lorentz, v)
    return all(w[i] * v[j] == w[j] * v[i] for i in range(3) for j in range(i + 1, 3))


def hyperbolic_witness(blueprint, i: int) -> GroupElement:
    """The element rho_i rho_{i+1}; its axis has endpoints x_i and y_i."""
    n = blueprint.n
    if not 1 <= i <= n - 1:
        raise ValueError(f"witness index must lie in 1..{n - 1}")
    return word_element(blueprint.generators, (i, i + 1))


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple[tuple[int, ...], ...]
    cusp_word: tuple[int, ...]
    signature: str

    @classmethod
    def of(cls, n: int) -> "Presentation":
        return cls(
            generator_count=n + 1,
            relators=tuple((j, j) for j in range(n + 1)),
            cusp_word=tuple(range(n, -1, -1)),
            signature="(0; " + ",".join(["2"] * (n + 1)) + "; 1; 0)",
        )


@dataclass(frozen=True)
class KernelData:
    """Finite-index kernel of the determinant square-class map."""

    index: int
    image: tuple[int, ...]
    transversal: tuple[tuple[int, ...], ...]
    generators: tuple[GroupElement, ...] = field(repr=False)


def psl_kernel(blueprint) -> KernelData:
    """Reidemeister-Schreier generators of the kernel of Gamma -> Q^x/(Q^x)^2.

    The image is enumerated breadth first with generators taken in
    construction order 1, ..., n, 0; each new image element gets the word
    that first reached it as coset representative.
    """
    n = len(blueprint.generators) - 1
    gens = sorted(blueprint.generators, key=lambda g: g.index if g.index else n + 1)
    reps: dict[int, tuple[int, ...]] = {1: ()}

    def known(label: int) -> int | None:
        # labels need not be square-free, so classes are matched, not keys
        return next((c for c in reps if same_square_class(c, label)), None)

    queue = deque([1])
    while queue:
        c = queue.popleft()
        for gen in gens:
            nxt = squarefree_mul(c, gen.det_class)
            if known(nxt) is None:
                reps[nxt] = reps[c] + (gen.index,)
                queue.append(nxt)

    seen: set[tuple[int, ...]] = set()
    kernel: list[GroupElement] = []
    for c, t in reps.items():
        for gen in gens:
            target = reps[known(squarefree_mul(c, gen.det_class))]
            word = reduce_word(t + (gen.index,) + tuple(reversed(target)))
            if not word or word in seen:
                continue
            seen.add(word)
            elem = word_element(gens, word)
            if elem.det_class != 1:
                raise InvariantViolation("Schreier generator outside the kernel")
            kernel.append(elem)
    return KernelData(
        index=len(reps),
        image=tuple(reps),
        transversal=tuple(reps.values()),
        generators=tuple(kernel),
    )


class NoWitness(FuchsianError, LookupError):
    pass


@dataclass(frozen=True)
class NotCuspCertificate:
    """A hyperbolic element fixing ``point``.

    A boundary point fixed by a hyperbolic element of a Fuchsian group is not
    a cusp of that group; that fact is cited, not re-proved here.
    """

    point: Fraction
    witness: GroupElement

    def validate(self) -> bool:
        return (
            classify_element(self.witness) is ElementType.HYPERBOLIC
            and fixes_boundary_point(self.witness, self.point)
        )


def not_cusp_certificate(blueprint, y) -> NotCuspCertificate:
    y = Fraction(y)
    for i, yi in enumerate(blueprint.points, start=1):
        if yi == y:
            return NotCuspCertificate(y, hyperbolic_witness(blueprint, i))
    raise NoWitness("no witness constructed for this point")

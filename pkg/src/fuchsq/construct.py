"""Build an ideal polygon and its side-pairing involutions over Q.

Given rational boundary points y_1 < ... < y_{n-1}, the pipeline chooses the
rotation centers f_1..f_{n-1} on the geodesics through (x_{i-1}, y_{i-1}),
places f_n where the last such geodesic meets the vertical geodesic over
v_{n-1}, and closes the polygon with f_0 so that rho_n ... rho_1 rho_0 is
parabolic at infinity.  Each f_i with i < n is steered so that |<f_i,f_i>|
lies in a prescribed rational square class; f_1 uses the class of the prime p.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import GeometryError, InputError, InvariantViolation, SteeringError
from .exactnum import (
    Q,
    RationalLike,
    det3_columns,
    is_prime,
    is_square_free,
    mat2_is_scalar,
    mat2_mul,
    mat3_identity,
    mat3_mul,
    primitive_integer_vector,
    square_class_label,
    vp,
)
from .fuchsian import (
    ElementType,
    GroupElement,
    InvolutionData,
    Presentation,
    classify_matrix,
    fixes_boundary_point,
    fixes_light_ray,
    hyperbolic_witness,
    trace_discriminant,
    word_element,
)
from .minkowski import (
    INF,
    BoundaryPoint,
    LorentzVector,
    VectorKind,
    apply,
    classify,
    geodesic_meet,
    inner,
    involution_halfplane,
    ray,
    rotation_lorentz,
    strictly_increasing,
    vector_to_boundary,
)

log = logging.getLogger(__name__)

DEFAULT_RETRY_CAP = 64


@dataclass(frozen=True)
class ConstructionInput:
    points: tuple[Fraction, ...]
    v0: Fraction
    prime: int
    classes: tuple[int, ...]
    x1: Fraction
    t_init: Fraction = Fraction(1)
    retry_cap: int = DEFAULT_RETRY_CAP

    @property
    def n(self) -> int:
        return len(self.points) + 1

    @classmethod
    def make(
        cls,
        points: Sequence[RationalLike],
        prime: int = 3,
        *,
        v0: RationalLike | None = None,
        x1: RationalLike | None = None,
        classes: Sequence[int] | None = None,
        t_init: RationalLike = 1,
        retry_cap: int = DEFAULT_RETRY_CAP,
    ) -> "ConstructionInput":
        """Apply defaults, pad a single point, and validate."""
        pts = [Q(y) for y in points]
        if not pts:
            raise InputError("at least one boundary point is required")
        if len(set(pts)) != len(pts):
            raise InputError("duplicate points in Y")
        pts.sort()
        if len(pts) == 1:
            pts.append(pts[0] + 1)
        v0 = pts[0] - 1 if v0 is None else Q(v0)
        x1 = (v0 + pts[0]) / 2 if x1 is None else Q(x1)
        if classes is None:
            classes = [prime] + [1] * (len(pts) - 1)
        elif len(classes) == len(pts) - 1:
            classes = [prime] + list(classes)
        inp = cls(tuple(pts), v0, int(prime), tuple(int(c) for c in classes), x1,
                  Q(t_init), int(retry_cap))
        inp.validate()
        return inp

    def validate(self) -> None:
        p = self.prime
        if len(self.points) < 2:
            raise InputError("Y must contain at least two points")
        if not strictly_increasing(*self.points):
            raise InputError("Y must be strictly increasing")
        if not self.v0 < self.points[0]:
            raise InputError("v0 must be smaller than every point of Y")
        if not self.v0 < self.x1 < self.points[0]:
            raise InputError("x1 must satisfy v0 < x1 < y1")
        if not (is_prime(p) and p % 4 == 3):
            raise InputError(f"prime {p} is not a prime congruent to 3 mod 4")
        if len(self.classes) != len(self.points):
            raise InputError(f"expected {len(self.points)} square classes, got {len(self.classes)}")
        if self.classes[0] != p:
            raise InputError("the first square class must be the prime itself")
        for c in self.classes[1:]:
            if c < 1 or not is_square_free(c):
                raise InputError(f"square class {c} is not a square-free positive integer")
            if c % p == 0:
                raise InputError(f"square class {c} is divisible by the prime {p}")
        if self.t_init <= 0:
            raise InputError("t_init must be positive")
        if self.retry_cap < 1:
            raise InputError("retry_cap must be positive")


@dataclass(frozen=True)
class StepRecord:
    """Choices made at step i (1 <= i <= n-1)."""

    i: int
    x: Fraction
    x_vec: LorentzVector
    v: Fraction
    v_vec: LorentzVector
    f: LorentzVector
    lam: Fraction
    t: Fraction
    abs_norm: Fraction
    attempts: int = 1


@dataclass(frozen=True)
class ConstructionTrace:
    steps: tuple[StepRecord, ...]
    f_n: LorentzVector
    v_n_vec: LorentzVector
    f_0: LorentzVector


@dataclass(frozen=True)
class GroupBlueprint:
    input: ConstructionInput
    generators: tuple[InvolutionData, ...]
    vertices: tuple[BoundaryPoint, ...]
    vertex_vectors: tuple[LorentzVector, ...]
    trace: ConstructionTrace
    presentation: Presentation = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.generators) - 1

    @property
    def points(self) -> tuple[Fraction, ...]:
        return self.input.points

    @property
    def prime(self) -> int:
        return self.input.prime

    def generator(self, j: int) -> InvolutionData:
        return self.generators[j]

    def witnesses(self) -> list[GroupElement]:
        return [hyperbolic_witness(self, i) for i in range(1, self.n)]


def pick_on_geodesic(x: LorentzVector, y: LorentzVector, n_class: int,
                     t: RationalLike) -> tuple[LorentzVector, Fraction]:
    """Point f = x + lam y on the geodesic (x, y) with <f,f> = -n_class t^2."""
    t = Q(t)
    xy = inner(x, y)
    if xy >= 0:
        raise GeometryError("endpoints must be distinct future light-like rays")
    lam = n_class * t * t / (-2 * xy)
    return x + y.scaled(lam), lam


def _to_boundary(v: LorentzVector) -> BoundaryPoint:
    return vector_to_boundary(v)


def step1_parameter(n_class: int, t_init: Fraction) -> Fraction:
    """t_init halved until n_class t^2 <= 4 t_init^2.

    Any t works at step 1; this keeps f_1 at a distance from y_1 that does
    not grow with the prime, so later steps need few doublings.
    """
    t = t_init
    while n_class * t * t > 4 * t_init * t_init:
        t /= 2
    return t


def step1(inp: ConstructionInput):
    x_vec, y_vec = ray(inp.x1), ray(inp.points[0])
    t = step1_parameter(inp.classes[0], inp.t_init)
    f, lam = pick_on_geodesic(x_vec, y_vec, inp.classes[0], t)
    v_vec = apply(rotation_lorentz(f), ray(inp.v0))
    v = _to_boundary(v_vec)
    if not strictly_increasing(inp.v0, inp.x1, v, inp.points[0]):
        raise InvariantViolation(f"step 1 ordering failed: v1 = {v}")
    return StepRecord(1, inp.x1, x_vec, v, v_vec, f, lam, t, -inner(f, f))


def step_ordering_holds(v_prev, x_i, y_prev, v_i, y_i) -> bool:
    return strictly_increasing(v_prev, x_i, y_prev, v_i, y_i)


def _height_bits(v: LorentzVector) -> int:
    return max(abs(c).bit_length() for c in primitive_integer_vector(v))


def steering_limit(x: LorentzVector, y: LorentzVector, v_prev: LorentzVector,
                   inp: ConstructionInput) -> int:
    """Doublings allowed at a step: retry_cap past the scale set by the heights.

    The rays are primitive integral vectors, so f = x + lam y only moves off
    x once t is about the size of their entries, and it has to come within
    roughly the squared height of v_{i-1} of y before the ordering can hold.
    Those doublings are not counted against the cap.
    """
    return inp.retry_cap + _height_bits(x) + _height_bits(y) + _height_bits(v_prev)


def step_i(i: int, prev: StepRecord, inp: ConstructionInput) -> StepRecord:
    """Steer f_i towards y_{i-1}: the first t = t_init 2^k with the ordering.

    Moving f along the axis by s composes the half-turn with a translation by
    2s, which pushes x_i and v_i monotonically towards y_{i-1}.  Once the
    ordering holds it keeps holding, so k is found by galloping and bisection
    and agrees with the plain doubling loop.
    """
    y_prev, y_i = inp.points[i - 2], inp.points[i - 1]
    x_ray, y_ray, yi_ray = ray(prev.x), ray(y_prev), ray(y_i)
    limit = steering_limit(x_ray, y_ray, prev.v_vec, inp)
    cache: dict[int, tuple] = {}

    def attempt(k: int):
        if k not in cache:
            t = inp.t_init * 2**k
            f, lam = pick_on_geodesic(x_ray, y_ray, inp.classes[i - 1], t)
            rot = rotation_lorentz(f)
            x_i = _to_boundary(apply(rot, yi_ray))
            v_vec = apply(rot, prev.v_vec)
            v_i = _to_boundary(v_vec)
            ok = step_ordering_holds(prev.v, x_i, y_prev, v_i, y_i)
            cache[k] = (ok, t, f, lam, x_i, v_i, v_vec)
        return cache[k]

    lo, hi = -1, 0
    while not attempt(hi)[0]:
        lo, hi = hi, 2 * hi + 1
        if hi >= limit:
            hi = limit - 1
            if lo >= hi or not attempt(hi)[0]:
                raise SteeringError(
                    f"steering failed at step {i}: no admissible t within {inp.retry_cap} "
                    f"doublings past the height scale from t_init={inp.t_init}"
                )
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if attempt(mid)[0]:
            hi = mid
        else:
            lo = mid
    _, t, f, lam, x_i, v_i, v_vec = attempt(hi)
    log.debug("step %d accepted t=%s after %d doublings", i, t, hi)
    return StepRecord(i, x_i, ray(x_i), v_i, v_vec, f, lam, t, -inner(f, f), hi + 1)


def step_n(last: StepRecord, inp: ConstructionInput) -> tuple[LorentzVector, LorentzVector]:
    y_last = inp.points[-1]
    try:
        f_n = geodesic_meet(ray(last.x), ray(y_last), ray(last.v), ray(INF))
    except GeometryError as exc:
        raise InvariantViolation(f"step n: {exc}") from exc
    v_n_vec = apply(rotation_lorentz(f_n), last.v_vec)
    if _to_boundary(v_n_vec) is not INF:
        raise InvariantViolation("rho_n does not send v_{n-1} to infinity")
    return f_n, v_n_vec


def last_step(v_n_vec: LorentzVector, v0_vec: LorentzVector) -> LorentzVector:
    """f_0 = V + v_0, so rotation about f_0 swaps V and v_0 exactly."""
    f0 = v_n_vec + v0_vec
    if apply(rotation_lorentz(f0), v_n_vec) != v0_vec:
        raise InvariantViolation("rotation about f_0 does not map V to v_0")
    return f0


def construct_group(inp: ConstructionInput) -> GroupBlueprint:
    n = inp.n
    steps = [step1(inp)]
    for i in range(2, n):
        steps.append(step_i(i, steps[-1], inp))
    f_n, v_n_vec = step_n(steps[-1], inp)
    v0_vec = ray(inp.v0)
    f_0 = last_step(v_n_vec, v0_vec)

    centers = [f_0] + [s.f for s in steps] + [f_n]
    generators = []
    for j, f in enumerate(centers):
        if 1 <= j <= n - 1:
            det_class = inp.classes[j - 1]
        else:
            det_class = square_class_label(involution_halfplane(f).b_sq)
        generators.append(InvolutionData.from_center(j, f, det_class))

    trace = ConstructionTrace(tuple(steps), f_n, v_n_vec, f_0)
    blueprint = GroupBlueprint(
        input=inp,
        generators=tuple(generators),
        vertices=(inp.v0,) + tuple(s.v for s in steps) + (INF,),
        vertex_vectors=(v0_vec,) + tuple(s.v_vec for s in steps) + (v_n_vec,),
        trace=trace,
        presentation=Presentation.of(n),
    )
    report = validate_blueprint(blueprint)
    if not report.ok:
        raise InvariantViolation("constructed blueprint failed validation: "
                                 + "; ".join(report.failures()))
    return blueprint


# -- validation ---------------------------------------------------------------

@dataclass
class ValidationReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append((name, bool(passed), detail))

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def failures(self) -> list[str]:
        return [f"{name}: {detail}" if detail else name
                for name, passed, detail in self.checks if not passed]


def _positive_combination(f: LorentzVector, u: LorentzVector, w: LorentzVector) -> bool:
    """True iff f = alpha u + beta w with alpha, beta > 0."""
    # solve on the two coordinates with a nonzero 2x2 minor, then check the third
    for i, j in ((0, 1), (0, 2), (1, 2)):
        det = u[i] * w[j] - u[j] * w[i]
        if det != 0:
            alpha = (f[i] * w[j] - f[j] * w[i]) / det
            beta = (u[i] * f[j] - u[j] * f[i]) / det
            k = 3 - i - j
            return alpha > 0 and beta > 0 and alpha * u[k] + beta * w[k] == f[k]
    return False


def _safe(check, *args) -> bool:
    try:
        return bool(check(*args))
    except (GeometryError, ZeroDivisionError, InvariantViolation):
        return False


def validate_blueprint(b: GroupBlueprint) -> ValidationReport:
    """Check the hypotheses of Poincare's polygon theorem and the witnesses."""
    rep = ValidationReport()
    inp = b.input
    n = inp.n
    gens = b.generators
    steps = b.trace.steps

    rep.add("generator count", len(gens) == n + 1 and [g.index for g in gens] == list(range(n + 1)),
            f"{len(gens)} generators for n={n}")
    rep.add("vertex count", len(b.vertices) == n + 1 and b.vertices[-1] is INF)

    for g in gens:
        ok = _safe(lambda: classify(g.f) is VectorKind.TIMELIKE_FUTURE
                   and InvolutionData.from_center(g.index, g.f, g.det_class) == g)
        rep.add(f"generator {g.index} consistent with its center", ok)
        rep.add(f"generator {g.index} det class", g.det_class >= 1 and _safe(g.class_is_consistent))
        rep.add(f"rho_{g.index}^2 = 1", mat2_is_scalar(mat2_mul(g.proj, g.proj))
                and mat3_mul(g.lorentz, g.lorentz) == mat3_identity())

    # step orderings
    if steps:
        s1 = steps[0]
        rep.add("step 1 ordering", strictly_increasing(inp.v0, s1.x, s1.v, inp.points[0]))
        for s in steps[1:]:
            prev = steps[s.i - 2]
            rep.add(f"step {s.i} ordering", step_ordering_holds(
                prev.v, s.x, inp.points[s.i - 2], s.v, inp.points[s.i - 1]))
        for s in steps:
            x_ray = ray(s.x if s.i == 1 else steps[s.i - 2].x)
            y_ray = ray(inp.points[s.i - 1] if s.i == 1 else inp.points[s.i - 2])
            rep.add(f"f_{s.i} on its steering geodesic", det3_columns(x_ray, y_ray, s.f) == 0
                    and gens[s.i].f == s.f)

    # side pairings and edge incidences
    for j in range(1, n + 1):
        g = gens[j]
        u, w = b.vertex_vectors[j - 1], b.vertex_vectors[j]
        rep.add(f"f_{j} on edge v_{j - 1} v_{j}", _safe(_positive_combination, g.f, u, w))
        rep.add(f"rho_{j} pairs v_{j - 1} with v_{j}", apply(g.lorentz, u) == w)
    rep.add("f_0 on edge v_n v_0",
            _safe(_positive_combination, gens[0].f, b.vertex_vectors[-1], b.vertex_vectors[0]))
    rep.add("rho_0 pairs v_n with v_0",
            apply(gens[0].lorentz, b.vertex_vectors[-1]) == b.vertex_vectors[0])

    # parabolic cusp word rho_n ... rho_1 rho_0
    cusp = word_element(gens, b.presentation.cusp_word)
    para = _safe(lambda: classify_matrix(cusp.proj) is ElementType.PARABOLIC)
    rep.add("cusp word parabolic", para and trace_discriminant(cusp.proj) == 0,
            f"tr^2-4det = {trace_discriminant(cusp.proj)}")
    rep.add("cusp word fixes V", apply(cusp.lorentz, b.vertex_vectors[-1]) == b.vertex_vectors[-1])
    rep.add("cusp word fixes infinity", fixes_boundary_point(cusp, INF))

    # hyperbolic witnesses
    for i in range(1, n):
        h = hyperbolic_witness(b, i)
        x_i, y_i = steps[i - 1].x, inp.points[i - 1]
        hyp = _safe(lambda: classify_matrix(h.proj) is ElementType.HYPERBOLIC)
        rep.add(f"h_{i} hyperbolic", hyp and trace_discriminant(h.proj) > 0)
        rep.add(f"h_{i} fixes x_{i} and y_{i}",
                fixes_boundary_point(h, x_i) and fixes_boundary_point(h, y_i)
                and fixes_light_ray(h, x_i) and fixes_light_ray(h, y_i))

    # square classes: odd valuation at p for f_1, even for the others
    p = inp.prime
    for s in steps:
        parity = vp(s.abs_norm, p) % 2
        rep.add(f"|<f_{s.i},f_{s.i}>| square class at p", parity == (1 if s.i == 1 else 0)
                and s.abs_norm == -inner(s.f, s.f))
    return rep

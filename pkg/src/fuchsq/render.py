"""SVG drawing of the fundamental polygon in the upper half plane.

Each polygon edge is a solid semicircle, or a vertical segment when one end
is infinity.  Each hyperbolic axis from x_i to y_i is a dashed semicircle,
and each rotation center f_j is a dot at a + ib.  Coordinates stay exact
until they are printed with six fractional digits, so the output bytes depend
only on the blueprint and the RenderSpec.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from xml.sax.saxutils import escape

from .construct import GroupBlueprint
from .errors import InputError
from .exactnum import Q, RationalLike
from .minkowski import INF

DIGITS = 6


@dataclass(frozen=True)
class RenderSpec:
    xmin: Fraction
    xmax: Fraction
    width: int = 800
    height: int = 400
    edge_style: str = "stroke:#000000;stroke-width:1.5;fill:none"
    axis_style: str = "stroke:#1f5fa8;stroke-width:1;fill:none;stroke-dasharray:6,4"
    labels: bool = True

    def __post_init__(self):
        if not self.xmin < self.xmax:
            raise InputError("viewport needs xmin < xmax")
        if self.width <= 0 or self.height <= 0:
            raise InputError("viewport dimensions must be positive")

    @classmethod
    def fit(cls, b: GroupBlueprint, **kw) -> "RenderSpec":
        """Viewport covering every finite vertex and axis endpoint with a margin."""
        xs = [v for v in b.vertices if v is not INF]
        xs += [s.x for s in b.trace.steps] + list(b.points)
        lo, hi = min(xs), max(xs)
        pad = (hi - lo) / 10 or Fraction(1)
        return cls(Q(kw.pop("xmin", lo - pad)), Q(kw.pop("xmax", hi + pad)), **kw)


def fmt(x: RationalLike) -> str:
    """Fixed six-digit decimal string, rounded half away from zero."""
    x = Q(x)
    scaled = x * 10**DIGITS
    q, r = divmod(abs(scaled.numerator), scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    sign = "-" if x < 0 and q else ""
    return f"{sign}{q // 10**DIGITS}.{q % 10**DIGITS:0{DIGITS}d}"


def _sqrt(x: Fraction) -> Fraction:
    with decimal.localcontext() as ctx:
        ctx.prec = 40
        root = (decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)).sqrt()
    return Fraction(root)


class _Canvas:
    def __init__(self, spec: RenderSpec):
        self.spec = spec
        self.scale = Fraction(spec.width) / (spec.xmax - spec.xmin)
        self.base = Fraction(spec.height) * 9 / 10

    def px(self, x: Fraction) -> Fraction:
        return (x - self.spec.xmin) * self.scale

    def py(self, y: Fraction) -> Fraction:
        return self.base - y * self.scale

    def arc(self, u: Fraction, w: Fraction) -> str:
        lo, hi = min(u, w), max(u, w)
        r = (hi - lo) * self.scale / 2
        return (f"M {fmt(self.px(lo))} {fmt(self.base)} "
                f"A {fmt(r)} {fmt(r)} 0 0 1 {fmt(self.px(hi))} {fmt(self.base)}")

    def vertical(self, x: Fraction) -> str:
        return f"M {fmt(self.px(x))} {fmt(self.base)} L {fmt(self.px(x))} 0.000000"


def edges(b: GroupBlueprint) -> list[tuple]:
    """Polygon edges as vertex pairs, v_{j-1} v_j for j = 1..n then v_n v_0."""
    vs = b.vertices
    return [(vs[j - 1], vs[j]) for j in range(1, len(vs))] + [(vs[-1], vs[0])]


def axes(b: GroupBlueprint) -> list[tuple[Fraction, Fraction]]:
    return [(s.x, y) for s, y in zip(b.trace.steps, b.points)]


def render_svg(b: GroupBlueprint, spec: RenderSpec | None = None) -> str:
    spec = spec or RenderSpec.fit(b)
    cv = _Canvas(spec)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f'<line class="boundary" x1="0" y1="{fmt(cv.base)}" x2="{spec.width}" '
        f'y2="{fmt(cv.base)}" style="stroke:#888888;stroke-width:0.5"/>',
        '<g class="edges">',
    ]
    for j, (u, w) in enumerate(edges(b), start=1):
        if u is INF or w is INF:
            d = cv.vertical(w if u is INF else u)
        else:
            d = cv.arc(u, w)
        out.append(f'<path class="edge" data-edge="{j}" d="{d}" style="{escape(spec.edge_style)}"/>')
    out.append('</g>')
    out.append('<g class="axes">')
    for i, (x, y) in enumerate(axes(b), start=1):
        out.append(f'<path class="axis" data-axis="{i}" d="{cv.arc(x, y)}" '
                   f'style="{escape(spec.axis_style)}"/>')
    out.append('</g>')
    out.append('<g class="centers">')
    for g in b.generators:
        cx, cy = cv.px(g.a), cv.py(_sqrt(g.b_sq))
        out.append(f'<circle class="center" data-index="{g.index}" cx="{fmt(cx)}" '
                   f'cy="{fmt(cy)}" r="2.5" style="fill:#c0392b"/>')
        if spec.labels:
            out.append(f'<text x="{fmt(cx + 4)}" y="{fmt(cy - 4)}" font-size="11">'
                       f'f{g.index}</text>')
    out.append('</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"

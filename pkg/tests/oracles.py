"""Independent reference computations used to cross-check the package.

None of these import the code paths they check: the Lorentz rotation is the
vector formula, boundary maps are Mobius fractions, tree fixing is tested
through B^-1 g B, and square classes come from plain trial division.
"""

from __future__ import annotations

from fractions import Fraction


def form(u, v) -> Fraction:
    return u[0] * v[0] + u[1] * v[1] - u[2] * v[2]


def rotate(f, x):
    """Rotation by pi about f, straight from R(x) = 2<x,f>/<f,f> f - x."""
    s = 2 * form(x, f) / form(f, f)
    return tuple(s * fi - xi for fi, xi in zip(f, x))


def light_ray(r):
    if r is None:
        return (Fraction(0), Fraction(1), Fraction(1))
    r = Fraction(r)
    return (2 * r, r * r - 1, r * r + 1)


def ray_point(v):
    """Boundary point of a future light-like vector; None stands for infinity."""
    if v[2] == v[1]:
        return None
    return v[0] / (v[2] - v[1])


def mobius(m, r):
    (a, b), (c, d) = m
    if r is None:
        return None if c == 0 else Fraction(a) / c
    den = c * r + d
    return None if den == 0 else (a * r + b) / den


def vp(x, p: int) -> int:
    x = Fraction(x)
    n, d, k = abs(x.numerator), x.denominator, 0
    while n % p == 0:
        n, k = n // p, k + 1
    while d % p == 0:
        d, k = d // p, k - 1
    return k


def factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def square_class(x) -> int:
    x = abs(Fraction(x))
    out = 1
    for n in (x.numerator, x.denominator):
        for q, e in factor(n).items():
            if e % 2:
                out *= q
    return out


def _mul(m, n):
    return ((m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
            (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]))


def _inv(m):
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return ((m[1][1] / det, -m[0][1] / det), (-m[1][0] / det, m[0][0] / det))


def fixes_lattice(g, basis, p: int) -> bool:
    """g maps the lattice spanned by ``basis`` to a multiple of itself."""
    g = tuple(tuple(Fraction(e) for e in row) for row in g)
    basis = tuple(tuple(Fraction(e) for e in row) for row in basis)
    m = _mul(_inv(basis), _mul(g, basis))
    s = min(vp(e, p) for row in m for e in row if e != 0)
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return vp(det, p) == 2 * s


def ball_bases(p: int, radius: int):
    """One basis per vertex within ``radius`` of the standard vertex.

    A vertex at distance d is the class of [[p^i, b], [0, p^j]] with
    i + j = d, 0 <= b < p^i and the entries not all divisible by p.
    """
    out = [((1, 0), (0, 1))]
    for d in range(1, radius + 1):
        for i in range(d + 1):
            j = d - i
            for b in range(p**i):
                if i and j and b % p == 0:
                    continue
                out.append(((p**i, b), (0, p**j)))
    return out

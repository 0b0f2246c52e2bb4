"""Exact rational arithmetic, p-adic valuations and small exact matrices.

Rationals are plain :class:`fractions.Fraction` values; they are always
reduced, so structural equality is exact equality.  Matrices are tuples of
tuples of Fractions and are never mutated.
"""

from __future__ import annotations

import functools
import math
import os
from fractions import Fraction
from typing import Sequence, Tuple, Union

import sympy

from .errors import FactorizationOutOfRange, ValuationOfZero

Rational = Fraction
RationalLike = Union[int, Fraction, str]
Mat2 = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]
Mat3 = Tuple[Tuple[Fraction, Fraction, Fraction], ...]

DEFAULT_TRIAL_DIVISION_CAP = 10**12
CAP_ENV_VAR = "FUCHSIAN_TRIAL_DIVISION_CAP"


def Q(x: RationalLike) -> Fraction:
    """Coerce ``x`` to a Fraction; strings use the ``"num/den"`` form."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def qstr(x: Fraction) -> str:
    """Serialize a rational as ``"num/den"``, dropping the denominator when 1."""
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# -- valuations ---------------------------------------------------------------

def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(x: RationalLike, p: int) -> int:
    """Exponent of ``p`` in the nonzero rational ``x``."""
    x = Q(x)
    if x == 0:
        raise ValuationOfZero("valuation of zero")
    return _vp_int(abs(x.numerator), p) - _vp_int(x.denominator, p)


@functools.total_ordering
class HalfInt:
    """An element of (1/2)Z together with +infinity.

    Only twice the value is stored, so equality and ordering stay exact.
    """

    __slots__ = ("twice",)

    def __init__(self, twice):
        # None encodes +infinity
        if twice is not None and not isinstance(twice, int):
            raise TypeError("twice-value must be an int or None")
        self.twice = twice

    @classmethod
    def infinity(cls) -> "HalfInt":
        return cls(None)

    @classmethod
    def of(cls, x: RationalLike) -> "HalfInt":
        x = Q(x)
        if (2 * x).denominator != 1:
            raise ValueError(f"{x} is not a half-integer")
        return cls(int(2 * x))

    @property
    def is_infinite(self) -> bool:
        return self.twice is None

    @property
    def is_integer(self) -> bool:
        return self.twice is not None and self.twice % 2 == 0

    def value(self) -> Fraction:
        if self.twice is None:
            raise ValueError("infinite valuation has no rational value")
        return Fraction(self.twice, 2)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HalfInt.of(other)
        if not isinstance(other, HalfInt):
            return NotImplemented
        return self.twice == other.twice

    def __lt__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HalfInt.of(other)
        if not isinstance(other, HalfInt):
            return NotImplemented
        if self.twice is None:
            return False
        if other.twice is None:
            return True
        return self.twice < other.twice

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __repr__(self):
        return "HalfInt(inf)" if self.twice is None else f"HalfInt({qstr(self.value())})"

    def __str__(self):
        return "inf" if self.twice is None else qstr(self.value())


def vp_half(x: RationalLike, p: int) -> HalfInt:
    """Valuation of ``x`` as a HalfInt, with v(0) = +infinity."""
    x = Q(x)
    if x == 0:
        return HalfInt.infinity()
    return HalfInt(2 * vp(x, p))


def vp_of_sqrt(b_sq: RationalLike, p: int) -> HalfInt:
    """Valuation of sqrt(b_sq), i.e. vp(b_sq)/2, for a positive rational b_sq."""
    b_sq = Q(b_sq)
    if b_sq <= 0:
        raise ValueError("vp_of_sqrt needs a positive rational")
    return HalfInt(vp(b_sq, p))


# -- square classes and primes ------------------------------------------------

def trial_division_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_TRIAL_DIVISION_CAP
    return int(raw)


def is_square_free(n: int, cap: int | None = None) -> bool:
    """True iff no prime square divides ``n`` (trial division)."""
    if n < 1:
        raise ValueError("is_square_free needs a positive integer")
    cap = trial_division_cap() if cap is None else cap
    if n > cap:
        raise FactorizationOutOfRange(
            f"factorization out of range: {n} exceeds trial-division cap {cap}"
        )
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return False
        d += 1 if d == 2 else 2
    return True


def is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))


def next_prime_3mod4(m: int) -> int:
    """Smallest prime p > m with p = 3 (mod 4)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    c = m + 1
    c += (3 - c) % 4
    while not sympy.isprime(c):
        c += 4
    return c


def squarefree_mul(a: int, b: int) -> int:
    """Product of two square-class labels modulo squares; squares become 1."""
    g = math.gcd(a, b)
    r = (a // g) * (b // g)
    s = math.isqrt(r)
    return 1 if s * s == r else r


def same_square_class(a: int, b: int) -> bool:
    """Whether the labels a and b lie in the same class of Q^x / (Q^x)^2."""
    return squarefree_mul(a, b) == 1


def square_free_part(x: RationalLike) -> int:
    """Square-free positive integer in the square class of |x|.

    Needs the factorization of numerator and denominator; only used for the
    two generators whose square class is not steered by the construction.
    """
    x = abs(Q(x))
    if x == 0:
        raise ValuationOfZero("square class of zero")
    out = 1
    for n in (x.numerator, x.denominator):
        for prime, e in sympy.factorint(n).items():
            if e % 2:
                out *= int(prime)
    return out


DEFAULT_FACTOR_LIMIT = 10**5
RHO_STEPS = 4000
RHO_MAX_BITS = 256


def _split(n: int, steps: int) -> list[int]:
    """Factors of n found by bounded rho; a stubborn composite stays whole."""
    if n == 1:
        return []
    if n.bit_length() > RHO_MAX_BITS or sympy.isprime(n):
        return [n]
    d = sympy.pollard_rho(n, retries=2, max_steps=steps)
    if not d:
        return [n]
    return _split(int(d), steps) + _split(n // int(d), steps)


@functools.lru_cache(maxsize=4)
def _small_primes(limit: int) -> tuple[tuple[int, ...], int]:
    ps = tuple(int(q) for q in sympy.primerange(2, limit + 1))
    return ps, math.prod(ps)


def _trial_divide(n: int, limit: int) -> tuple[dict[int, int], int]:
    """Exponents of the primes up to limit in n, and the remaining cofactor."""
    ps, primorial = _small_primes(limit)
    g = math.gcd(n, primorial)
    found = {}
    for q in ps:
        if q > g:
            break
        if g % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            found[q] = e
    return found, n


def square_class_label(x: RationalLike, limit: int = DEFAULT_FACTOR_LIMIT) -> int:
    """A positive integer in the square class of |x|, factoring on a budget.

    Equal to :func:`square_free_part` whenever trial division up to ``limit``
    and a short rho search on cofactors of at most RHO_MAX_BITS bits factor
    |x| completely.  A cofactor that resists is kept whole; the label then
    still names the right class but may carry a square factor, so compare
    labels with :func:`same_square_class`.
    """
    x = abs(Q(x))
    if x == 0:
        raise ValuationOfZero("square class of zero")
    parity: dict[int, int] = {}
    found, rest = _trial_divide(x.numerator * x.denominator, limit)
    for q, e in found.items():
        parity[q] = e % 2
    for r in _split(rest, RHO_STEPS):
        parity[r] = (parity.get(r, 0) + 1) % 2
    out = 1
    for q, e in parity.items():
        r = math.isqrt(q)
        if e and r * r != q:
            out *= q
    return out


def rational_sqrt(x: RationalLike) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Q(x)
    if x < 0:
        return None
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Clear denominators and divide by the content; signs are preserved."""
    v = [Q(c) for c in v]
    den = 1
    for c in v:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in v]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(c // g for c in ints)


# -- small exact matrices -----------------------------------------------------

def mat2(a, b, c, d) -> Mat2:
    return ((Q(a), Q(b)), (Q(c), Q(d)))


def mat2_mul(m: Mat2, n: Mat2) -> Mat2:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def mat2_det(m: Mat2) -> Fraction:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat2_trace(m: Mat2) -> Fraction:
    return m[0][0] + m[1][1]


def mat2_inv(m: Mat2) -> Mat2:
    d = mat2_det(m)
    if d == 0:
        raise ZeroDivisionError("singular 2x2 matrix")
    return ((m[1][1] / d, -m[0][1] / d), (-m[1][0] / d, m[0][0] / d))


def mat2_scale(m: Mat2, s: Fraction) -> Mat2:
    return tuple(tuple(s * e for e in row) for row in m)  # type: ignore[return-value]


def mat2_is_scalar(m: Mat2) -> bool:
    return m[0][1] == 0 and m[1][0] == 0 and m[0][0] == m[1][1]


def canonical_projective(m: Mat2) -> Mat2:
    """Unique representative of the projective class of ``m``.

    Clears denominators, divides by the content and makes the first nonzero
    entry positive.
    """
    flat = primitive_integer_vector([m[0][0], m[0][1], m[1][0], m[1][1]])
    for e in flat:
        if e != 0:
            if e < 0:
                flat = tuple(-x for x in flat)
            break
    a, b, c, d = (Fraction(e) for e in flat)
    return ((a, b), (c, d))


def projectively_equal(m: Mat2, n: Mat2) -> bool:
    return canonical_projective(m) == canonical_projective(n)


def mat3_mul(m: Mat3, n: Mat3) -> Mat3:
    return tuple(
        tuple(sum((m[i][k] * n[k][j] for k in range(3)), Fraction(0)) for j in range(3))
        for i in range(3)
    )


def mat3_apply(m: Mat3, v: Sequence[Fraction]) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(sum((m[i][k] * v[k] for k in range(3)), Fraction(0)) for i in range(3))  # type: ignore[return-value]


def mat3_identity() -> Mat3:
    return tuple(tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3))


def mat3_transpose(m: Mat3) -> Mat3:
    return tuple(tuple(m[j][i] for j in range(3)) for i in range(3))


def mat3_det(m: Mat3) -> Fraction:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def det3_columns(u, v, w) -> Fraction:
    """Determinant of the 3x3 matrix with columns u, v, w."""
    return mat3_det(tuple(tuple(Q(c[i]) for c in (u, v, w)) for i in range(3)))

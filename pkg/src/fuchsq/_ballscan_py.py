"""Pure-Python ball scan over the Bruhat-Tits tree (fallback kernel).

Vertices at distance d from the standard vertex are the lattices with basis

    A(c)  = [[1, 0], [c, q]]        0 <= c < q
    B(c') = [[q, p c'], [0, 1]]     0 <= c' < q / p

with q = p^d.  A prepared element is ``(alpha, beta, gamma, delta, pk, mod)``:
a p-primitive integral matrix reduced modulo ``mod = p^(radius + k)`` where
vp(det) = 2k, and ``pk = p^k``.  It fixes the vertex with basis B iff every
entry of adj(B) g B is divisible by q p^k.

Both kernels must enumerate in the same order so that results agree exactly.
"""

KIND_A = 0
KIND_B = 1


def _fixes_a(g, c, q):
    al, be, ga, de, pk, mod = g
    t = q * pk
    u = (al + be * c) % mod
    if (q * u) % t:
        return False
    if (q * q * be) % t:
        return False
    if (de - c * be) * q % t:
        return False
    return (ga + de * c - c * u) % t == 0


def _fixes_b(g, s, q):
    al, be, ga, de, pk, mod = g
    t = q * pk
    if q * (al - s * ga) % t:
        return False
    w = (ga * s + de) % mod
    if (q * w) % t:
        return False
    if (q * q * ga) % t:
        return False
    return (al * s + be - s * w) % t == 0


def first_fixed(gens, p, radius):
    """First vertex (d, kind, c) fixed by every prepared element, or None."""
    q = 1
    for d in range(radius + 1):
        for c in range(q):
            for g in gens:
                if not _fixes_a(g, c, q):
                    break
            else:
                return (d, KIND_A, c)
        if d:
            for c in range(q // p):
                s = p * c
                for g in gens:
                    if not _fixes_b(g, s, q):
                        break
                else:
                    return (d, KIND_B, c)
        q *= p
    return None


def count_fixed(gens, p, radius):
    """Number of vertices in the ball fixed by every prepared element."""
    total = 0
    q = 1
    for d in range(radius + 1):
        for c in range(q):
            if all(_fixes_a(g, c, q) for g in gens):
                total += 1
        if d:
            for c in range(q // p):
                s = p * c
                if all(_fixes_b(g, s, q) for g in gens):
                    total += 1
        q *= p
    return total

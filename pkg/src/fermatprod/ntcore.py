"""Modular arithmetic kernels: primality, 2^n-th roots of -1, Hensel lifting.

Everything operates on plain Python integers, so results stay exact at any
size; CPython's native pow() provides the fast path below machine word sizes
and switches to arbitrary precision transparently.  All functions are pure
and safe for concurrent use.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotARootError, NotSplittingError

# Strong-pseudoprime witness set covering every composite below 2^64
# (Sinclair's seven bases, checked against the Feitsma-Galway SPRP tables).
_MR_BASES_64 = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

PRIMALITY_LIMIT = 1 << 64


@dataclass(frozen=True)
class RootSet:
    """All canonical solutions of x^(2^n) = -1 (mod modulus), modulus = p^j.

    Roots are sorted ascending, lie in [0, modulus), and come in negated
    pairs r, modulus - r.  There are exactly 2^n of them.
    """

    n: int
    modulus: int
    roots: tuple[int, ...]


def is_prime(v: int) -> bool:
    """Deterministic primality for 0 <= v < 2^64.

    Inputs at or above 2^64 are refused with ValueError rather than answered
    probabilistically; nothing in this package needs primality that large.
    """
    if v >= PRIMALITY_LIMIT:
        raise ValueError(f"is_prime is deterministic only below 2^64, got {v}")
    if v < 2:
        return False
    for p in _SMALL_PRIMES:
        if v == p:
            return True
        if v % p == 0:
            return False
    d = v - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES_64:
        a %= v
        if a == 0:
            continue
        x = pow(a, d, v)
        if x == 1 or x == v - 1:
            continue
        for _ in range(s - 1):
            x = x * x % v
            if x == v - 1:
                break
        else:
            return False
    return True


def _least_nonresidue(p: int) -> int:
    """Smallest quadratic non-residue modulo the odd prime p."""
    g = 2
    half = (p - 1) >> 1
    while pow(g, half, p) != p - 1:
        g += 1
    return g


@lru_cache(maxsize=None)
def roots_of_minus_one(n: int, p: int) -> RootSet:
    """All 2^n residues r with r^(2^n) = -1 (mod p), ascending.

    p must be an odd prime with p = 1 (mod 2^(n+1)); otherwise the congruence
    has no solutions and NotSplittingError is raised.  The construction is
    deterministic: the smallest quadratic non-residue g gives the primitive
    2^(n+1)-th root of unity z = g^((p-1)/2^(n+1)), and the roots are the odd
    powers of z.
    """
    if n < 1:
        raise ValueError(f"exponent level must be >= 1, got {n}")
    if p <= 2 or (p - 1) % (1 << (n + 1)):
        raise NotSplittingError(
            f"x^(2^{n}) = -1 has no roots mod {p}: {p} is not 1 mod {1 << (n + 1)}"
        )
    z = pow(_least_nonresidue(p), (p - 1) >> (n + 1), p)
    z2 = z * z % p
    roots = []
    r = z
    for _ in range(1 << n):
        roots.append(r)
        r = r * z2 % p
    roots.sort()
    return RootSet(n=n, modulus=p, roots=tuple(roots))


def hensel_lift(n: int, p: int, r: int, j: int) -> int:
    """Lift the root r of x^(2^n)+1 mod p to the unique root mod p^j.

    Uses Newton steps with doubling precision; valid because the derivative
    2^n * r^(2^n - 1) is a unit mod p for odd p.  Returns the canonical
    representative in [0, p^j).
    """
    if j < 1:
        raise ValueError(f"target exponent must be >= 1, got {j}")
    e = 1 << n
    r %= p
    if pow(r, e, p) != p - 1:
        raise NotARootError(f"{r} is not a root of x^(2^{n})+1 mod {p}")
    s, k = r, 1
    while k < j:
        k = min(2 * k, j)
        mod = p**k
        fs = (pow(s, e, mod) + 1) % mod
        ds = e * pow(s, e - 1, mod) % mod
        s = (s - fs * pow(ds, -1, mod)) % mod
    return s


@lru_cache(maxsize=None)
def lifted_roots(n: int, p: int, j: int) -> RootSet:
    """RootSet of x^(2^n) = -1 modulo p^j, lifted from the roots mod p."""
    base = roots_of_minus_one(n, p)
    if j == 1:
        return base
    roots = tuple(sorted(hensel_lift(n, p, r, j) for r in base.roots))
    return RootSet(n=n, modulus=p**j, roots=roots)


def count_roots_upto(n: int, p: int, j: int, m: int) -> int:
    """#{x : 1 <= x <= m, p^j divides x^(2^n)+1}, by interval counting.

    Each block of p^j consecutive integers contains exactly 2^n solutions,
    so the count is floor(m / p^j) * 2^n plus the roots in the partial block;
    no value x^(2^n)+1 is ever formed or scanned.
    """
    if m < 0:
        raise ValueError(f"scan bound must be >= 0, got {m}")
    rs = lifted_roots(n, p, j)
    q, t = divmod(m, rs.modulus)
    return q * len(rs.roots) + bisect_right(rs.roots, t)

"""Sieve-backed prime counting and numeric spot-checks of the analytic bounds.

Two independent prime sieves (a numpy array sieve and a pure-Python segmented
sieve) back pi, pi(x; q, a) and theta(x; q, a).  All logarithms are natural.
Log-weighted sums are accumulated with math.fsum (Shewchuk compensated
summation); a bound only counts as passed when its margin exceeds 1e-9,
otherwise it is flagged ambiguous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .errors import BeyondSieveError

DEFAULT_SIEVE_LIMIT = 10_000_000
SEGMENT_SIZE = 1 << 20
MARGIN_EPS = 1e-9


@dataclass(frozen=True)
class SievedPrimes:
    """All primes up to limit, ascending, duplicate-free."""

    limit: int
    primes: np.ndarray


def primes_upto(limit: int) -> np.ndarray:
    """Classic Eratosthenes sieve on a boolean array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def segmented_primes(limit: int, segment_size: int = SEGMENT_SIZE) -> np.ndarray:
    """Odd-only segmented sieve; independent of primes_upto.

    Base primes come from its own bytearray sieve, segments of the given size
    are processed one at a time, so memory stays O(sqrt(limit) + segment).
    """
    if limit < 2:
        return np.array([], dtype=np.int64)
    base_limit = isqrt(limit)
    base = bytearray([1]) * (base_limit + 1)
    base[0:2] = b"\x00\x00"
    for p in range(2, isqrt(base_limit) + 1):
        if base[p]:
            base[p * p :: p] = b"\x00" * len(range(p * p, base_limit + 1, p))
    base_primes = [p for p in range(3, base_limit + 1, 2) if base[p]]

    out = [2] if limit >= 2 else []
    low = 3
    while low <= limit:
        high = min(low + 2 * segment_size, limit + 1)  # exclusive, odd span
        count = (high - low + 1) // 2
        mask = bytearray([1]) * count
        for p in base_primes:
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start >= high:
                continue
            first = (start - low) // 2
            mask[first::p] = b"\x00" * len(range(first, count, p))
        out.extend(low + 2 * i for i in range(count) if mask[i])
        low = high
    return np.array(out, dtype=np.int64)


@lru_cache(maxsize=4)
def get_sieve(limit: int = DEFAULT_SIEVE_LIMIT) -> SievedPrimes:
    """Cached classic sieve used as the default backend for the counters."""
    return SievedPrimes(limit, primes_upto(limit))


def _backend(x: int, sieve: SievedPrimes | None) -> SievedPrimes:
    sv = sieve if sieve is not None else get_sieve()
    if x > sv.limit:
        raise BeyondSieveError(f"x={x} beyond sieved limit {sv.limit}")
    return sv


def pi(x: int, sieve: SievedPrimes | None = None) -> int:
    """Number of primes <= x."""
    sv = _backend(x, sieve)
    return int(np.searchsorted(sv.primes, x, side="right"))


def pi_ap(x: int, q: int, a: int, sieve: SievedPrimes | None = None) -> int:
    """Number of primes p <= x with p = a (mod q); requires gcd(a, q) = 1."""
    if gcd(a, q) != 1:
        raise ValueError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    sv = _backend(x, sieve)
    ps = sv.primes[: np.searchsorted(sv.primes, x, side="right")]
    return int(np.count_nonzero(ps % q == a % q))


def theta_ap(x: int, q: int, a: int, sieve: SievedPrimes | None = None) -> float:
    """Chebyshev theta(x; q, a) = sum of ln p over primes p <= x, p = a (mod q)."""
    if gcd(a, q) != 1:
        raise ValueError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    sv = _backend(x, sieve)
    ps = sv.primes[: np.searchsorted(sv.primes, x, side="right")]
    sel = ps[ps % q == a % q]
    return math.fsum(np.log(sel.astype(np.float64)).tolist())


@dataclass(frozen=True)
class BoundRecord:
    x: int
    lhs: float
    rhs: float
    margin: float
    status: str  # "pass" | "ambiguous" | "fail"


@dataclass(frozen=True)
class BoundReport:
    """Sampled verification of one inequality; passed iff every sample passes."""

    name: str
    params: dict = field(compare=False)
    records: tuple[BoundRecord, ...]

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.records)


def _record(x: int, lhs: float, rhs: float, margin: float) -> BoundRecord:
    if margin > MARGIN_EPS:
        status = "pass"
    elif margin < -MARGIN_EPS:
        status = "fail"
    else:
        status = "ambiguous"
    return BoundRecord(x, lhs, rhs, margin, status)


def check_pi_bound(
    samples=(10**6, 10**7), sieve: SievedPrimes | None = None
) -> BoundReport:
    """pi(x) <= 1.1 x / ln x for x >= 10^6."""
    records = []
    for x in samples:
        if x < 10**6:
            raise ValueError(f"bound is asserted only for x >= 10^6, got {x}")
        lhs = float(pi(x, sieve))
        rhs = 1.1 * x / math.log(x)
        records.append(_record(x, lhs, rhs, rhs - lhs))
    return BoundReport("pi_bound", {"samples": tuple(samples)}, tuple(records))


def _grid(lo: int, hi: int, points: int) -> tuple[int, ...]:
    xs = np.geomspace(lo, hi, points)
    return tuple(sorted({max(lo, min(hi, int(round(v)))) for v in xs}))


def check_bt_bound(
    n: int, samples=None, sieve: SievedPrimes | None = None
) -> BoundReport:
    """Brun-Titchmarsh specialization pi(x; 2^(n+1), 1) <= 4x / (2^n ln x) for x >= 4^(n+1)."""
    if n < 2:
        raise ValueError(f"bound is asserted for n >= 2, got {n}")
    q = 1 << (n + 1)
    lo = 4 ** (n + 1)
    sv = sieve if sieve is not None else get_sieve()
    if samples is None:
        samples = _grid(lo, sv.limit, 10)
    records = []
    for x in samples:
        if x < lo:
            raise ValueError(f"bound needs x >= 4^(n+1) = {lo}, got {x}")
        lhs = float(pi_ap(x, q, 1, sv))
        rhs = 4.0 * x / ((1 << n) * math.log(x))
        records.append(_record(x, lhs, rhs, rhs - lhs))
    return BoundReport("bt_bound", {"n": n, "samples": tuple(samples)}, tuple(records))


def check_logsum_bound(
    a: int, x: int, sieve: SievedPrimes | None = None
) -> BoundReport:
    """sum_{p <= x, p = a mod 8} ln p / p > 0.245 ln x - 3.15 for x >= 10^6, a in {1,3,5,7}."""
    if a not in (1, 3, 5, 7):
        raise ValueError(f"a must be an odd class mod 8, got {a}")
    if x < 10**6:
        raise ValueError(f"bound is asserted only for x >= 10^6, got {x}")
    sv = _backend(x, sieve)
    ps = sv.primes[: np.searchsorted(sv.primes, x, side="right")]
    sel = ps[ps % 8 == a].astype(np.float64)
    lhs = math.fsum((np.log(sel) / sel).tolist())
    rhs = 0.245 * math.log(x) - 3.15
    rec = _record(x, lhs, rhs, lhs - rhs)
    return BoundReport("logsum_bound", {"a": a, "x": x}, (rec,))


def check_theta_window(
    a: int, samples=(10**6, 3 * 10**6, 10**7), sieve: SievedPrimes | None = None
) -> BoundReport:
    """|theta(x; 8, a) - x/4| < 0.024 x / ln x, spot-checked at desk scale."""
    if a not in (1, 3, 5, 7):
        raise ValueError(f"a must be an odd class mod 8, got {a}")
    records = []
    for x in samples:
        if x < 10**6:
            raise ValueError(f"window is asserted only for x >= 10^6, got {x}")
        lhs = abs(theta_ap(x, 8, a, sieve) - x / 4.0)
        rhs = 0.024 * x / math.log(x)
        records.append(_record(x, lhs, rhs, rhs - lhs))
    return BoundReport(
        "theta_window", {"a": a, "samples": tuple(samples)}, tuple(records)
    )


def final_inequality_margin(m: int, n: int) -> tuple[float, float]:
    """Both sides of the closing inequality at (m, n).

    lhs = 3(0.245 ln m - 3.15) and
    rhs = 2.2 m/(m-1) + ((m+1)/(m-1)) ln 2 / 2^(n+1) + 8 (m+1)/(m-1);
    a contradiction (lhs > rhs) rules out every prime order exceeding
    n*2^(n-1) once m is large enough.
    """
    if m <= 1:
        raise ValueError(f"need m > 1, got {m}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    lhs = 3.0 * (0.245 * math.log(m) - 3.15)
    ratio = (m + 1) / (m - 1)
    rhs = 2.2 * m / (m - 1) + ratio * math.log(2) / (1 << (n + 1)) + 8.0 * ratio
    return lhs, rhs


def final_inequality_crossing(n: int) -> int:
    """Smallest integer m with lhs > rhs for all m' >= m.

    lhs - rhs is strictly increasing for m > 1 (lhs grows like ln m, rhs
    decreases), so integer bisection finds the unique threshold.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")

    def diff(m: int) -> float:
        lhs, rhs = final_inequality_margin(m, n)
        return lhs - rhs

    lo, hi = 2, 10**13
    if diff(lo) > 0:
        return lo
    if diff(hi) <= 0:
        raise ArithmeticError("no crossing below 10^13; inputs out of expected range")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if diff(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi

"""Partition combinatorics behind the prime-order thresholds.

The central quantity is big_n(n) = n*2^(n-1) + 1: the least total such that
every partition k_1 >= ... >= k_s of it has an index r with

    r >= floor(2^(n - floor(log2 k_r) - 1)) + 1.

All log2 computations use bit lengths, never floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InfeasibleSizeError

# Exhaustive minimality checks: always allowed through n = 4; n = 5 walks
# ~1.8e7 partitions of 81 and hides behind allow_long.
MINIMALITY_DEFAULT_MAX = 4
MINIMALITY_LONG_MAX = 5


@dataclass(frozen=True)
class Partition:
    """Non-increasing positive integer parts."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("partition needs at least one part")
        prev = None
        for k in self.parts:
            if k < 1:
                raise ValueError(f"parts must be positive, got {k}")
            if prev is not None and k > prev:
                raise ValueError(f"parts must be non-increasing, got {self.parts}")
            prev = k

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the threshold condition on a partition.

    thresholds[i] is the required index bound for part i+1, recorded for
    every examined index (all of them when unsatisfied, up to the witness
    otherwise).  witness_r is the smallest satisfying index, 1-based.
    """

    satisfied: bool
    witness_r: int | None
    thresholds: tuple[int, ...]


def r_bound(m: int, n: int) -> int:
    """Minimal root count R(m, n) = floor(2^(n-m-1)) + 1, which is 1 for m >= n."""
    if m < 0 or n < 1:
        raise ValueError(f"need m >= 0 and n >= 1, got m={m}, n={n}")
    if m >= n:
        return 1
    return (1 << (n - m - 1)) + 1


def big_n(n: int) -> int:
    """The forcing total n * 2^(n-1) + 1."""
    if n < 1:
        raise ValueError(f"exponent level must be >= 1, got {n}")
    return n * (1 << (n - 1)) + 1


def satisfies_condition(parts: Iterable[int], n: int) -> ConditionReport:
    """Check r >= r_bound(floor(log2 k_r), n) for some index r.

    Accepts a Partition or any non-increasing sequence of positive parts.
    The witness is the smallest satisfying r.
    """
    seq = tuple(parts)
    Partition(seq)  # validate shape
    thresholds = []
    for r, k in enumerate(seq, start=1):
        thr = r_bound(k.bit_length() - 1, n)
        thresholds.append(thr)
        if r >= thr:
            return ConditionReport(True, r, tuple(thresholds))
    return ConditionReport(False, None, tuple(thresholds))


def extreme_partition(n: int) -> Partition:
    """The unique partition of big_n(n) that satisfies the condition only at its last part.

    It has s = 2^(n-1) + 1 parts: k_r = 2^(n - ceil(log2 r)) - 1 for r < s and
    k_s = 1.
    """
    if n < 1:
        raise ValueError(f"exponent level must be >= 1, got {n}")
    s = (1 << (n - 1)) + 1
    parts = [(1 << (n - (r - 1).bit_length())) - 1 for r in range(1, s)]
    parts.append(1)
    return Partition(tuple(parts))


def _iter_raw(total: int) -> Iterator[list[int]]:
    """All partitions of total in reverse lexicographic order.

    Yields a live work buffer for speed; callers must not mutate or retain it.
    """
    a = [total]
    while True:
        yield a
        k = len(a) - 1
        while k >= 0 and a[k] == 1:
            k -= 1
        if k < 0:
            return
        rem = len(a) - 1 - k + 1
        a[k] -= 1
        cap = a[k]
        del a[k + 1 :]
        while rem:
            t = cap if cap < rem else rem
            a.append(t)
            rem -= t


def enumerate_partitions(total: int) -> Iterator[Partition]:
    """Every partition of total exactly once, reverse lexicographic order."""
    if total < 1:
        raise ValueError(f"total must be >= 1, got {total}")
    for buf in _iter_raw(total):
        yield Partition(tuple(buf))


def _threshold_by_bitlength(n: int, total: int) -> list[int]:
    """thresholds[b] = r_bound(b - 1, n) for parts of bit length b <= bitlen(total)."""
    return [0] + [r_bound(b - 1, n) for b in range(1, total.bit_length() + 1)]


def _satisfies_fast(parts: Sequence[int], thresholds: Sequence[int]) -> bool:
    """Existential condition check by blocks of equal bit length.

    Within a block the threshold is constant, so only the block's last
    (largest) index matters.
    """
    i, length = 0, len(parts)
    while i < length:
        b = parts[i].bit_length()
        j = i + 1
        while j < length and parts[j].bit_length() == b:
            j += 1
        if j >= thresholds[b]:
            return True
        i = j
    return False


def verify_minimality(n: int, allow_long: bool = False) -> bool:
    """Exhaustively confirm that big_n(n) is the least forcing total.

    True iff (a) every partition of big_n(n) satisfies the condition, and
    (b) the truncated extreme partition of n*2^(n-1) does not, witnessing
    that one less would not force it.  n <= 4 runs by default; n = 5 needs
    allow_long; larger n raises InfeasibleSizeError.
    """
    if n < 1:
        raise ValueError(f"exponent level must be >= 1, got {n}")
    cap = MINIMALITY_LONG_MAX if allow_long else MINIMALITY_DEFAULT_MAX
    if n > cap:
        raise InfeasibleSizeError(
            f"minimality enumeration supported for n <= {cap}"
            f"{'' if allow_long else ' (n = 5 needs allow_long)'}, got n={n}"
        )
    total = big_n(n)
    thresholds = _threshold_by_bitlength(n, total)
    for parts in _iter_raw(total):
        if not _satisfies_fast(parts, thresholds):
            return False
    truncated = extreme_partition(n).parts[:-1]
    if satisfies_condition(truncated, n).satisfied:
        return False
    return True

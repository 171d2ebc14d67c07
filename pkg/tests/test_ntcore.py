"""ntcore: primality, root finding, Hensel lifting, interval counting."""

import pytest

from fermatprod.errors import NotARootError, NotSplittingError
from fermatprod.ntcore import (
    PRIMALITY_LIMIT,
    count_roots_upto,
    hensel_lift,
    is_prime,
    lifted_roots,
    roots_of_minus_one,
)


def brute_roots(n, mod):
    """Oracle: scan every residue."""
    e = 1 << n
    return tuple(x for x in range(mod) if pow(x, e, mod) == mod - 1)


def brute_count(n, p, j, m):
    """Oracle: test divisibility of every value up to m."""
    e = 1 << n
    pj = p**j
    return sum(1 for x in range(1, m + 1) if (x**e + 1) % pj == 0)


def trial_division_is_prime(v):
    if v < 2:
        return False
    d = 2
    while d * d <= v:
        if v % d == 0:
            return False
        d += 1
    return True


class TestIsPrime:
    def test_chain_anchor_primes(self):
        assert is_prime(1297)
        assert is_prime(2873716601617)
        assert not is_prime(1)

    def test_agrees_with_trial_division_small(self):
        for v in range(2000):
            assert is_prime(v) == trial_division_is_prime(v), v

    def test_strong_pseudoprime_traps(self):
        # composites that fool small witness sets
        for v in (3215031751, 3825123056546413051, 341550071728321, 318665857834031151167461):
            if v < PRIMALITY_LIMIT:
                assert not is_prime(v), v
        # Carmichael numbers
        for v in (561, 1105, 1729, 41041, 825265):
            assert not is_prime(v), v

    def test_large_primes(self):
        assert is_prime((1 << 61) - 1)  # Mersenne
        assert not is_prime((1 << 61) - 3)

    def test_rejects_beyond_64_bits(self):
        with pytest.raises(ValueError):
            is_prime(1 << 64)

    def test_anchor_values(self):
        assert is_prime(6**4 + 1)
        assert is_prime(1302**4 + 1)
        assert not is_prime(8**4 + 1)  # 4097 = 17 * 241


class TestRootsOfMinusOne:
    def test_small_cases(self):
        assert roots_of_minus_one(1, 5).roots == (2, 3)
        assert roots_of_minus_one(2, 17).roots == (2, 8, 9, 15)

    def test_chain_prime(self):
        # 1303 from the next-solution list reduces to 6 mod 1297
        assert roots_of_minus_one(2, 1297).roots == (6, 216, 1081, 1291)

    def test_not_splitting(self):
        with pytest.raises(NotSplittingError):
            roots_of_minus_one(2, 5)  # 5 is not 1 mod 8
        with pytest.raises(NotSplittingError):
            roots_of_minus_one(1, 7)  # 7 is 3 mod 4

    def test_brute_force_agreement(self):
        for n in (1, 2, 3, 4):
            step = 1 << (n + 1)
            for p in range(step + 1, 400, step):
                if not is_prime(p):
                    continue
                rs = roots_of_minus_one(n, p)
                assert rs.roots == brute_roots(n, p), (n, p)
                assert len(rs.roots) == 1 << n

    def test_negation_closure(self):
        for n, p in ((1, 13), (2, 97), (3, 113), (2, 1297)):
            rs = roots_of_minus_one(n, p)
            for r in rs.roots:
                assert (p - r) in rs.roots


class TestHenselLift:
    def test_identity_at_level_one(self):
        assert hensel_lift(2, 17, 2, 1) == 2

    def test_known_lifts(self):
        assert hensel_lift(2, 17, 2, 2) == 155  # brute: only x < 289 with x^4 = -1, x = 2 mod 17
        assert hensel_lift(1, 5, 2, 2) == 7

    def test_matches_brute_force(self):
        for n, p in ((1, 5), (1, 13), (2, 17), (2, 41)):
            e = 1 << n
            for r in roots_of_minus_one(n, p).roots:
                got = hensel_lift(n, p, r, 2)
                want = [x for x in brute_roots(n, p * p) if x % p == r]
                assert [got] == want, (n, p, r)

    def test_lift_consistency(self):
        for n, p in ((1, 5), (2, 17), (2, 1297), (3, 97)):
            for r in roots_of_minus_one(n, p).roots:
                prev = r
                for j in range(2, 6):
                    cur = hensel_lift(n, p, r, j)
                    assert cur % p ** (j - 1) == prev, (n, p, r, j)
                    assert (pow(cur, 1 << n, p**j) + 1) % p**j == 0
                    prev = cur

    def test_rejects_non_root(self):
        with pytest.raises(NotARootError):
            hensel_lift(2, 17, 3, 2)

    def test_lifted_rootset_shape(self):
        rs = lifted_roots(2, 17, 3)
        assert rs.modulus == 17**3
        assert len(rs.roots) == 4
        for r in rs.roots:
            assert rs.modulus - r in rs.roots  # negation closure survives lifting


class TestCountRoots:
    def test_known_counts(self):
        assert count_roots_upto(2, 17, 1, 20) == 5  # x = 2, 8, 9, 15, 19
        assert count_roots_upto(2, 17, 2, 20) == 0  # least root mod 289 is 110

    def test_chain_prime_counts(self):
        # four solutions below 1303; the fifth (1303 = 6 + 1297) arrives at m = 1303
        assert count_roots_upto(2, 1297, 1, 1302) == 4
        assert count_roots_upto(2, 1297, 1, 1303) == 5
        assert brute_count(2, 1297, 1, 1302) == 4

    def test_agrees_with_naive_scan(self):
        for n in (1, 2, 3):
            step = 1 << (n + 1)
            for p in range(step + 1, 120, step):
                if not is_prime(p):
                    continue
                j = 1
                while p**j <= 10**5:
                    for m in (0, 1, p - 1, p, 5 * p + 3, 2000):
                        assert count_roots_upto(n, p, j, m) == brute_count(n, p, j, m), (
                            n,
                            p,
                            j,
                            m,
                        )
                    j += 1

    def test_counting_formula_everywhere(self):
        # every (p, j) with p^j <= 1e5 and every m <= 1e4 at once: a numpy
        # prefix scan of actual divisibility against the closed formula
        import numpy as np

        top_m = 10**4
        xs = np.arange(1, top_m + 1, dtype=np.int64)
        ms = xs
        for n in (1, 2, 3):
            step = 1 << (n + 1)
            for p in range(step + 1, 10**5 + 1, step):
                if not is_prime(p):
                    continue
                j = 1
                while p**j <= 10**5:
                    pj = p**j
                    acc = xs % pj
                    for _ in range(n):
                        acc = acc * acc % pj  # pj^2 < 2^63 keeps this exact
                    naive = np.cumsum(acc == pj - 1)
                    roots = np.array(lifted_roots(n, p, j).roots, dtype=np.int64)
                    formula = (ms // pj) * (1 << n) + np.searchsorted(
                        roots, ms % pj, side="right"
                    )
                    assert (naive == formula).all(), (n, p, j)
                    j += 1

    def test_interval_decomposition(self):
        for n, p, j in ((2, 17, 1), (2, 17, 2), (1, 13, 2)):
            rs = lifted_roots(n, p, j)
            for m in (0, 7, 100, 12345):
                q, t = divmod(m, rs.modulus)
                residual = sum(1 for r in rs.roots if r <= t)
                assert count_roots_upto(n, p, j, m) == q * (1 << n) + residual

    @pytest.mark.long
    def test_full_range_root_counts(self):
        # every split prime below 1e5, every modulus p^j below 1e7, n = 2;
        # oracle scans all residues with exact int64 modular squaring
        import numpy as np

        n = 2
        step = 1 << (n + 1)

        def scan_roots(mod):
            xs = np.arange(mod, dtype=np.int64)
            acc = xs
            for _ in range(n):
                acc = acc * acc % mod  # mod^2 < 2^63, stays exact
            return tuple(int(v) for v in xs[acc == mod - 1])

        for p in range(step + 1, 10**5, step):
            if not is_prime(p):
                continue
            j = 1
            while p**j <= 10**7:
                found = scan_roots(p**j)
                assert len(found) == 1 << n, (p, j)
                assert lifted_roots(n, p, j).roots == found, (p, j)
                j += 1

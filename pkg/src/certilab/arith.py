"""Number-theoretic substrate: primes, primorials, witnesses, Landau's
function and the growth sequences used by the caterpillar constructions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


class ArithError(ValueError):
    pass


# -- primes -------------------------------------------------------------------

_primes = [2, 3, 5, 7, 11, 13]


def _extend_primes(limit):
    if _primes[-1] >= limit:
        return
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    _primes[:] = [int(x) for x in np.nonzero(sieve)[0]]


def primes_up_to(n):
    _extend_primes(max(n, 16))
    import bisect
    return _primes[:bisect.bisect_right(_primes, n)]


def nth_prime(k: int) -> int:
    """p_1 = 2, p_2 = 3, p_3 = 5, ..."""
    if k < 1:
        raise ArithError("prime indices start at 1")
    limit = 16
    while len(_primes) < k:
        limit = max(limit * 4, int(k * (math.log(k) + math.log(math.log(k + 2)) + 2)) + 10)
        _extend_primes(limit)
    return _primes[k - 1]


def prime_count(n: int) -> int:
    return len(primes_up_to(n))


def primorial(k: int) -> int:
    """Product of the first k primes."""
    if k < 1:
        raise ArithError("primorial indices start at 1")
    out = 1
    for i in range(1, k + 1):
        out *= nth_prime(i)
    return out


def primorials_up_to(n: int):
    out = []
    k = 1
    while True:
        a = primorial(k)
        if a > n:
            return out
        out.append(a)
        k += 1


def is_primorial(n: int) -> bool:
    return n in primorials_up_to(n)


# -- witnesses ------------------------------------------------------------------

def prime_gap_witness(n: int) -> int:
    """Least k with p_k | n and p_{k+1} not | n; defined for even n >= 2."""
    if n < 2 or n % 2 != 0:
        raise ArithError("prime gap witnesses are defined for even n >= 2")
    k = 1
    while n % nth_prime(k + 1) == 0:
        k += 1
    return k


def witness_modulus(s: int, t: int) -> int:
    """Least m >= 2 with s != t (mod m); at most ceil(log2 t) when s < t."""
    if not (1 <= s < t):
        raise ArithError("need 1 <= s < t")
    m = 2
    while s % m == t % m:
        m += 1
    return m


def witness_modulus_bound() -> Callable[[int], int]:
    return lambda t: math.ceil(math.log2(t))


# -- the primorial-complement classifier ------------------------------------------

@dataclass(frozen=True)
class PrimorialClassification:
    """Either the number is a product of the first consecutive primes, or one
    of three witnessable reasons says it is not (in order: oddness, a skipped
    prime below a dividing one, a modulus separating n from the primorial it
    would have to be)."""

    in_set: bool
    condition: Optional[int] = None   # 1, 2 or 3
    params: tuple = ()                # (), (ell, k) or (k, m)

    @property
    def is_witness(self):
        return not self.in_set


def prime_factors(n: int):
    """Distinct prime factors, ascending."""
    out = []
    rest = n
    for p in primes_up_to(int(n ** 0.5) + 1):
        if p * p > rest:
            break
        if rest % p == 0:
            out.append(p)
            while rest % p == 0:
                rest //= p
    if rest > 1:
        out.append(rest)
    return out


def classify_primorial(n: int) -> PrimorialClassification:
    if n < 1:
        raise ArithError("need n >= 1")
    if n % 2 != 0:
        return PrimorialClassification(False, 1)
    factors = prime_factors(n)
    j = 0
    while j < len(factors) and factors[j] == nth_prime(j + 1):
        j += 1
    if j < len(factors):
        # p_{j+1} is skipped but a later prime divides n: condition 2 with the
        # least such k and the least skipped index
        ell = j + 1
        q = factors[j]
        k = ell + 1
        while nth_prime(k) != q:
            k += 1
        return PrimorialClassification(False, 2, (ell, k))
    # n is divisible by exactly the first j consecutive primes
    a_k = primorial(j)
    if a_k == n:
        return PrimorialClassification(True)
    m = witness_modulus(a_k, n)
    return PrimorialClassification(False, 3, (j, m))


# -- Landau's function --------------------------------------------------------------

_landau_cache = {}


def landau(n: int) -> int:
    """Largest lcm of any multiset of positive integers summing to n.

    Exact dynamic program over distinct prime powers (the optimum is always
    attained by a sum of distinct prime powers padded with ones).
    """
    if not (1 <= n <= 200):
        raise ArithError("exact computation is supported for 1 <= n <= 200")
    cap = 200
    if cap not in _landau_cache:
        dp = [1] + [0] * cap
        for p in primes_up_to(cap):
            prev = dp[:]
            power = p
            while power <= cap:
                for j in range(cap, power - 1, -1):
                    if prev[j - power]:
                        cand = prev[j - power] * power
                        if cand > dp[j]:
                            dp[j] = cand
                power *= p
        best = 1
        out = [0] * (cap + 1)
        for j in range(cap + 1):
            best = max(best, dp[j])
            out[j] = best
        _landau_cache[cap] = out
    return _landau_cache[cap][n]


# -- growth sequences -----------------------------------------------------------------

@dataclass(frozen=True)
class GrowthSequence:
    kind: str          # "A" or "B"
    terms: tuple
    source: str

    def prefix_sums(self):
        out = []
        s = 0
        for a in self.terms:
            s += a
            out.append(s)
        return out


def normalize_growth(f: Callable[[float], float]) -> Callable[[float], float]:
    """Rescale an unbounded nondecreasing sub-log function so that the
    sequence construction's preconditions hold: value 1 at 2, slopes halved."""
    f2 = f(2)
    return lambda x: (f(x) - f2) / 2.0 + 1.0


def validate_growth_function(f, grid_max=1 << 20, tol=1e-9):
    """Sample-grid check: f(2) = 1, nondecreasing, f(t)-f(s) <= (log t - log s)/2."""
    if abs(f(2) - 1.0) > 1e-6:
        raise ArithError("growth function must satisfy f(2) = 1")
    grid = sorted({2, 3, 4, 5, 6, 8, 12, 16, 24, 32, 48, 64, 100, 256, 1000,
                   4096, 65536, grid_max})
    vals = [f(x) for x in grid]
    for (s, fs), (t, ft) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if ft < fs - tol:
            raise ArithError("growth function must be nondecreasing")
        if ft - fs > (math.log2(t) - math.log2(s)) / 2 + tol:
            raise ArithError("growth function grows faster than half a log")


def build_sequence_a(f, count: int, source="") -> GrowthSequence:
    """a_1 = 2; a_d is the least positive integer making f of the prefix sum
    reach log2(d).  Every prefix then satisfies log2 d <= f(sum) <= log2 d + 1."""
    validate_growth_function(f)
    terms = [2]
    total = 2
    for d in range(2, count + 1):
        target = math.log2(d)
        lo, hi = 1, 1
        while f(total + hi) < target:
            hi *= 2
            if hi > 1 << 62:
                raise ArithError("growth function failed to reach the target")
        while lo < hi:
            mid = (lo + hi) // 2
            if f(total + mid) >= target:
                hi = mid
            else:
                lo = mid + 1
        terms.append(lo)
        total += lo
    return GrowthSequence("A", tuple(terms), source)


def build_sequence_b(f, count: int, source="") -> GrowthSequence:
    """b_m = (a_1 + ... + a_m) - 2; increasing, and >= 1 from m = 2 on."""
    a = build_sequence_a(f, count, source)
    return GrowthSequence("B", tuple(s - 2 for s in a.prefix_sums()), source)


def half_log(n):
    """The canonical admissible growth function log2(n)/2 + 1/2."""
    return math.log2(n) / 2 + 0.5


def two_fifths_log(n):
    """A second admissible growth function with a strictly smaller slope.

    Slower-growing admissible functions (square roots of logs, iterated
    logs) are admissible too, but their sequences explode doubly
    exponentially and leave the desk scale after a couple dozen terms.
    """
    return 0.4 * math.log2(n) + 0.6

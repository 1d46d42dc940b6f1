"""Integer side: cyclotomic values Phi_n(a), multiplicative orders, the sets
A_p = {n : p | Phi_n(a)} and the gcd sum B_{L,k} = sum_{L<=d<2L} log gcd(k, q^d - 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .ffield import is_prime
from .sums import gcd_qd

TRIAL_LIMIT = 10 ** 6


def divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def cyclotomic_at(n: int, a: int) -> int:
    """Phi_n(a) = (a^n - 1) / prod_{d | n, d < n} Phi_d(a), exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if a < 2:
        raise ValueError("a must be >= 2")
    num = a ** n - 1
    den = 1
    for d in divisors(n)[:-1]:
        den *= cyclotomic_at(d, a)
    val, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"inexact division computing Phi_{n}({a})")
    return val


def mult_order(p: int, a: int) -> int:
    """Least n >= 1 with a^n = 1 mod p."""
    if a % p == 0:
        raise ValueError(f"{p} divides {a}")
    order = p - 1
    # shrink p - 1 by its prime factors
    m, f = order, 2
    factors = []
    while f * f <= m:
        if m % f == 0:
            factors.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        factors.append(m)
    for f in factors:
        while order % f == 0 and pow(a, order // f, p) == 1:
            order //= f
    return order


@dataclass(frozen=True)
class ApSet:
    p: int
    a: int
    bound: int
    members: tuple[int, ...]

    @property
    def predicted(self) -> tuple[int, ...]:
        """{p^i ord_p(a)} within the bound (empty when p | a)."""
        if self.a % self.p == 0:
            return ()
        out, x = [], mult_order(self.p, self.a)
        while x <= self.bound:
            out.append(x)
            x *= self.p
        return tuple(out)

    @property
    def matches(self) -> bool:
        return self.members == self.predicted


def ap_set(p: int, a: int, bound: int) -> ApSet:
    """{n <= bound : p | Phi_n(a)} by direct divisibility."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    members = tuple(n for n in range(1, bound + 1) if cyclotomic_at(n, a) % p == 0)
    return ApSet(p, a, bound, members)


def gcd_terms(L: int, k: int, q: int) -> list[tuple[int, int, float]]:
    """(d, gcd(k, q^d - 1), log gcd) for L <= d < 2L."""
    if L < 1:
        raise ValueError("L must be >= 1")
    rows = []
    for d in range(L, 2 * L):
        g = gcd_qd(k, q, d)
        rows.append((d, g, math.log(g)))
    return rows


def blk(L: int, k: int, q: int) -> float:
    return math.fsum(t[2] for t in gcd_terms(L, k, q))


def blk_trivial_bound(L: int, k: int, q: int) -> float:
    """L * min(log k, 2L log q)."""
    return L * min(math.log(k), 2 * L * math.log(q)) if k > 1 else 0.0


def blk_ratio(L: int, k: int, q: int) -> float:
    """B_{L,k} / (L sqrt(log k log q)), the quantity the sweep tracks."""
    if k <= 1:
        return 0.0
    return blk(L, k, q) / (L * math.sqrt(math.log(k) * math.log(q)))


def nu_p_factor(k: int, limit: int = TRIAL_LIMIT) -> tuple[dict[int, int], int, bool]:
    """Trial division of k up to ``limit``.

    Returns (exponents nu_p(k), unfactored cofactor, fully_factored).  A
    cofactor > 1 whose square root exceeds the limit is left as is and the
    status reads partially factored."""
    out: dict[int, int] = {}
    n = k
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f <= limit and f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1 and (math.isqrt(n) <= limit or n <= limit):
        out[n] = out.get(n, 0) + 1
        n = 1
    return out, n, n == 1


def prod_q_minus_one(q: int, lo: int, hi: int) -> int:
    """prod_{lo <= i <= hi} (q^i - 1)."""
    out = 1
    for i in range(lo, hi + 1):
        out *= q ** i - 1
    return out


def lemma_sweep(seed: int, q: int = 2, trials: int = 200, max_bits: int = 256,
                max_L: int = 64) -> list[tuple[int, int, float]]:
    """(bits of k, L, ratio) over random k <= 2^max_bits and admissible L,
    i.e. sqrt(log_q k) <= L <= max_L."""
    import numpy as np

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    rows = []
    for _ in range(trials):
        bits = int(rng.integers(2, max_bits + 1))
        k = int.from_bytes(rng.bytes((bits + 7) // 8), "big") % (1 << bits)
        k = max(k, 2)
        lo = math.ceil(math.sqrt(math.log(k, q)))
        for L in range(max(lo, 1), max_L + 1):
            rows.append((k.bit_length(), L, blk_ratio(L, k, q)))
    return rows

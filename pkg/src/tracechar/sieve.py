"""Factor table for every monic polynomial of degree <= N over a small F_q.

Polynomials are addressed by a global index: the degree-n polynomial with
local index l (base-q digits of c_0..c_{n-1}) sits at off[n] + l, where
off[n] = (q^n - 1)/(q - 1).  Index 0 is the constant 1.

A linear sieve stores, for every f of positive degree, the rank of its
smallest prime factor (primes ordered by degree, then local index) and the
global index of f / P.  Lambda, mu, P_GL multiplicities and additive
functions such as p_k all follow by a forward pass over this chain.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numba import njit

from .ffield import FieldSpec

NO_PRIME = np.iinfo(np.int32).max


def offsets(q: int, N: int) -> np.ndarray:
    off = np.zeros(N + 2, dtype=np.int64)
    for n in range(1, N + 2):
        off[n] = off[n - 1] + q ** (n - 1)
    return off


@njit(cache=True)
def _sieve_kernel(q, N, add, mul, off, spf, cof, prime_deg, prime_loc):
    n_primes = 0
    pdig = np.zeros(N + 1, dtype=np.int64)
    gdig = np.zeros(N + 1, dtype=np.int64)
    prod = np.zeros(N + 1, dtype=np.int64)
    spf[0] = 2147483647
    for n in range(1, N + 1):
        base = off[n]
        size = off[n + 1] - base
        for r in range(n_primes):
            d = prime_deg[r]
            if 2 * d > n:
                break
            e = n - d
            # digits of P
            loc = prime_loc[r]
            for i in range(d):
                pdig[i] = loc % q
                loc //= q
            pdig[d] = 1
            gbase = off[e]
            gsize = off[e + 1] - gbase
            for gl in range(gsize):
                if spf[gbase + gl] < r:
                    continue
                loc = gl
                for i in range(e):
                    gdig[i] = loc % q
                    loc //= q
                gdig[e] = 1
                for i in range(n + 1):
                    prod[i] = 0
                for i in range(d + 1):
                    a = pdig[i]
                    if a == 0:
                        continue
                    for j in range(e + 1):
                        b = gdig[j]
                        if b != 0:
                            prod[i + j] = add[prod[i + j], mul[a, b]]
                h = 0
                for i in range(n - 1, -1, -1):
                    h = h * q + prod[i]
                spf[base + h] = r
                cof[base + h] = gbase + gl
        for l in range(size):
            if spf[base + l] == -1:
                spf[base + l] = n_primes
                cof[base + l] = 0
                prime_deg[n_primes] = n
                prime_loc[n_primes] = l
                n_primes += 1
    return n_primes



@njit(cache=True)
def _chain_kernel(spf, cof, prime_deg, lam, mu, mult):
    lam[0] = 0
    mu[0] = 1
    mult[0] = 0
    for g in range(1, spf.shape[0]):
        r = spf[g]
        c = cof[g]
        d = prime_deg[r]
        if c == 0:
            lam[g] = d
            mu[g] = -1
            mult[g] = 1
        elif spf[c] == r:
            lam[g] = d if lam[c] > 0 else 0
            mu[g] = 0
            mult[g] = mult[c] + 1
        else:
            lam[g] = 0
            mu[g] = -mu[c]
            mult[g] = 1


@njit(cache=True)
def _additive_kernel(spf, cof, add, hp, out):
    out[0] = 0
    for g in range(1, spf.shape[0]):
        out[g] = add[out[cof[g]], hp[spf[g]]]


@njit(cache=True)
def _flag_kernel(spf, cof, pflag, out):
    out[0] = False
    for g in range(1, spf.shape[0]):
        out[g] = pflag[spf[g]] or out[cof[g]]


class FactorTable:
    """Smallest-prime-factor table for M_{<=N,q}."""

    def __init__(self, spec: FieldSpec, N: int):
        if not spec.tabulated:
            raise ValueError("factor tables need a tabulated field")
        q = spec.q
        self.spec, self.N, self.q = spec, N, q
        self.off = offsets(q, N)
        total = int(self.off[N + 1])
        self.spf = np.full(total, -1, dtype=np.int32)
        self.cof = np.zeros(total, dtype=np.int32 if total < 2 ** 31 else np.int64)
        # crude upper bound on the number of primes of degree <= N
        cap = sum(q ** d // d + 1 for d in range(1, N + 1)) + 8
        prime_deg = np.zeros(cap, dtype=np.int64)
        prime_loc = np.zeros(cap, dtype=np.int64)
        t = spec.np_tables
        n_primes = _sieve_kernel(q, N, t["add"], t["mul"], self.off, self.spf, self.cof,
                                 prime_deg, prime_loc)
        self.prime_deg = prime_deg[:n_primes].copy()
        self.prime_loc = prime_loc[:n_primes].copy()
        self.prime_start = np.searchsorted(self.prime_deg, np.arange(N + 2))

    # -- layout ------------------------------------------------------------
    def degree_slice(self, n: int) -> slice:
        return slice(int(self.off[n]), int(self.off[n + 1]))

    def degree_of(self, g: int) -> int:
        return int(np.searchsorted(self.off, g, side="right") - 1)

    def count_primes(self, d: int) -> int:
        return int(self.prime_start[d + 1] - self.prime_start[d])

    def irreducible_locals(self, d: int) -> np.ndarray:
        return self.prime_loc[self.prime_start[d]:self.prime_start[d + 1]]

    def prime_global(self, r: int) -> int:
        return int(self.off[self.prime_deg[r]] + self.prime_loc[r])

    @property
    def n_primes(self) -> int:
        return len(self.prime_deg)

    def t_rank(self) -> int:
        """Rank of the prime T (local index 0 among linears)."""
        return 0

    def factor_global(self, g: int) -> list[tuple[int, int]]:
        """[(prime rank, multiplicity)] for the polynomial at global index g."""
        out: list[tuple[int, int]] = []
        while g != 0:
            r = int(self.spf[g])
            if out and out[-1][0] == r:
                out[-1] = (r, out[-1][1] + 1)
            else:
                out.append((r, 1))
            g = int(self.cof[g])
        return out

    # -- derived arithmetic functions --------------------------------------
    @property
    def chains(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not hasattr(self, "_chains"):
            total = self.spf.shape[0]
            lam = np.zeros(total, dtype=np.int64)
            mu = np.zeros(total, dtype=np.int8)
            mult = np.zeros(total, dtype=np.int32)
            _chain_kernel(self.spf, self.cof, self.prime_deg, lam, mu, mult)
            self._chains = (lam, mu, mult)
        return self._chains

    def von_mangoldt(self, n: int) -> np.ndarray:
        return self.chains[0][self.degree_slice(n)]

    def moebius(self, n: int) -> np.ndarray:
        return self.chains[1][self.degree_slice(n)].astype(np.int64)

    def additive(self, prime_values: np.ndarray, upto: int | None = None) -> np.ndarray:
        """Extend h(P) to all f of degree <= upto by h(fg) = h(f) + h(g) in F_q."""
        hi = int(self.off[(self.N if upto is None else upto) + 1])
        out = np.zeros(hi, dtype=np.int64)
        _additive_kernel(self.spf[:hi], self.cof[:hi], self.spec.np_tables["add"],
                         np.ascontiguousarray(prime_values, dtype=np.int64), out)
        return out

    def prime_flag(self, prime_flags: np.ndarray) -> np.ndarray:
        """True where f has some prime factor P with prime_flags[P] set."""
        out = np.zeros(self.spf.shape[0], dtype=np.bool_)
        _flag_kernel(self.spf, self.cof, np.ascontiguousarray(prime_flags, dtype=np.bool_), out)
        return out

    def degree_flag(self, degrees) -> np.ndarray:
        """True where f has a prime factor whose degree is in ``degrees``."""
        wanted = np.zeros(self.N + 2, dtype=np.bool_)
        for d in degrees:
            if 1 <= d <= self.N:
                wanted[d] = True
        return self.prime_flag(wanted[self.prime_deg])

    @property
    def coprime_to_T(self) -> np.ndarray:
        if not hasattr(self, "_coprime_T"):
            flags = np.zeros(self.n_primes, dtype=np.bool_)
            flags[0] = True
            self._coprime_T = ~self.prime_flag(flags)
        return self._coprime_T

    def prime_digits(self, d: int) -> np.ndarray:
        """Low coefficients (shape (#P_d, d)) of the primes of degree d."""
        locs = self.irreducible_locals(d)
        return local_digits(locs, self.q, d)


def local_digits(locs: np.ndarray, q: int, n: int) -> np.ndarray:
    locs = np.asarray(locs, dtype=np.int64)
    out = np.empty((locs.shape[0], n), dtype=np.int64)
    rest = locs.copy()
    for i in range(n):
        out[:, i] = rest % q
        rest //= q
    return out


def all_digits(q: int, n: int) -> np.ndarray:
    return local_digits(np.arange(q ** n, dtype=np.int64), q, n)


_TABLES: dict[FieldSpec, FactorTable] = {}


def factor_table(spec: FieldSpec, N: int) -> FactorTable:
    """Shared table covering degrees <= N (grown on demand, never shrunk)."""
    tab = _TABLES.get(spec)
    if tab is None or tab.N < N:
        tab = FactorTable(spec, max(N, 1))
        _TABLES[spec] = tab
    return tab


@lru_cache(maxsize=None)
def prime_counts(spec: FieldSpec, N: int) -> tuple[int, ...]:
    """(|P_1|, ..., |P_N|) by Moebius inversion of q^n = sum_{d|n} d |P_d|."""
    q = spec.q
    counts = [0] * (N + 1)
    for n in range(1, N + 1):
        counts[n] = (q ** n - sum(d * counts[d] for d in range(1, n) if n % d == 0)) // n
    return tuple(counts[1:])

"""Exact character sums over M_{n,q}, prime sums on both sides of the
F_{q^n} correspondence, the smooth/rough split, the sieve recursion, the
critical degree set and the explicit bounds that go with them.

Sums of characters are returned as ``CycloInt`` values, so identities are
checked exactly; complex values are derived from them.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .characters import PowerSumCharacter, PowerTraceCharacter
from .cyclo import CycloInt
from .ffield import AdditiveCharacter, FieldSpec, extend_field
from .fpoly import chunk_bounds, check_budget, enumerate_monic
from .sieve import factor_table, prime_counts

WEIGHTS = ("unit", "lambda", "mu", "pgl", "prime")


# -- degree sets ------------------------------------------------------------

@dataclass(frozen=True)
class DegreeSet:
    n: int
    members: frozenset

    def __post_init__(self):
        if any(not 1 <= d <= self.n for d in self.members):
            raise ValueError(f"degrees must lie in 1..{self.n}")

    @classmethod
    def of(cls, n: int, members) -> "DegreeSet":
        return cls(n, frozenset(int(d) for d in members))

    @property
    def complement(self) -> frozenset:
        return frozenset(range(1, self.n + 1)) - self.members

    @property
    def s0(self) -> int | None:
        return min(self.members) if self.members else None

    def __contains__(self, d) -> bool:
        return d in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)


# -- weights ------------------------------------------------------------------

def degree_weights(spec: FieldSpec, n: int, weight: str):
    """Weight vector over M_{n,q} in enumeration order (None for unit)."""
    if weight == "unit":
        return None
    tab = factor_table(spec, n)
    if weight == "lambda":
        return tab.von_mangoldt(n)
    if weight == "mu":
        return tab.moebius(n)
    if weight == "prime":
        return (tab.von_mangoldt(n) == n).astype(np.int64) if n else np.zeros(1, np.int64)
    if weight == "pgl":
        from .glmatrix import pgl_masses

        return pgl_masses(spec, n)
    raise ValueError(f"unknown weight {weight!r}")


def _chunk_counts(codes, support, w, q, lo, hi):
    c = codes[lo:hi]
    s = support[lo:hi]
    if w is None:
        return np.bincount(c[s], minlength=q).astype(object)
    ww = w[lo:hi][s]
    cs = c[s]
    if ww.dtype == object:
        out = np.zeros(q, dtype=object)
        for x in range(q):
            out[x] = sum(ww[cs == x], Fraction(0))
        return out
    out = np.zeros(q, dtype=np.int64)
    np.add.at(out, cs, ww.astype(np.int64))
    return out.astype(object)


def code_distribution(alpha: PowerSumCharacter, n: int, weight: str = "unit",
                      workers: int = 1) -> np.ndarray:
    """Weighted counts over F_q of sum_i a_i p_i(f), f on the support in M_{n,q}.

    The degree slice is cut into ``workers`` fixed contiguous chunks whose
    exact counts are added in chunk order."""
    spec = alpha.spec
    check_budget(spec, n)
    tab = factor_table(spec, n)
    codes_all, support_all = alpha.code_array(n)
    sl = tab.degree_slice(n)
    codes, support = codes_all[sl], support_all[sl]
    w = degree_weights(spec, n, weight)
    q = spec.q
    bounds = chunk_bounds(len(codes), workers)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda b: _chunk_counts(codes, support, w, q, *b), bounds))
    else:
        parts = [_chunk_counts(codes, support, w, q, *b) for b in bounds]
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def counts_to_cyclo(psi: AdditiveCharacter, counts) -> CycloInt:
    p = psi.spec.p
    w = [0] * p
    ex = psi.exponent_table
    for x, c in enumerate(counts):
        if c:
            w[int(ex[x])] += c
    return CycloInt.of(p, w)


def exact_sum(alpha, n: int, weight: str = "unit", workers: int = 1,
              mask: np.ndarray | None = None) -> CycloInt:
    """S(n, alpha) (optionally weighted, optionally restricted by ``mask``
    over M_{n,q}) as an exact cyclotomic value."""
    if mask is None:
        counts = code_distribution(alpha, n, weight, workers)
        return counts_to_cyclo(alpha.psi, counts)
    spec = alpha.spec
    tab = factor_table(spec, n)
    codes_all, support_all = alpha.code_array(n)
    sl = tab.degree_slice(n)
    codes, support = codes_all[sl], support_all[sl] & mask
    w = degree_weights(spec, n, weight)
    counts = _chunk_counts(codes, support, w, spec.q, 0, len(codes))
    return counts_to_cyclo(alpha.psi, counts)


@dataclass
class SumRecord:
    q: int
    n: int
    descriptor: str
    weight: str
    value: complex
    exact: CycloInt | None
    elapsed: float
    terms: int

    @property
    def abs(self) -> float:
        return abs(self.value)


def weight_mass(spec: FieldSpec, n: int, weight: str) -> float:
    """Sum of |weight| over M_{n,q} (the trivial bound)."""
    w = degree_weights(spec, n, weight)
    if w is None:
        return float(spec.q ** n)
    return float(sum(abs(x) for x in w)) if w.dtype == object else float(np.abs(w).sum())


def char_sum(alpha, n: int, weight: str = "unit", workers: int = 1,
             spec: FieldSpec | None = None) -> SumRecord:
    """S(n, alpha) with weight unit, lambda, mu, pgl or prime.

    A plain callable on MonicPoly is summed by a direct loop; pass ``spec``
    unless it carries a ``spec`` attribute."""
    t0 = time.perf_counter()
    if isinstance(alpha, PowerSumCharacter):
        ex = exact_sum(alpha, n, weight, workers)
        spec = alpha.spec
        value = complex(ex)
        desc = getattr(alpha, "descriptor", repr(alpha))
    else:
        spec = spec or alpha.spec
        check_budget(spec, n)
        w = degree_weights(spec, n, weight)
        value = 0j
        for f in enumerate_monic(spec, n):
            wt = 1 if w is None else w[f.index]
            if wt:
                value += complex(alpha(f)) * float(wt)
        ex = None
        desc = getattr(alpha, "descriptor", "callable")
    return SumRecord(spec.q, n, desc, weight, value, ex, time.perf_counter() - t0, spec.q ** n)


# -- prime sums ---------------------------------------------------------------

def prime_sum_poly(ch: PowerSumCharacter, n: int) -> CycloInt:
    """sum_{f in M_{n,q}} Lambda(f) chi(f), exactly."""
    return exact_sum(ch, n, "lambda")


def prime_sum_poly_fast(ch: PowerTraceCharacter, n: int) -> CycloInt:
    """The same sum computed from primes of degree dividing n only:
    Lambda(P^e) chi(P^e) = d psi(e p_{-k}(P)) for d e = n."""
    from . import batch
    spec = ch.spec
    tab = factor_table(spec, n)
    vf = batch.VecField(spec)
    p = spec.p
    w = [0] * p
    ex = ch.psi.exponent_table
    for d in range(1, n + 1):
        if n % d:
            continue
        e = n // d
        F = tab.prime_digits(d)
        if d == 1:
            F = F[F[:, 0] != 0]
        if len(F) == 0:
            continue
        vals = batch.power_sum(vf, F, -ch.k)
        vals = vf.scalar(e, vals)
        for j, c in enumerate(np.bincount(ex[vals], minlength=p)):
            w[j] += d * int(c)
    return CycloInt.of(p, w)


@lru_cache(maxsize=32)
def _field_side_tables(spec: FieldSpec, n: int):
    """Powers of a generator of F_{q^n}^x and the relative trace of each."""
    ext = extend_field(spec, n)
    big = ext.field
    Q = big.q
    check_budget(spec, n)
    g = big.primitive_element
    mn = big.m
    p = big.p
    basis = [p ** i for i in range(mn)]

    def times(h):
        # multiplication by h as an F_p-linear map on digit row vectors
        return np.array([big.digits(big.mul(h, b)) for b in basis], dtype=np.int64)

    pw = np.zeros((Q - 1, mn), dtype=np.int64)
    pw[0, 0] = 1
    filled = 1
    while filled < Q - 1:
        take = min(filled, Q - 1 - filled)
        pw[filled:filled + take] = (pw[:take] @ times(big.pow(g, filled))) % p
        filled += take
    # relative trace to F_q is F_p-linear; record it on the basis
    tr_basis = np.array([spec.digits(ext.restrict(ext.rel_trace(b))) for b in basis],
                        dtype=np.int64)
    tr_digits = (pw @ tr_basis) % p
    tr_codes = tr_digits @ (p ** np.arange(spec.m, dtype=np.int64))
    return tr_codes


def prime_sum_field(k: int, psi: AdditiveCharacter, n: int) -> CycloInt:
    """sum over x in F_{q^n}^x of psi(Tr(x^{-k})), exactly.

    With x = g^j, x^{-k} = g^{-kj mod (q^n - 1)}, so k is reduced modulo
    q^n - 1 first."""
    spec = psi.spec
    tr = _field_side_tables(spec, n)
    Qm1 = spec.q ** n - 1
    kr = (-k) % Qm1
    j = np.arange(Qm1, dtype=np.int64)
    idx = (j * kr) % Qm1 if Qm1 < 2 ** 31 else np.array([(int(t) * kr) % Qm1 for t in j])
    vals = tr[idx]
    p = spec.p
    counts = np.bincount(psi.exponent_table[vals], minlength=p)
    return CycloInt.of(p, [int(c) for c in counts])


# -- smooth / rough split -------------------------------------------------

def rough_mask(spec: FieldSpec, n: int, S: DegreeSet) -> np.ndarray:
    tab = factor_table(spec, n)
    return tab.degree_flag(S.members)[tab.degree_slice(n)]


def mv_decompose(alpha, n: int, S: DegreeSet, weight: str = "unit") -> tuple[CycloInt, CycloInt]:
    """(smooth, rough): f with no prime factor of degree in S, and the rest."""
    rough = rough_mask(alpha.spec, n, S)
    sm = exact_sum(alpha, n, weight, mask=~rough)
    ro = exact_sum(alpha, n, weight, mask=rough)
    return sm, ro


# -- sieve ----------------------------------------------------------------------

@dataclass
class SieveResult:
    n: int
    S: DegreeSet
    dp: int
    brute: int | None
    F_at: float
    bound: float
    sequence: list[int] = field(default_factory=list)

    @property
    def bound_ok(self) -> bool:
        return self.dp <= self.bound


def sieve_count(spec: FieldSpec, n: int, S: DegreeSet, brute: bool = True) -> SieveResult:
    """A_n = #{f in M_n : every prime factor has degree outside S}."""
    q = spec.q
    P = prime_counts(spec, max(n, 1))
    Sc = [d for d in range(1, n + 1) if d not in S]
    B = [0] * (n + 1)
    for i in range(1, n + 1):
        B[i] = sum(d * P[d - 1] for d in Sc if i % d == 0)
    A = [1] + [0] * n
    for m in range(1, n + 1):
        tot = sum(A[m - i] * B[i] for i in range(1, m + 1))
        if tot % m:
            raise ArithmeticError("sieve recursion produced a non-integer")
        A[m] = tot // m
    F_at = math.exp(sum(-P[d - 1] * math.log1p(-q ** -d) for d in Sc))
    bound = q ** n * (F_at + 5) / n if n else 1.0
    bf = None
    if brute:
        bf = int((~rough_mask(spec, n, S)).sum())
    return SieveResult(n, S, A[n], bf, F_at, bound, A)


# -- critical set and the criterion ---------------------------------------

def gcd_qd(k: int, q: int, d: int) -> int:
    """gcd(k, q^d - 1) without forming q^d."""
    if k == 1:
        return 1
    return gcd(k, (pow(q, d, k) - 1) % k)


def crit_start(q: int, n: int) -> int:
    """Smallest d >= 1 with q^d >= n^12, i.e. ceil(12 log_q n)."""
    target = n ** 12
    d, qd = 0, 1
    while qd < target:
        d += 1
        qd *= q
    return max(d, 1)


def _cube_below(g: int, q: int, d: int) -> bool:
    """g^3 < q^d, exact; logs decide unless the two sides are close."""
    if g == 1:
        return True
    gap = d * math.log2(q) - 3 * math.log2(g)
    if abs(gap) > 1e-6 * d + 1:
        return gap > 0
    return g ** 3 < q ** d


def crit_set(k: int, q: int, n: int) -> DegreeSet:
    m = crit_start(q, n)
    members = [d for d in range(m, n + 1) if _cube_below(gcd_qd(k, q, d), q, d)]
    return DegreeSet.of(n, members)


@dataclass
class CritRHS:
    value: float
    harmonic: float
    constant: float = 1.0
    note: str = "constant=1, configurable"


def prop_crit_rhs(k: int, q: int, n: int, constant: float = 1.0) -> CritRHS:
    """n^{-1} + exp(-sum 1/d) over 12 log_q n < d <= n with gcd(k,q^d-1)^3 < q^d."""
    target = n ** 12
    d, qd = 0, 1
    while qd <= target:
        d += 1
        qd *= q
    h = 0.0
    for dd in range(d, n + 1):
        if _cube_below(gcd_qd(k, q, dd), q, dd):
            h += 1.0 / dd
    return CritRHS(constant * (1.0 / n + math.exp(-h)), h, constant)


# -- Montgomery-Vaughan bound terms ---------------------------------------

@dataclass
class MVBound:
    A1: float
    A2: float
    remainder: float
    remainder_exact: float
    bound: float
    rigorous: float
    Z_complement: float
    c: float

    @property
    def kappa(self) -> float:
        """Majorisation slack Z_{S^c}(1/q) / exp(A1)."""
        return self.Z_complement / math.exp(self.A1)


def mv_bound_terms(alpha, n: int, S: DegreeSet, c: float = 4.0) -> MVBound:
    """Explicit pieces of the bound on the rough part.

    ``bound`` is exp(A1)(exp(A2 + c q^{-s0/2}/s0) - 1).  ``rigorous`` is the
    full majorant Z_{S^c}(1/q)(exp(M) - 1), where M adds to A2 the exact
    values of the two correction series; q^n * rigorous bounds |rough|.
    """
    spec = alpha.spec
    q = spec.q
    Sc = sorted(S.complement)
    A1 = sum(1.0 / d for d in Sc)
    if not S.members:
        return MVBound(A1, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, c)
    P = prime_counts(spec, n)
    A2 = 0.0
    for d in S.sorted():
        A2 += q ** -d / d * abs(prime_sum_poly(alpha, d))
    corr = 0.0
    for d in S.sorted():
        corr += P[d - 1] * (-math.log1p(-q ** -d) - q ** -d)
        corr += q ** -d / d * sum(e * P[e - 1] for e in range(1, d) if d % e == 0)
    s0 = S.s0
    rem = c * q ** (-s0 / 2) / s0
    Z = math.exp(sum(-P[d - 1] * math.log1p(-q ** -d) for d in Sc))
    bound = math.exp(A1) * math.expm1(A2 + rem)
    rigorous = Z * math.expm1(A2 + corr)
    return MVBound(A1, A2, rem, corr, bound, rigorous, Z, c)


# -- appendix bound ---------------------------------------------------------

@dataclass
class AppendixBound:
    status: str
    R: float | None
    L: int | None
    a: float | None
    bound_log: float | None

    @property
    def valid(self) -> bool:
        return self.status == "ok"


def appendix_bound(d_chi: int, q: int, n: int) -> AppendixBound:
    """exp(bound_log) bounds |S(n, chi)| / q^{n/2} when status is "ok"."""
    if d_chi < n:
        return AppendixBound("trivial: d < n so S(n, chi) = 0", None, None, None, 0.0)
    if n < 3:
        return AppendixBound("outside proof regime: n < 3", None, None, None, None)
    d = d_chi
    L = 0
    while q ** (L + 1) <= d * d:
        L += 1
    a = math.log(d * math.log(d) / n)
    R = q ** (-a / (2 * math.log(d)))
    lo = 6 / (5 * math.sqrt(q))
    bound_log = None
    if 0 < R < 1:
        bound_log = 6 * d * R ** L * (1 + R / ((L + 1) * (1 - R))) - n * math.log(R)
    if not lo < R < 1:
        return AppendixBound(f"outside proof regime: R={R:.6g} not in ({lo:.6g}, 1)",
                             R, L, a, bound_log)
    return AppendixBound("ok", R, L, a, bound_log)


# -- power-sum distribution -------------------------------------------------

def powersum_distribution(spec: FieldSpec, n: int, k: int):
    """Exact law of p_k(f) for f uniform on M_{n,q}, plus the character-sum
    bound on its L1 distance from uniform."""
    from .characters import GeneralPowerCharacter
    from .glmatrix import TraceDistribution

    base = GeneralPowerCharacter(((k, 1),), AdditiveCharacter(spec, 1))
    counts = code_distribution(base, n)
    total = spec.q ** n
    masses = [Fraction(int(c), total) for c in counts]
    rhs = 0.0
    for c in range(1, spec.q):
        rhs += abs(counts_to_cyclo(AdditiveCharacter(spec, c), counts)) / total
    dist = TraceDistribution(spec, masses, "exact_uniform_poly")
    dist.bound_rhs = rhs
    return dist

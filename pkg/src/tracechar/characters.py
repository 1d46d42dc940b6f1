"""The character families chi_{k,psi} and xi_{a,psi}, the iota transform,
exhaustive Dirichlet/primitivity checks and L-functions.

Every family here has the shape f -> psi(sum_i a_i p_i(f)) with i possibly
negative; negative indices force the value 0 on multiples of T.  Since p_i is
additive over factorisations, values over all of M_{<=N,q} are computed from
the primes only (see ``sieve.FactorTable.additive``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import batch
from .cyclo import CycloInt
from .ffield import AdditiveCharacter, FieldSpec, root_of_unity
from .fpoly import MonicPoly, check_budget, enumerate_monic, pgcd, pmod, power_sum
from .sieve import all_digits, factor_table


# -- character handles ----------------------------------------------------

class PowerSumCharacter:
    """f -> psi(sum_i a_i p_i(f)), zero on T | f when some index is negative."""

    psi: AdditiveCharacter

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        raise NotImplementedError

    @property
    def spec(self) -> FieldSpec:
        return self.psi.spec

    @property
    def needs_unit(self) -> bool:
        return any(i < 0 for i, _ in self.terms)

    @property
    def modulus_degree(self) -> int:
        """Degree of the conductor bound T^{K+1}, K the largest |index|."""
        return max((abs(i) for i, a in self.terms if a), default=0) + 1

    def code(self, f: MonicPoly) -> int | None:
        """sum_i a_i p_i(f) in F_q, or None off the support."""
        spec = self.spec
        if self.needs_unit and f.constant() == 0:
            return None
        acc = 0
        for i, a in self.terms:
            if a:
                acc = spec.add(acc, spec.mul(a, power_sum(f, i)))
        return acc

    def exponent(self, f: MonicPoly) -> int | None:
        c = self.code(f)
        return None if c is None else self.psi.exponent(c)

    def __call__(self, f: MonicPoly) -> complex:
        e = self.exponent(f)
        return 0j if e is None else root_of_unity(self.spec.p, e)

    def cyclo(self, f: MonicPoly) -> CycloInt:
        e = self.exponent(f)
        p = self.spec.p
        return CycloInt.integer(p, 0) if e is None else CycloInt.zeta(p, e)

    # batch views over every monic polynomial of degree <= N
    def code_array(self, N: int) -> tuple[np.ndarray, np.ndarray]:
        """(codes, support) indexed by the global index of ``factor_table``."""
        return _code_arrays(self.spec, self.terms, N)

    def exponent_array(self, N: int) -> np.ndarray:
        codes, support = self.code_array(N)
        ex = self.psi.exponent_table[codes]
        return np.where(support, ex, -1)


@dataclass(frozen=True)
class PowerTraceCharacter(PowerSumCharacter):
    """chi_{k,psi}(f) = psi(p_{-k}(f)) if T does not divide f, else 0."""

    k: int
    psi: AdditiveCharacter

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")

    @property
    def terms(self):
        return ((-self.k, 1),)

    @property
    def modulus(self) -> MonicPoly:
        return MonicPoly.T(self.spec, self.k + 1)

    @property
    def descriptor(self) -> str:
        return f"chi:k={self.k},psi={self.psi.c}"


@dataclass(frozen=True)
class ShortIntervalCharacter(PowerSumCharacter):
    """xi_{a,psi}(f) = psi(sum_i a_i p_i(f)); ``iota_transformed`` flips to
    f -> xi(iota(f)) on T-free f."""

    a: tuple[int, ...]
    psi: AdditiveCharacter
    iota_transformed: bool = False

    def __post_init__(self):
        q = self.psi.spec.q
        if any(not 0 <= x < q for x in self.a):
            raise ValueError("coefficients must be element codes")

    @property
    def terms(self):
        sign = -1 if self.iota_transformed else 1
        return tuple((sign * (i + 1), x) for i, x in enumerate(self.a) if x)

    @property
    def k(self) -> int:
        return len(self.a)

    @property
    def modulus(self) -> MonicPoly:
        return MonicPoly.T(self.spec, self.k + 1)

    def iota(self) -> "ShortIntervalCharacter":
        return ShortIntervalCharacter(self.a, self.psi, not self.iota_transformed)

    @property
    def descriptor(self) -> str:
        body = ",".join(str(x) for x in self.a)
        tag = "iota_xi" if self.iota_transformed else "xi"
        return f"{tag}:a=[{body}],psi={self.psi.c}"


@dataclass(frozen=True)
class GeneralPowerCharacter(PowerSumCharacter):
    """psi(sum_i a_i p_i(f)) for an explicit tuple of (index, coefficient)."""

    terms_: tuple[tuple[int, int], ...]
    psi: AdditiveCharacter

    @property
    def terms(self):
        return tuple((i, a) for i, a in self.terms_ if a)

    @property
    def descriptor(self) -> str:
        return "sum:" + ";".join(f"{a}*p{i}" for i, a in self.terms) + f",psi={self.psi.c}"


def chi(spec: FieldSpec, k: int, c: int = 1) -> PowerTraceCharacter:
    return PowerTraceCharacter(k, AdditiveCharacter(spec, c))


def xi(spec: FieldSpec, a, c: int = 1) -> ShortIntervalCharacter:
    return ShortIntervalCharacter(tuple(a), AdditiveCharacter(spec, c))


def chi_eval(ch: PowerTraceCharacter, f: MonicPoly) -> complex:
    return ch(f)


def xi_eval(x: ShortIntervalCharacter, f: MonicPoly) -> complex:
    return x(f)


def iota_transform(x: ShortIntervalCharacter) -> ShortIntervalCharacter:
    """The character f -> xi(iota(f)) (zero on multiples of T)."""
    if x.iota_transformed:
        raise ValueError("already iota-transformed")
    return x.iota()


_DESC = re.compile(r"^(chi|xi|iota_xi):(?:k=([^,]+)|a=\[([^\]]*)\]),psi=(\d+)$")


def parse_character(text: str, spec: FieldSpec, kparse: Callable[[str], int] = int):
    """Parse "chi:k=<bigint>,psi=<c>" or "xi:a=[...],psi=<c>"."""
    m = _DESC.match(text.strip().replace(" ", ""))
    if not m:
        raise ValueError(f"bad character descriptor {text!r}")
    kind, kk, aa, c = m.groups()
    psi = AdditiveCharacter(spec, int(c))
    if not 0 <= psi.c < spec.q:
        raise ValueError("psi index outside the field")
    if kind == "chi":
        if kk is None:
            raise ValueError("chi needs k=")
        return PowerTraceCharacter(kparse(kk), psi)
    if aa is None:
        raise ValueError("xi needs a=[...]")
    a = tuple(int(t) for t in aa.split(",") if t)
    return ShortIntervalCharacter(a, psi, kind == "iota_xi")


# -- batched value arrays -------------------------------------------------

@lru_cache(maxsize=64)
def prime_codes(spec: FieldSpec, terms: tuple, N: int) -> np.ndarray:
    """sum_i a_i p_i(P) for every prime of degree <= N (T gets 0 when some
    index is negative); entries for higher degrees are left at 0."""
    tab = factor_table(spec, N)
    vf = batch.VecField(spec)
    out = np.zeros(tab.n_primes, dtype=np.int64)
    negative = any(i < 0 for i, _ in terms)
    ks = [i for i, a in terms if a]
    for d in range(1, N + 1):
        lo, hi = int(tab.prime_start[d]), int(tab.prime_start[d + 1])
        if lo == hi:
            continue
        F = tab.prime_digits(d)
        sel = np.arange(hi - lo)
        if negative and d == 1:
            sel = sel[F[:, 0] != 0]
        Fs = F[sel]
        ps = batch.power_sums(vf, Fs, ks)
        acc = np.zeros(len(sel), dtype=np.int64)
        for i, a in terms:
            if a:
                acc = vf.add(acc, vf.mul(ps[i], a))
        out[lo + sel] = acc
    return out


@lru_cache(maxsize=32)
def _code_arrays(spec: FieldSpec, terms: tuple, N: int) -> tuple[np.ndarray, np.ndarray]:
    tab = factor_table(spec, N)
    codes = tab.additive(prime_codes(spec, terms, N), N)
    if any(i < 0 for i, _ in terms):
        support = tab.coprime_to_T[: codes.shape[0]]
    else:
        support = np.ones(codes.shape[0], dtype=np.bool_)
    codes.setflags(write=False)
    return codes, support


def values_by_degree(alpha, spec: FieldSpec, n: int) -> np.ndarray:
    """Exponents of zeta_p (-1 for the value 0) over M_{n,q} in enumeration
    order; callables returning complex values are not accepted here."""
    tab = factor_table(spec, n)
    return alpha.exponent_array(n)[tab.degree_slice(n)]


# -- Dirichlet checks -----------------------------------------------------

@dataclass
class CheckReport:
    ok: bool
    reason: str = ""
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


@lru_cache(maxsize=None)
def product_index(spec: FieldSpec, a: int, b: int) -> np.ndarray:
    """Local index in M_{a+b} of f*g for all f in M_a, g in M_b."""
    vf = batch.VecField(spec)
    q = spec.q
    Fa = np.concatenate([all_digits(q, a), np.ones((q ** a, 1), dtype=np.int64)], axis=1)
    Gb = np.concatenate([all_digits(q, b), np.ones((q ** b, 1), dtype=np.int64)], axis=1)
    n = a + b
    prod = np.zeros((q ** a, q ** b, n + 1), dtype=np.int64)
    for i in range(a + 1):
        prod[:, :, i:i + b + 1] = vf.add(prod[:, :, i:i + b + 1],
                                         vf.mul(Fa[:, None, i:i + 1], Gb[None, :, :]))
    weights = q ** np.arange(n, dtype=np.int64)
    return prod[:, :, :n] @ weights


def _global_values(alpha, spec: FieldSpec, bound: int):
    """(exact, values): exponent array when available, else complex array."""
    tab = factor_table(spec, bound)
    hi = int(tab.off[bound + 1])
    if hasattr(alpha, "exponent_array"):
        return True, alpha.exponent_array(bound)[:hi]
    vals = np.zeros(hi, dtype=np.complex128)
    for n in range(bound + 1):
        base = int(tab.off[n])
        for f in enumerate_monic(spec, n):
            vals[base + f.index] = complex(alpha(f))
    return False, vals


@lru_cache(maxsize=16)
def _modulus_data(spec: FieldSpec, Q: MonicPoly, bound: int):
    """Residue key and coprimality flag of every f with deg f <= bound."""
    tab = factor_table(spec, bound)
    hi = int(tab.off[bound + 1])
    keys = np.zeros(hi, dtype=np.int64)
    coprime = np.zeros(hi, dtype=np.bool_)
    q = spec.q
    if all(c == 0 for c in Q.coeffs):
        j = Q.degree
        for n in range(bound + 1):
            sl = tab.degree_slice(n)
            D = all_digits(q, n)
            full = np.concatenate([D, np.ones((len(D), 1), dtype=np.int64)], axis=1)
            low = full[:, :j]
            keys[sl] = low @ (q ** np.arange(low.shape[1], dtype=np.int64))
            coprime[sl] = full[:, 0] != 0 if j else True
    else:
        for n in range(bound + 1):
            base = int(tab.off[n])
            for f in enumerate_monic(spec, n):
                r = pmod(spec, f.full, Q.full)
                keys[base + f.index] = sum(c * q ** i for i, c in enumerate(r))
                coprime[base + f.index] = len(pgcd(spec, f.full, Q.full)) == 1
    return keys, coprime


def verify_dirichlet(alpha, Q: MonicPoly, degree_bound: int, tol: float = 1e-9) -> CheckReport:
    """Exhaustive check that alpha is a Dirichlet character modulo Q on
    M_{<=degree_bound}: vanishing exactly off the units, periodic mod Q and
    completely multiplicative."""
    spec = Q.spec
    check_budget(spec, degree_bound)
    tab = factor_table(spec, degree_bound)
    exact, vals = _global_values(alpha, spec, degree_bound)
    keys, coprime = _modulus_data(spec, Q, degree_bound)
    off = tab.off

    def poly_at(g: int) -> str:
        n = tab.degree_of(g)
        return str(MonicPoly.from_index(spec, n, g - int(off[n])))

    zero = vals == -1 if exact else np.abs(vals) <= tol
    bad = np.nonzero(zero == coprime)[0]
    if len(bad):
        g = int(bad[0])
        return CheckReport(False, "vanishing", {"f": poly_at(g), "value_zero": bool(zero[g])})
    if not exact:
        off_unit = ~zero & (np.abs(np.abs(vals) - 1) > tol)
        if off_unit.any():
            g = int(np.nonzero(off_unit)[0][0])
            return CheckReport(False, "modulus", {"f": poly_at(g)})
    # periodicity: one representative value per residue class
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    starts = np.nonzero(np.r_[True, sk[1:] != sk[:-1]])[0]
    rep = np.repeat(order[starts], np.diff(np.r_[starts, len(order)]))
    same = vals[order] == vals[rep] if exact else np.abs(vals[order] - vals[rep]) <= tol
    if not same.all():
        i = int(np.nonzero(~same)[0][0])
        return CheckReport(False, "periodicity",
                           {"f": poly_at(int(order[i])), "g": poly_at(int(rep[i]))})
    # complete multiplicativity on all pairs with deg f + deg g <= bound
    p = spec.p
    for a in range(1, degree_bound + 1):
        for b in range(a, degree_bound - a + 1):
            idx = product_index(spec, a, b) + off[a + b]
            va = vals[off[a]:off[a + 1]][:, None]
            vb = vals[off[b]:off[b + 1]][None, :]
            vp = vals[idx]
            if exact:
                want = np.where((va < 0) | (vb < 0), -1, (va + vb) % p)
                ok = vp == want
            else:
                ok = np.abs(vp - va * vb) <= tol
            if not ok.all():
                i, j = map(int, np.argwhere(~ok)[0])
                return CheckReport(False, "multiplicativity",
                                   {"f": poly_at(int(off[a]) + i), "g": poly_at(int(off[b]) + j)})
    return CheckReport(True)


@dataclass
class PrimitivityReport:
    primitive: bool
    unit_witness: tuple[str, str] | None
    family_witness: int | None
    regime_covered: bool
    note: str = ""

    def __bool__(self) -> bool:
        return self.primitive


def verify_primitive(alpha, k: int) -> PrimitivityReport:
    """Is alpha (a character mod T^{k+1}) not induced from T^k?

    Checked exhaustively: alpha must be non-constant on some class mod T^k of
    T-free f in M_{k+1}.  For iota-transformed xi characters (and chi) the
    witness family T^k - c with psi(k a_k / c) != 1 is also evaluated.
    """
    spec = alpha.spec
    q, p = spec.q, spec.p
    n = k + 1
    tab = factor_table(spec, n)
    ex = alpha.exponent_array(n)[tab.degree_slice(n)]
    D = all_digits(q, n)
    unit = D[:, 0] != 0
    keys = D[:, :k] @ (q ** np.arange(k, dtype=np.int64))
    unit_witness = None
    classes: dict[int, int] = {}
    for i in np.nonzero(unit)[0]:
        key = int(keys[i])
        if key in classes:
            j = classes[key]
            if ex[j] != ex[i]:
                unit_witness = (str(MonicPoly.from_index(spec, n, j)),
                                str(MonicPoly.from_index(spec, n, int(i))))
                break
        else:
            classes[key] = int(i)
    # the explicit family T^k - c
    ak = dict((-i, a) for i, a in alpha.terms if i < 0).get(k, 0)
    regime = ak != 0 and k % p != 0
    family_witness = None
    note = ""
    if ak and not alpha.psi.trivial:
        for c in range(1, q):
            val = spec.div(spec.scalar(k, ak), c)
            if alpha.psi.exponent(val) != 0:
                f = MonicPoly.from_full(spec, [spec.neg(c)] + [0] * (k - 1) + [1])
                if alpha.exponent(f) != alpha.psi.exponent(val):
                    note = "witness family disagrees with direct evaluation"
                family_witness = c
                break
    if unit_witness is None and not regime:
        note = note or "no witness; primitivity not guaranteed in this regime"
    return PrimitivityReport(unit_witness is not None, unit_witness, family_witness, regime, note)


# -- L-functions ------------------------------------------------------------

class PrincipalCharacterError(ValueError):
    pass


@dataclass
class LFunctionPoly:
    """L(u, chi) = sum_n S(n, chi) u^n = prod_i (1 - gamma_i u)."""

    spec: FieldSpec
    exact: list[CycloInt]
    descriptor: str = ""
    termination_ok: bool = True

    @property
    def degree(self) -> int:
        d = len(self.exact) - 1
        while d > 0 and self.exact[d].is_zero():
            d -= 1
        return d

    @property
    def coeffs(self) -> list[complex]:
        return [complex(c) for c in self.exact[: self.degree + 1]]

    def inverse_root_power_sums_exact(self, n_max: int) -> list[CycloInt]:
        """s_n = sum_i gamma_i^n via n c_n = -sum_{j=1}^n s_j c_{n-j}."""
        p = self.spec.p
        c = self.exact[: self.degree + 1]
        zero = CycloInt.integer(p, 0)

        def coef(i):
            return c[i] if i < len(c) else zero

        s: list[CycloInt] = []
        for n in range(1, n_max + 1):
            acc = coef(n) * (-n)
            for j in range(1, n):
                acc = acc - s[j - 1] * coef(n - j)
            s.append(acc)
        return s

    def inverse_root_power_sums(self, n_max: int) -> list[complex]:
        return [complex(x) for x in self.inverse_root_power_sums_exact(n_max)]

    def roots(self, dps: int = 50) -> list[complex]:
        """Inverse roots gamma_i, i.e. the roots of u^d L(1/u)."""
        import mpmath

        d = self.degree
        if d == 0:
            return []
        with mpmath.workdps(dps):
            coeffs = [c.to_mp() for c in self.exact[: d + 1]]
            rts = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps, error=False)
            return [complex(r) for r in rts]


def build_lfunction(ch: PowerSumCharacter) -> LFunctionPoly:
    """Coefficients S(n, chi) for 0 <= n < deg Q, with Q = T^{K+1}."""
    from .sums import exact_sum

    if ch.psi.trivial:
        raise PrincipalCharacterError("trivial psi gives a principal character")
    if not ch.needs_unit:
        raise ValueError("L-functions are built for characters modulo T^{k+1}")
    dq = ch.modulus_degree
    check_budget(ch.spec, dq)
    exact = [exact_sum(ch, n) for n in range(dq)]
    term = exact_sum(ch, dq).is_zero()
    return LFunctionPoly(ch.spec, exact, getattr(ch, "descriptor", ""), term)


def inverse_root_power_sums(L: LFunctionPoly, n_max: int) -> list[complex]:
    return L.inverse_root_power_sums(n_max)

"""Monic polynomials over F_q: enumeration, factorisation, Lambda, mu,
power sums p_k for big signed k, and the involution f -> f(1/T) T^deg f / f(0).

Raw polynomials are lists of element codes, lowest degree first, without
trailing zeros.  ``MonicPoly`` stores only the non-leading coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .ffield import FieldSpec, extend_field, gf

DEFAULT_BUDGET = 2 ** 26


class BudgetExceeded(RuntimeError):
    def __init__(self, q: int, n: int, size: int, budget: int):
        super().__init__(f"enumeration of q^n = {q}^{n} = {size} exceeds budget {budget}")
        self.q, self.n = q, n


def check_budget(spec: FieldSpec, n: int, budget: int = DEFAULT_BUDGET) -> int:
    size = spec.q ** n
    if size > budget:
        raise BudgetExceeded(spec.q, n, size, budget)
    return size


# -- raw polynomial arithmetic -------------------------------------------

def trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(spec: FieldSpec, a: list[int], b: list[int]) -> list[int]:
    add = spec.add_table
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = add[out[i]][y]
    return trim(out)


def psub(spec: FieldSpec, a: list[int], b: list[int]) -> list[int]:
    neg = spec.neg_table
    return padd(spec, a, [neg[y] for y in b])


def pmul(spec: FieldSpec, a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    add, mul = spec.add_table, spec.mul_table
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            row = mul[x]
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add[out[i + j]][row[y]]
    return trim(out)


def pdivmod(spec: FieldSpec, a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    add, mul, neg = spec.add_table, spec.mul_table, spec.neg_table
    a = list(a)
    db = len(b) - 1
    inv_lead = spec.inv(b[-1])
    if len(a) <= db:
        return [], trim(a)
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = mul[a[i]][inv_lead]
        if c:
            quot[i - db] = c
            nc = neg[c]
            row = mul[nc]
            off = i - db
            for j in range(db + 1):
                if b[j]:
                    a[off + j] = add[a[off + j]][row[b[j]]]
    return trim(quot), trim(a[:db])


def pmod(spec: FieldSpec, a: list[int], b: list[int]) -> list[int]:
    return pdivmod(spec, a, b)[1]


def make_monic(spec: FieldSpec, a: list[int]) -> list[int]:
    if not a:
        return a
    inv = spec.inv(a[-1])
    mul = spec.mul_table
    return [mul[inv][c] for c in a]


def pgcd(spec: FieldSpec, a: list[int], b: list[int]) -> list[int]:
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, pmod(spec, a, b)
    return make_monic(spec, a)


def pmulmod(spec: FieldSpec, a: list[int], b: list[int], f: list[int]) -> list[int]:
    return pmod(spec, pmul(spec, a, b), f)


def ppowmod(spec: FieldSpec, base: list[int], e: int, f: list[int]) -> list[int]:
    if e < 0:
        raise ValueError("use an inverse residue for negative exponents")
    result = pmod(spec, [1], f)
    base = pmod(spec, base, f)
    while e:
        if e & 1:
            result = pmulmod(spec, result, base, f)
        e >>= 1
        if e:
            base = pmulmod(spec, base, base, f)
    return result


# -- MonicPoly ------------------------------------------------------------

@dataclass(frozen=True)
class MonicPoly:
    """Monic polynomial T^n + c_{n-1} T^{n-1} + ... + c_0 over ``spec``."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def full(self) -> list[int]:
        return list(self.coeffs) + [1]

    @classmethod
    def from_full(cls, spec: FieldSpec, full: list[int]) -> "MonicPoly":
        full = trim(list(full))
        if not full or full[-1] != 1:
            raise ValueError(f"not monic: {full!r}")
        return cls(spec, tuple(full[:-1]))

    @classmethod
    def one(cls, spec: FieldSpec) -> "MonicPoly":
        return cls(spec, ())

    @classmethod
    def T(cls, spec: FieldSpec, e: int = 1) -> "MonicPoly":
        return cls(spec, (0,) * e)

    @classmethod
    def from_index(cls, spec: FieldSpec, n: int, index: int) -> "MonicPoly":
        q = spec.q
        cs = []
        for _ in range(n):
            index, r = divmod(index, q)
            cs.append(r)
        return cls(spec, tuple(cs))

    @property
    def index(self) -> int:
        """Position in the lexicographic enumeration of M_{n,q}."""
        q, idx = self.spec.q, 0
        for c in reversed(self.coeffs):
            idx = idx * q + c
        return idx

    def next_to_leading(self, j: int) -> int:
        """The j-th next-to-leading coefficient (0 when j > degree)."""
        return self.coeffs[self.degree - j] if 1 <= j <= self.degree else 0

    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 1

    def __mul__(self, other: "MonicPoly") -> "MonicPoly":
        if self.spec != other.spec:
            raise ValueError("polynomials over different fields")
        return MonicPoly.from_full(self.spec, pmul(self.spec, self.full, other.full))

    def __pow__(self, e: int) -> "MonicPoly":
        out = MonicPoly.one(self.spec)
        for _ in range(e):
            out = out * self
        return out

    def divides(self, other: "MonicPoly") -> bool:
        return not pmod(self.spec, other.full, self.full)

    def __floordiv__(self, other: "MonicPoly") -> "MonicPoly":
        quot, rem = pdivmod(self.spec, self.full, other.full)
        if rem:
            raise ValueError(f"{other} does not divide {self}")
        return MonicPoly.from_full(self.spec, quot)

    def evaluate(self, ext, x: int) -> int:
        """Value at an element x of an extension (``Extension`` instance)."""
        big = ext.field
        acc = 0
        for c in reversed(self.full):
            acc = big.add(big.mul(acc, x), ext.embed(c))
        return acc

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MonicPoly({format_poly(self)!r} over {self.spec!r})"


# -- text formats -----------------------------------------------------------

def format_poly(f: MonicPoly) -> str:
    """Canonical ``T^3+2*T+1`` form; coefficients are element codes."""
    terms = []
    for i, c in reversed(list(enumerate(f.full))):
        if c == 0:
            continue
        mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
        if i == 0:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


def format_compact(f: MonicPoly) -> str:
    return f"q={f.spec.q};[{','.join(str(c) for c in f.full)}]"


_TERM = re.compile(r"^(?:(\d+)\*)?T(?:\^(\d+))?$|^(\d+)$")


def parse_poly(text: str, spec: FieldSpec | None = None) -> MonicPoly:
    """Parse either text format; the compact form carries its own q."""
    text = text.strip().replace(" ", "")
    if text.startswith("q="):
        head, _, body = text.partition(";")
        fspec = gf(int(head[2:]))
        if spec is not None and spec != fspec:
            raise ValueError("field in text does not match the given field")
        body = body.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"bad compact polynomial {text!r}")
        coeffs = [int(c) for c in body[1:-1].split(",") if c != ""]
        if any(not 0 <= c < fspec.q for c in coeffs):
            raise ValueError("coefficient code outside the field")
        return MonicPoly.from_full(fspec, coeffs)
    if spec is None:
        raise ValueError("the T-form needs an explicit field")
    acc: dict[int, int] = {}
    for term in text.split("+"):
        mt = _TERM.match(term)
        if not mt:
            raise ValueError(f"bad term {term!r}")
        if mt.group(3) is not None:
            deg, c = 0, int(mt.group(3))
        else:
            c = int(mt.group(1)) if mt.group(1) else 1
            deg = int(mt.group(2)) if mt.group(2) else 1
        if not 0 <= c < spec.q:
            raise ValueError("coefficient code outside the field")
        acc[deg] = spec.add(acc.get(deg, 0), c)
    n = max(acc) if acc else 0
    full = [acc.get(i, 0) for i in range(n + 1)]
    return MonicPoly.from_full(spec, full)


# -- enumeration ------------------------------------------------------------

def enumerate_monic(spec: FieldSpec, n: int, start: int = 0, stop: int | None = None,
                    budget: int = DEFAULT_BUDGET) -> Iterator[MonicPoly]:
    """All monic polys of degree n in lexicographic order of (c_{n-1},...,c_0)."""
    size = check_budget(spec, n, budget)
    stop = size if stop is None else min(stop, size)
    for idx in range(start, stop):
        yield MonicPoly.from_index(spec, n, idx)


def chunk_bounds(size: int, workers: int) -> list[tuple[int, int]]:
    """Fixed contiguous chunk boundaries for ``workers`` partitions."""
    workers = max(1, workers)
    step, extra = divmod(size, workers)
    out, lo = [], 0
    for w in range(workers):
        hi = lo + step + (1 if w < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


# -- factorisation ----------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    pairs: tuple[tuple[MonicPoly, int], ...]

    def expand(self, spec: FieldSpec) -> MonicPoly:
        out = MonicPoly.one(spec)
        for P, e in self.pairs:
            out = out * P ** e
        return out

    @property
    def degrees(self) -> list[int]:
        return [P.degree for P, _ in self.pairs]


@lru_cache(maxsize=None)
def irreducible_table(spec: FieldSpec, d: int) -> tuple[MonicPoly, ...]:
    from .sieve import factor_table

    check_budget(spec, d)
    tab = factor_table(spec, d)
    return tuple(MonicPoly.from_index(spec, d, i) for i in tab.irreducible_locals(d))


def irreducibles(spec: FieldSpec, n: int) -> list[MonicPoly]:
    return list(irreducible_table(spec, n))


def count_irreducibles(spec: FieldSpec, n: int) -> int:
    return len(irreducible_table(spec, n))


def factorize(f: MonicPoly) -> Factorization:
    """Distinct-degree splitting followed by trial division against the
    cached irreducible tables of each degree."""
    spec = f.spec
    if f.degree < 1:
        raise ValueError("factorize needs degree >= 1")
    g = f.full
    pairs: list[tuple[MonicPoly, int]] = []
    h = [0, 1]  # T^{q^d} mod g, updated as g shrinks
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = ppowmod(spec, h, spec.q, g)
        part = pgcd(spec, g, psub(spec, h, [0, 1]))
        if len(part) > 1:
            remaining = len(part) - 1
            for P in irreducible_table(spec, d):
                if remaining == 0:
                    break
                quot, rem = pdivmod(spec, part, P.full)
                if rem:
                    continue
                part = quot
                remaining -= d
                e = 0
                while True:
                    qq, rr = pdivmod(spec, g, P.full)
                    if rr:
                        break
                    g, e = qq, e + 1
                pairs.append((P, e))
            assert remaining == 0
            h = pmod(spec, h, g) if len(g) > 1 else []
    if len(g) > 1:
        pairs.append((MonicPoly.from_full(spec, g), 1))
    pairs.sort(key=lambda pe: (pe[0].degree, pe[0].index))
    return Factorization(tuple(pairs))


def von_mangoldt(f: MonicPoly) -> int:
    if f.degree == 0:
        return 0
    fac = factorize(f)
    return fac.pairs[0][0].degree if len(fac.pairs) == 1 else 0


def moebius(f: MonicPoly) -> int:
    if f.degree == 0:
        return 1
    fac = factorize(f)
    if any(e > 1 for _, e in fac.pairs):
        return 0
    return -1 if len(fac.pairs) % 2 else 1


def is_irreducible_bruteforce(f: MonicPoly) -> bool:
    """Trial division by every monic poly of degree 1..deg/2 (test oracle)."""
    if f.degree < 1:
        return False
    for d in range(1, f.degree // 2 + 1):
        for g in enumerate_monic(f.spec, d):
            if g.divides(f):
                return False
    return True


# -- power sums -----------------------------------------------------------

def t_inverse_mod(f: MonicPoly) -> list[int]:
    """T^{-1} mod f, needs f(0) != 0."""
    spec = f.spec
    c0 = f.constant()
    if c0 == 0:
        raise ValueError("T divides f: T is not invertible modulo f")
    if f.degree == 0:
        return []
    # f = c0 + T*g  =>  T^{-1} = -g / c0
    g = f.full[1:]
    scale = spec.neg(spec.inv(c0))
    return trim([spec.mul(scale, c) for c in g])


def operator_trace(f: MonicPoly, h: list[int]) -> int:
    """Trace of multiplication by h on F_q[T]/(f)."""
    spec = f.spec
    n = f.degree
    acc = 0
    cur = pmod(spec, h, f.full) if n else []
    for i in range(n):
        if i < len(cur):
            acc = spec.add(acc, cur[i])
        cur = pmod(spec, [0] + cur, f.full)
    return acc


def t_power_mod(f: MonicPoly, k: int) -> list[int]:
    if k >= 0:
        return ppowmod(f.spec, [0, 1], k, f.full)
    return ppowmod(f.spec, t_inverse_mod(f), -k, f.full)


def power_sum(f: MonicPoly, k: int) -> int:
    """p_k(f) = sum of k-th powers of the roots, as an F_q code.

    Computed as the trace of multiplication by T^k mod f; negative k uses
    T^{-1} mod f and needs T not dividing f.
    """
    if k < 0 and f.constant() == 0:
        raise ValueError("p_k with k < 0 is undefined when T | f")
    if k == 0:
        return f.spec.from_int(f.degree)
    return operator_trace(f, t_power_mod(f, k))


def newton_power_sums(f: MonicPoly, K: int) -> list[int]:
    """[p_1, ..., p_K] via p_k = sum_{j<k} (-1)^{j-1} e_j p_{k-j} + (-1)^{k-1} k e_k."""
    spec = f.spec
    n = f.degree
    add, mul = spec.add_table, spec.mul_table
    # e_j = (-1)^j c_{n-j}
    e = [1] + [
        (f.coeffs[n - j] if j % 2 == 0 else spec.neg(f.coeffs[n - j])) for j in range(1, n + 1)
    ]
    ps = [spec.from_int(n)]
    for k in range(1, K + 1):
        acc = 0
        for j in range(1, min(k - 1, n) + 1):
            term = mul[e[j]][ps[k - j]]
            acc = add[acc][term if j % 2 == 1 else spec.neg(term)]
        if k <= n:
            term = spec.scalar(k, e[k])
            acc = add[acc][term if k % 2 == 1 else spec.neg(term)]
        ps.append(acc)
    return ps[1:]


def involution(f: MonicPoly) -> MonicPoly:
    spec = f.spec
    c0 = f.constant()
    if c0 == 0:
        raise ValueError("the involution needs f(0) != 0")
    inv = spec.inv(c0)
    rev = list(reversed(f.full))
    return MonicPoly.from_full(spec, [spec.mul(inv, c) for c in rev])


@lru_cache(maxsize=4096)
def _roots_of_irreducible(P: MonicPoly, L: int) -> tuple[int, ...]:
    """All roots of irreducible P inside F_{q^L} (deg P must divide L)."""
    ext = extend_field(P.spec, L)
    big = ext.field
    for x in range(big.q):
        if P.evaluate(ext, x) == 0:
            roots = [x]
            for _ in range(P.degree - 1):
                roots.append(ext.frobenius(roots[-1]))
            return tuple(roots)
    raise AssertionError(f"{P} has no root in the degree-{L} extension")


def root_power_sum(f: MonicPoly, k: int) -> int:
    """p_k(f) from explicit roots in a splitting field (test oracle)."""
    from math import lcm

    spec = f.spec
    if f.degree == 0:
        return 0
    fac = factorize(f)
    L = 1
    for P, _ in fac.pairs:
        L = lcm(L, P.degree)
    ext = extend_field(spec, L)
    big = ext.field
    acc = 0
    for P, e in fac.pairs:
        for lam in _roots_of_irreducible(P, L):
            v = big.pow(lam, k)
            for _ in range(e):
                acc = big.add(acc, v)
    return ext.restrict(acc)


def root_power_sums(f: MonicPoly, K: int) -> list[int]:
    """[p_1, ..., p_K] from the roots of f, found once in a splitting field."""
    from math import lcm

    spec = f.spec
    if f.degree == 0:
        return [0] * K
    fac = factorize(f)
    L = 1
    for P, _ in fac.pairs:
        L = lcm(L, P.degree)
    ext = extend_field(spec, L)
    big = ext.field
    roots = []
    for P, e in fac.pairs:
        roots.extend(_roots_of_irreducible(P, L) * e)
    out, cur = [], [1] * len(roots)
    for _ in range(K):
        acc = 0
        for i, lam in enumerate(roots):
            cur[i] = big.mul(cur[i], lam)
            acc = big.add(acc, cur[i])
        out.append(ext.restrict(acc))
    return out

"""Finite fields F_q, q = p^m, with extension towers and additive characters.

Elements are stored as integer *codes*: the element ``sum_i d_i x^i`` of
``F_p[x]/(modulus)`` has code ``sum_i d_i p^i``.  Codes ``0..p-1`` are the
prime subfield, so an integer ``t`` maps to the code ``t % p``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

TABLE_LIMIT = 256
LOG_LIMIT = 1 << 16


class FieldMismatchError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^m; raises ValueError when q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1 or not is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    return p, m


def trial_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- prime-field polynomial helpers (bootstrap for modulus search) ---------

def _pp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p) if p > 2 else 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            off = i - df
            for j in range(df + 1):
                a[off + j] = (a[off + j] - c * f[j]) % p
    return _pp_trim(a[:df])


def _pp_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _pp_mod([c % p for c in prod], f, p)


def _pp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _pp_trim(list(a)), _pp_trim(list(b))
    while b:
        a, b = b, _pp_mod(a, b, p)
    return a


def _pp_powmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pp_mod(base, f, p)
    while e:
        if e & 1:
            result = _pp_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _pp_mulmod(base, base, f, p)
    return result


def is_irreducible_prime_field(f: list[int], p: int) -> bool:
    """Ben-Or test for a monic f over F_p (coefficients low to high)."""
    m = len(f) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    h = [0, 1]
    for _ in range(m // 2):
        h = _pp_powmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _pp_gcd(f, _pp_trim(diff), p)
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m over F_p with the smallest coefficient index.

    The index of ``x^m + c_{m-1} x^{m-1} + ... + c_0`` is ``sum c_i p^i``,
    i.e. lexicographic order on ``(c_{m-1}, ..., c_0)``.
    """
    for idx in range(p ** m):
        coeffs = []
        t = idx
        for _ in range(m):
            t, r = divmod(t, p)
            coeffs.append(r)
        f = coeffs + [1]
        if m > 1 and f[0] == 0:
            continue
        if is_irreducible_prime_field(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """F_q with q = p^m, realised as F_p[x]/(modulus)."""

    p: int
    m: int
    modulus: tuple[int, ...]

    @staticmethod
    @lru_cache(maxsize=None)
    def of(p: int, m: int = 1) -> "FieldSpec":
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        return FieldSpec(p, m, smallest_irreducible(p, m))

    @property
    def q(self) -> int:
        return self.p ** self.m

    def __repr__(self) -> str:
        return f"GF({self.q})"

    # -- code <-> digits ---------------------------------------------------
    def digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.m):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_digits(self, d) -> int:
        code = 0
        for c in reversed(list(d)):
            code = code * self.p + (c % self.p)
        return code

    def from_int(self, t: int) -> int:
        return t % self.p

    @cached_property
    def _modulus_int(self) -> int:
        # p = 2 only: modulus as a bit mask
        return sum(c << i for i, c in enumerate(self.modulus))

    # -- raw arithmetic ----------------------------------------------------
    def _add_raw(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        da, db = self.digits(a), self.digits(b)
        return self.from_digits([x + y for x, y in zip(da, db)])

    def _neg_raw(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.m == 1:
            return (-a) % self.p
        return self.from_digits([-x for x in self.digits(a)])

    def _mul_raw(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        if p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
            mod = self._modulus_int
            for i in range(r.bit_length() - 1, m - 1, -1):
                if (r >> i) & 1:
                    r ^= mod << (i - m)
            return r
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        f = self.modulus
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(m + 1):
                    prod[i - m + j] -= c * f[j]
        return self.from_digits(prod[:m])

    # -- tables (small fields) --------------------------------------------
    @property
    def tabulated(self) -> bool:
        return self.q <= TABLE_LIMIT

    @cached_property
    def add_table(self) -> list[list[int]]:
        q = self.q
        return [[self._add_raw(a, b) for b in range(q)] for a in range(q)]

    @cached_property
    def mul_table(self) -> list[list[int]]:
        q = self.q
        return [[self._mul_raw(a, b) for b in range(q)] for a in range(q)]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self._neg_raw(a) for a in range(self.q)]

    @cached_property
    def inv_table(self) -> list[int]:
        q = self.q
        inv = [0] * q
        for a in range(1, q):
            row = self.mul_table[a]
            inv[a] = row.index(1)
        return inv

    @cached_property
    def sub_table(self) -> list[list[int]]:
        neg = self.neg_table
        return [[self.add_table[a][neg[b]] for b in range(self.q)] for a in range(self.q)]

    @cached_property
    def np_tables(self) -> dict[str, np.ndarray]:
        return {
            "add": np.array(self.add_table, dtype=np.int64),
            "sub": np.array(self.sub_table, dtype=np.int64),
            "mul": np.array(self.mul_table, dtype=np.int64),
            "neg": np.array(self.neg_table, dtype=np.int64),
            "inv": np.array(self.inv_table, dtype=np.int64),
            "trace": np.array([self.trace_to_prime(a) for a in range(self.q)], dtype=np.int64),
        }

    # -- public code-level arithmetic -------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.tabulated:
            return self.add_table[a][b]
        return self._add_raw(a, b)

    def neg(self, a: int) -> int:
        if self.tabulated:
            return self.neg_table[a]
        return self._neg_raw(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    @cached_property
    def _log_exp(self) -> tuple[list[int], list[int]]:
        """Discrete log and antilog tables for mid-size fields."""
        order = self.q - 1
        for g in range(2, self.q):
            exp, x = [0] * order, 1
            for i in range(order):
                exp[i] = x
                x = self._mul_raw(x, g)
            if len(set(exp)) == order:
                log = [0] * self.q
                for i, v in enumerate(exp):
                    log[v] = i
                return log, exp
        raise AssertionError("no generator")  # pragma: no cover

    def mul(self, a: int, b: int) -> int:
        if self.tabulated:
            return self.mul_table[a][b]
        if self.q <= LOG_LIMIT:
            if a == 0 or b == 0:
                return 0
            log, exp = self._log_exp
            return exp[(log[a] + log[b]) % (self.q - 1)]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self!r}")
        if self.tabulated:
            return self.inv_table[a]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """Square-and-multiply; e may be any (big, signed) integer."""
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 raised to a negative power")
            return 1 if e == 0 else 0
        e %= self.q - 1
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def scalar(self, t: int, a: int) -> int:
        """The integer multiple t*a."""
        return self.mul(self.from_int(t), a)

    def trace_to_prime(self, a: int) -> int:
        """Tr_{F_q/F_p}(a) as an integer in [0, p)."""
        acc, x = 0, a
        for _ in range(self.m):
            acc = self._add_raw(acc, x)
            x = self.pow(x, self.p) if self.m > 1 else x
        assert acc < self.p
        return acc

    def elements(self) -> range:
        return range(self.q)

    def element(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.spec != self:
                raise FieldMismatchError(f"{x.spec!r} != {self!r}")
            return x
        if isinstance(x, (list, tuple)):
            if len(x) != self.m or any(not 0 <= c < self.p for c in x):
                raise ValueError(f"bad coefficient vector {x!r} for {self!r}")
            return FieldElement(self, self.from_digits(x))
        if not 0 <= int(x) < self.q:
            raise ValueError(f"code {x} outside {self!r}")
        return FieldElement(self, int(x))

    @cached_property
    def primitive_element(self) -> int:
        order = self.q - 1
        primes = list(trial_factor(order)) if order > 1 else []
        for g in range(1, self.q):
            if all(self.pow(g, order // r) != 1 for r in primes):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover


def gf(q: int) -> FieldSpec:
    p, m = prime_power(q)
    return FieldSpec.of(p, m)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    code: int

    @property
    def vector(self) -> tuple[int, ...]:
        return tuple(self.spec.digits(self.code))

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatchError(f"{self.spec!r} vs {other.spec!r}")
            return other.code
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.div(self.code, b))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.code, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        return f"{self.spec!r}({list(self.vector)})"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch one of add/sub/mul/div/inv/neg on field elements."""
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if a.spec != b.spec:
        raise FieldMismatchError(f"{a.spec!r} vs {b.spec!r}")
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    return ops[op](b)


def field_pow(a: FieldElement, e: int) -> FieldElement:
    return a ** e


# -- additive characters --------------------------------------------------

def root_of_unity(p: int, j: int) -> complex:
    j %= p
    if j == 0:
        return 1 + 0j
    if p == 2:
        return -1 + 0j
    return cmath.exp(2j * math.pi * j / p)


@dataclass(frozen=True)
class AdditiveCharacter:
    """psi_c(x) = exp(2 pi i Tr_{F_q/F_p}(c x) / p)."""

    spec: FieldSpec
    c: int

    @property
    def trivial(self) -> bool:
        return self.c == 0

    def exponent(self, x: int) -> int:
        return self.spec.trace_to_prime(self.spec.mul(self.c, x))

    @cached_property
    def exponent_table(self) -> np.ndarray:
        """Exponent of zeta_p for every element code."""
        return np.array([self.exponent(x) for x in range(self.spec.q)], dtype=np.int64)

    def __call__(self, x) -> complex:
        if isinstance(x, FieldElement):
            x = self.spec.element(x).code
        return root_of_unity(self.spec.p, self.exponent(x))

    def sign(self, x: int) -> int:
        """Exact +-1 value; characteristic 2 only."""
        if self.spec.p != 2:
            raise ValueError("integer path exists only for p = 2")
        return 1 - 2 * self.exponent(x)


def psi_eval(psi: AdditiveCharacter, x) -> complex:
    return psi(x)


def all_characters(spec: FieldSpec, nontrivial: bool = True) -> list[AdditiveCharacter]:
    start = 1 if nontrivial else 0
    return [AdditiveCharacter(spec, c) for c in range(start, spec.q)]


# -- extensions -----------------------------------------------------------

@dataclass(frozen=True)
class Extension:
    """F_{q^n} built directly over F_p, with the embedding of F_q precomputed."""

    base: FieldSpec
    field: FieldSpec
    n: int
    embed_table: tuple[int, ...]

    @cached_property
    def restrict_table(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.embed_table)}

    def embed(self, a: int) -> int:
        return self.embed_table[a]

    def restrict(self, x: int) -> int:
        try:
            return self.restrict_table[x]
        except KeyError:
            raise ValueError(f"{x} is not in the embedded base field") from None

    def frobenius(self, x: int) -> int:
        return self.field.pow(x, self.base.q)

    def rel_trace(self, x: int) -> int:
        """Tr_{F_{q^n}/F_q}(x) as a code of the big field."""
        acc = 0
        for _ in range(self.n):
            acc = self.field.add(acc, x)
            x = self.frobenius(x)
        return acc


@lru_cache(maxsize=None)
def extend_field(base: FieldSpec, n: int) -> Extension:
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    big = FieldSpec.of(base.p, base.m * n)
    if base.m == 1:
        table = tuple(range(base.p))
    else:
        # root of the base modulus inside the big field, smallest code first
        q = base.q
        g = big.primitive_element
        step = (big.q - 1) // (q - 1)
        sub = sorted({big.pow(g, step * j) for j in range(q - 1)})
        beta = None
        for cand in sub:
            acc, xp = 0, 1
            for c in base.modulus:
                acc = big.add(acc, big.mul(c, xp))
                xp = big.mul(xp, cand)
            if acc == 0:
                beta = cand
                break
        assert beta is not None
        powers = [1]
        for _ in range(base.m - 1):
            powers.append(big.mul(powers[-1], beta))
        table = []
        for a in range(base.q):
            acc = 0
            for d, bp in zip(base.digits(a), powers):
                if d:
                    acc = big.add(acc, big.mul(d, bp))
            table.append(acc)
        table = tuple(table)
    return Extension(base, big, n, table)

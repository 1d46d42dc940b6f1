"""Exact values in Z[zeta_p] (or Q[zeta_p]) stored as count vectors.

The vector (w_0, ..., w_{p-1}) stands for sum_j w_j zeta_p^j.  Since
1 + zeta + ... + zeta^{p-1} = 0 is the only relation, two vectors are equal
as numbers iff their difference is constant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class CycloInt:
    p: int
    w: tuple

    @classmethod
    def of(cls, p: int, w: Sequence) -> "CycloInt":
        w = list(w)
        if len(w) != p:
            raise ValueError("need one entry per power of zeta")
        base = w[0]
        return cls(p, tuple(x - base for x in w))

    @classmethod
    def integer(cls, p: int, n) -> "CycloInt":
        return cls.of(p, [n] + [0] * (p - 1))

    @classmethod
    def zeta(cls, p: int, j: int) -> "CycloInt":
        w = [0] * p
        w[j % p] = 1
        return cls.of(p, w)

    def _check(self, other: "CycloInt") -> None:
        if self.p != other.p:
            raise ValueError("different cyclotomic fields")

    def __add__(self, other: "CycloInt") -> "CycloInt":
        if not isinstance(other, CycloInt):
            other = CycloInt.integer(self.p, other)
        self._check(other)
        return CycloInt.of(self.p, [a + b for a, b in zip(self.w, other.w)])

    __radd__ = __add__

    def __neg__(self) -> "CycloInt":
        return CycloInt.of(self.p, [-a for a in self.w])

    def __sub__(self, other: "CycloInt") -> "CycloInt":
        if not isinstance(other, CycloInt):
            other = CycloInt.integer(self.p, other)
        return self + (-other)

    def __mul__(self, other) -> "CycloInt":
        p = self.p
        if not isinstance(other, CycloInt):
            return CycloInt.of(p, [a * other for a in self.w])
        self._check(other)
        out = [0] * p
        for i, a in enumerate(self.w):
            if a:
                for j, b in enumerate(other.w):
                    if b:
                        out[(i + j) % p] += a * b
        return CycloInt.of(p, out)

    __rmul__ = __mul__

    def __truediv__(self, n) -> "CycloInt":
        return CycloInt.of(self.p, [Fraction(a) / n for a in self.w])

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.w)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_integer(self) -> bool:
        """True when the value is rational (all non-constant entries equal)."""
        return len(set(self.w[1:])) <= 1

    def as_integer(self):
        if not self.is_integer():
            raise ValueError("value is not rational")
        return self.w[0] - (self.w[1] if self.p > 1 else 0)

    def __complex__(self) -> complex:
        p = self.p
        if p == 2:
            return complex(self.w[0] - self.w[1])
        acc = 0j
        for j, a in enumerate(self.w):
            if a:
                acc += float(a) * cmath.exp(2j * math.pi * j / p)
        return acc

    def to_mp(self):
        import mpmath

        p = self.p
        acc = mpmath.mpc(0)
        for j, a in enumerate(self.w):
            if a:
                acc += mpmath.mpf(a) * mpmath.exp(2j * mpmath.pi * j / p)
        return acc

    def __abs__(self) -> float:
        return abs(complex(self))

    def norm_sq(self) -> Fraction:
        """|x|^2 exactly: sum_{i,j} w_i w_j cos(2 pi (i-j)/p) is not rational in
        general, so this is the rational part for p <= 3 only."""
        if self.p == 2:
            return Fraction((self.w[0] - self.w[1]) ** 2)
        if self.p == 3:
            a, b, c = self.w
            return Fraction(a * a + b * b + c * c - a * b - b * c - a * c)
        raise ValueError("exact norm implemented for p <= 3")

    def conj(self) -> "CycloInt":
        p = self.p
        return CycloInt.of(p, [self.w[(-j) % p] for j in range(p)])

    def __repr__(self) -> str:
        if self.is_integer():
            return f"{self.as_integer()}"
        terms = [f"{a}*z^{j}" if j else f"{a}" for j, a in enumerate(self.w) if a]
        return "(" + " + ".join(terms) + f" in Z[zeta_{self.p}])"

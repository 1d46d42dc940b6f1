"""Vectorised arithmetic on many monic polynomials of one degree at once.

A batch is an int64 array of shape (B, d) holding the low coefficients
c_0..c_{d-1} of B monic polynomials of degree d.  Residues modulo the batch
are arrays of the same shape.
"""

from __future__ import annotations

import numpy as np

from .ffield import FieldSpec

NEWTON_CUTOFF = 96


class VecField:
    """Elementwise F_q arithmetic on integer arrays of element codes."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p, self.q = spec.p, spec.q
        self.prime = spec.m == 1
        t = spec.np_tables
        self._add, self._mul, self._neg, self._inv = t["add"], t["mul"], t["neg"], t["inv"]

    def add(self, a, b):
        return (a + b) % self.p if self.prime else self._add[a, b]

    def sub(self, a, b):
        return (a - b) % self.p if self.prime else self._add[a, self._neg[b]]

    def neg(self, a):
        return (-a) % self.p if self.prime else self._neg[a]

    def mul(self, a, b):
        return (a * b) % self.p if self.prime else self._mul[a, b]

    def inv(self, a):
        return self._inv[a]

    def scalar(self, t: int, a):
        """Integer multiple t*a."""
        t %= self.p
        if self.prime:
            return (t * a) % self.p
        return self._mul[t, a]


def t_residue(vf: VecField, F: np.ndarray) -> np.ndarray:
    B, d = F.shape
    out = np.zeros((B, d), dtype=np.int64)
    if d == 1:
        out[:, 0] = vf.neg(F[:, 0])
    else:
        out[:, 1] = 1
    return out


def t_inverse(vf: VecField, F: np.ndarray) -> np.ndarray:
    """T^{-1} mod f = -(f - f(0))/(T f(0)); requires f(0) != 0."""
    B, d = F.shape
    c0 = F[:, 0]
    if np.any(c0 == 0):
        raise ValueError("T divides some polynomial in the batch")
    g = np.concatenate([F[:, 1:], np.ones((B, 1), dtype=np.int64)], axis=1)
    scale = vf.neg(vf.inv(c0))
    return vf.mul(g, scale[:, None])


def reduce_mod(vf: VecField, prod: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Reduce (B, L) coefficient rows modulo the monic batch F."""
    B, d = F.shape
    L = prod.shape[1]
    if vf.prime:
        p = vf.p
        prod = prod % p
        for i in range(L - 1, d - 1, -1):
            c = prod[:, i]
            prod[:, i - d:i] = (prod[:, i - d:i] - c[:, None] * F) % p
        return prod[:, :d].copy()
    prod = prod.copy()
    for i in range(L - 1, d - 1, -1):
        c = prod[:, i]
        prod[:, i - d:i] = vf.sub(prod[:, i - d:i], vf.mul(c[:, None], F))
    return prod[:, :d].copy()


def mulmod(vf: VecField, A: np.ndarray, Bm: np.ndarray, F: np.ndarray) -> np.ndarray:
    B, d = F.shape
    if d == 0:
        return A
    prod = np.zeros((B, 2 * d - 1), dtype=np.int64)
    if vf.prime:
        for i in range(d):
            prod[:, i:i + d] += A[:, i:i + 1] * Bm
        return reduce_mod(vf, prod, F)
    for i in range(d):
        prod[:, i:i + d] = vf.add(prod[:, i:i + d], vf.mul(A[:, i:i + 1], Bm))
    return reduce_mod(vf, prod, F)


def powmod(vf: VecField, base: np.ndarray, e: int, F: np.ndarray) -> np.ndarray:
    if e < 0:
        raise ValueError("negative exponent")
    B, d = F.shape
    result = np.zeros((B, d), dtype=np.int64)
    if d:
        result[:, 0] = 1
    while e:
        if e & 1:
            result = mulmod(vf, result, base, F)
        e >>= 1
        if e:
            base = mulmod(vf, base, base, F)
    return result


def t_power(vf: VecField, F: np.ndarray, k: int) -> np.ndarray:
    """T^k mod f for every f in the batch; k may be negative."""
    if k >= 0:
        return powmod(vf, t_residue(vf, F), k, F)
    return powmod(vf, t_inverse(vf, F), -k, F)


def elementary(vf: VecField, F: np.ndarray) -> np.ndarray:
    """e_0..e_d of the roots: e_j = (-1)^j c_{d-j}."""
    B, d = F.shape
    e = np.zeros((B, d + 1), dtype=np.int64)
    e[:, 0] = 1
    for j in range(1, d + 1):
        c = F[:, d - j]
        e[:, j] = c if j % 2 == 0 else vf.neg(c)
    return e


def newton(vf: VecField, F: np.ndarray, K: int) -> np.ndarray:
    """Columns p_0..p_K of the power sums via Newton's recurrence."""
    B, d = F.shape
    e = elementary(vf, F)
    ps = np.zeros((B, K + 1), dtype=np.int64)
    ps[:, 0] = d % vf.p
    for k in range(1, K + 1):
        acc = np.zeros(B, dtype=np.int64)
        for j in range(1, min(k - 1, d) + 1):
            term = vf.mul(e[:, j], ps[:, k - j])
            acc = vf.add(acc, term) if j % 2 else vf.sub(acc, term)
        if k <= d:
            term = vf.scalar(k, e[:, k])
            acc = vf.add(acc, term) if k % 2 else vf.sub(acc, term)
        ps[:, k] = acc
    return ps


def involution(vf: VecField, F: np.ndarray) -> np.ndarray:
    """Low coefficients of iota(f) = T^d f(1/T) / f(0)."""
    B, d = F.shape
    c0 = F[:, 0]
    if np.any(c0 == 0):
        raise ValueError("T divides some polynomial in the batch")
    full = np.concatenate([F, np.ones((B, 1), dtype=np.int64)], axis=1)
    rev = full[:, ::-1][:, :d]
    return vf.mul(rev, vf.inv(c0)[:, None])


def trace_of(vf: VecField, F: np.ndarray, H: np.ndarray, ps: np.ndarray | None = None) -> np.ndarray:
    """Trace of multiplication by h on F_q[T]/(f): sum_j h_j p_j(f) by linearity."""
    B, d = F.shape
    if ps is None:
        ps = newton(vf, F, max(d - 1, 0))
    acc = np.zeros(B, dtype=np.int64)
    for j in range(d):
        acc = vf.add(acc, vf.mul(H[:, j], ps[:, j]))
    return acc


def power_sum(vf: VecField, F: np.ndarray, k: int) -> np.ndarray:
    """p_k(f) for every f in the batch."""
    B, d = F.shape
    if d == 0:
        return np.zeros(B, dtype=np.int64)
    if k == 0:
        return np.full(B, d % vf.p, dtype=np.int64)
    if abs(k) <= NEWTON_CUTOFF:
        G = F if k > 0 else involution(vf, F)
        return newton(vf, G, abs(k))[:, abs(k)]
    return trace_of(vf, F, t_power(vf, F, k))


def power_sums(vf: VecField, F: np.ndarray, ks) -> dict[int, np.ndarray]:
    """Several p_k at once, sharing one Newton run per sign for small |k|."""
    out: dict[int, np.ndarray] = {}
    small_pos = [k for k in ks if 0 < k <= NEWTON_CUTOFF]
    small_neg = [k for k in ks if -NEWTON_CUTOFF <= k < 0]
    if small_pos:
        ps = newton(vf, F, max(small_pos))
        for k in small_pos:
            out[k] = ps[:, k]
    if small_neg:
        ps = newton(vf, involution(vf, F), -min(small_neg))
        for k in small_neg:
            out[k] = ps[:, -k]
    for k in ks:
        if k not in out:
            out[k] = power_sum(vf, F, k)
    return out

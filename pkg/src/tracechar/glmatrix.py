"""Random matrices in GL_n(F_q), characteristic polynomials, Tr(g^k) for big
signed k, the P_GL measure and exact/empirical trace distributions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from . import batch
from .ffield import FieldSpec, extend_field
from .fpoly import MonicPoly, check_budget, irreducibles, power_sum
from .sieve import factor_table


# -- group order, RNG -------------------------------------------------------

def gl_order(n: int, q: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent reproducible stream (seed, stream)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


# -- matrices -----------------------------------------------------------------

@dataclass(frozen=True)
class MatrixGL:
    spec: FieldSpec
    entries: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    @classmethod
    def from_array(cls, spec: FieldSpec, a) -> "MatrixGL":
        return cls(spec, tuple(tuple(int(x) for x in row) for row in a))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "MatrixGL":
        return cls.from_array(spec, np.eye(n, dtype=np.int64))

    @classmethod
    def companion(cls, f: MonicPoly) -> "MatrixGL":
        n = f.degree
        a = np.zeros((n, n), dtype=np.int64)
        for i in range(1, n):
            a[i, i - 1] = 1
        for i in range(n):
            a[i, n - 1] = f.spec.neg(f.coeffs[i])
        return cls.from_array(f.spec, a)

    def __matmul__(self, other: "MatrixGL") -> "MatrixGL":
        return MatrixGL.from_array(self.spec, mat_mul(self.spec, self.array(), other.array()))

    def trace(self) -> int:
        acc = 0
        for i in range(self.n):
            acc = self.spec.add(acc, self.entries[i][i])
        return acc

    def det(self) -> int:
        return determinant(self.spec, self.array())


def mat_mul(spec: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    vf = batch.VecField(spec)
    n, m = A.shape[0], B.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for j in range(A.shape[1]):
        out = vf.add(out, vf.mul(A[:, j:j + 1], B[j:j + 1, :]))
    return out


def _row_reduce_rank(spec: FieldSpec, rows: np.ndarray) -> int:
    vf = batch.VecField(spec)
    M = rows.copy()
    r = 0
    n_rows, n_cols = M.shape
    for c in range(n_cols):
        piv = None
        for i in range(r, n_rows):
            if M[i, c]:
                piv = i
                break
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = vf.mul(M[r], spec.inv(int(M[r, c])))
        for i in range(n_rows):
            if i != r and M[i, c]:
                M[i] = vf.sub(M[i], vf.mul(M[r], int(M[i, c])))
        r += 1
        if r == n_rows:
            break
    return r


def determinant(spec: FieldSpec, A: np.ndarray) -> int:
    vf = batch.VecField(spec)
    M = A.copy()
    n = M.shape[0]
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i, c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[[c, piv]] = M[[piv, c]]
            det = spec.neg(det)
        det = spec.mul(det, int(M[c, c]))
        inv = spec.inv(int(M[c, c]))
        for i in range(c + 1, n):
            if M[i, c]:
                M[i] = vf.sub(M[i], vf.mul(M[c], spec.mul(int(M[i, c]), inv)))
    return det


class _Echelon:
    """Incremental reduced basis for span-membership tests."""

    def __init__(self, spec: FieldSpec, n: int):
        self.spec, self.vf = spec, batch.VecField(spec)
        self.rows: list[tuple[int, np.ndarray]] = []  # (pivot column, row)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v.copy()
        for c, row in self.rows:
            if v[c]:
                v = self.vf.sub(v, self.vf.mul(row, int(v[c])))
        return v

    def add(self, v: np.ndarray) -> bool:
        w = self.reduce(v)
        nz = np.nonzero(w)[0]
        if len(nz) == 0:
            return False
        c = int(nz[0])
        w = self.vf.mul(w, self.spec.inv(int(w[c])))
        # keep rows reduced at the new pivot
        self.rows = [(cc, self.vf.sub(r, self.vf.mul(w, int(r[c]))) if r[c] else r)
                     for cc, r in self.rows]
        self.rows.append((c, w))
        return True


def sample_gl(n: int, spec: FieldSpec, rng: np.random.Generator | int) -> MatrixGL:
    """Uniform element of GL_n(F_q): row i is redrawn until it leaves the span
    of the rows before it."""
    if isinstance(rng, (int, np.integer)):
        rng = make_rng(int(rng))
    ech = _Echelon(spec, n)
    rows = []
    for _ in range(n):
        while True:
            v = rng.integers(0, spec.q, size=n, dtype=np.int64)
            if ech.add(v):
                rows.append(v)
                break
    return MatrixGL.from_array(spec, np.array(rows))


def sample_many(n: int, spec: FieldSpec, count: int, seed: int, stream: int = 0) -> list[MatrixGL]:
    rng = make_rng(seed, stream)
    return [sample_gl(n, spec, rng) for _ in range(count)]


# -- characteristic polynomial -------------------------------------------

def char_poly(g: MatrixGL) -> MonicPoly:
    """det(T I - g) via Hessenberg reduction and the standard recurrence."""
    spec = g.spec
    vf = batch.VecField(spec)
    H = g.array().copy()
    n = H.shape[0]
    # similarity transform to upper Hessenberg form
    for c in range(n - 2):
        piv = next((i for i in range(c + 1, n) if H[i, c]), None)
        if piv is None:
            continue
        if piv != c + 1:
            H[[c + 1, piv]] = H[[piv, c + 1]]
            H[:, [c + 1, piv]] = H[:, [piv, c + 1]]
        inv = spec.inv(int(H[c + 1, c]))
        for i in range(c + 2, n):
            if H[i, c]:
                t = spec.mul(int(H[i, c]), inv)
                H[i] = vf.sub(H[i], vf.mul(H[c + 1], t))
                H[:, c + 1] = vf.add(H[:, c + 1], vf.mul(H[:, i], t))
    # p_0 = 1, p_m = (T - h_mm) p_{m-1} - sum_i h_im prod_{j=i+1}^{m} h_{j,j-1} p_{i-1}
    from .fpoly import pmul, psub

    polys = [[1]]
    for m in range(n):
        cur = pmul(spec, [spec.neg(int(H[m, m])), 1], polys[m])
        prod = 1
        for i in range(m - 1, -1, -1):
            prod = spec.mul(prod, int(H[i + 1, i]))
            coef = spec.mul(int(H[i, m]), prod)
            if coef:
                cur = psub(spec, cur, [spec.mul(coef, c) for c in polys[i]])
        polys.append(cur)
    return MonicPoly.from_full(spec, polys[n])


def char_poly_cofactor(g: MatrixGL) -> MonicPoly:
    """det(T I - g) by the Leibniz expansion over permutations (oracle, n <= 5)."""
    from .fpoly import padd, pmul

    spec = g.spec
    n = g.n
    A = g.entries
    total: list[int] = []
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = [1]
        for i in range(n):
            j = perm[i]
            entry = [spec.neg(A[i][j])]
            if i == j:
                entry = [spec.neg(A[i][j]), 1]
            term = pmul(spec, term, [c for c in entry])
            if not term:
                break
        if not term:
            continue
        if sign < 0:
            term = [spec.neg(c) for c in term]
        total = padd(spec, total, term)
    return MonicPoly.from_full(spec, total)


def mat_pow(spec: FieldSpec, A: np.ndarray, e: int) -> np.ndarray:
    if e < 0:
        A = mat_inverse(spec, A)
        e = -e
    n = A.shape[0]
    R = np.eye(n, dtype=np.int64)
    while e:
        if e & 1:
            R = mat_mul(spec, R, A)
        e >>= 1
        if e:
            A = mat_mul(spec, A, A)
    return R


def mat_inverse(spec: FieldSpec, A: np.ndarray) -> np.ndarray:
    vf = batch.VecField(spec)
    n = A.shape[0]
    M = np.concatenate([A.copy(), np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i, c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[[c, piv]] = M[[piv, c]]
        M[c] = vf.mul(M[c], spec.inv(int(M[c, c])))
        for i in range(n):
            if i != c and M[i, c]:
                M[i] = vf.sub(M[i], vf.mul(M[c], int(M[i, c])))
    return M[:, n:]


def trace_power(g: MatrixGL, k: int) -> int:
    """Tr(g^k) = p_k(det(T I - g))."""
    return power_sum(char_poly(g), k)


def trace_power_direct(g: MatrixGL, k: int) -> int:
    """Tr(g^k) by repeated squaring of the matrix (cross-check)."""
    M = mat_pow(g.spec, g.array(), k)
    acc = 0
    for i in range(g.n):
        acc = g.spec.add(acc, int(M[i, i]))
    return acc


def trace_powers_batch(mats: list[MatrixGL], k: int) -> np.ndarray:
    """Tr(g^k) for many matrices of one size, sharing a batched modexp."""
    if not mats:
        return np.zeros(0, dtype=np.int64)
    spec = mats[0].spec
    F = np.array([char_poly(g).coeffs for g in mats], dtype=np.int64).reshape(len(mats), -1)
    return batch.power_sum(batch.VecField(spec), F, k)


# -- P_GL -------------------------------------------------------------------

def _prime_power_mass(q: int, d: int, e: int) -> Fraction:
    m = Fraction(1, q ** (e * d))
    for i in range(1, e + 1):
        m /= 1 - Fraction(1, q ** (i * d))
    return m


def pgl_mass(f: MonicPoly) -> Fraction:
    """P(char poly of a uniform g in GL_n(F_q) equals f)."""
    from .fpoly import factorize

    if f.degree == 0:
        return Fraction(1)
    if f.constant() == 0:
        return Fraction(0)
    out = Fraction(1)
    for P, e in factorize(f).pairs:
        out *= _prime_power_mass(f.spec.q, P.degree, e)
    return out


@lru_cache(maxsize=32)
def pgl_masses(spec: FieldSpec, n: int) -> np.ndarray:
    """P_GL over M_{n,q} in enumeration order, as an object array of Fractions."""
    tab = factor_table(spec, n)
    q = spec.q
    base = int(tab.off[n])
    out = np.empty(q ** n, dtype=object)
    cache: dict[tuple, Fraction] = {}
    for loc in range(q ** n):
        fac = tab.factor_global(base + loc)
        if n == 0:
            out[loc] = Fraction(1)
            continue
        if any(r == 0 for r, _ in fac):
            out[loc] = Fraction(0)
            continue
        key = tuple(sorted((int(tab.prime_deg[r]), e) for r, e in fac))
        m = cache.get(key)
        if m is None:
            m = Fraction(1)
            for d, e in key:
                m *= _prime_power_mass(q, d, e)
            cache[key] = m
        out[loc] = m
    return out


# -- distributions ------------------------------------------------------------

@dataclass
class TraceDistribution:
    spec: FieldSpec
    masses: list
    provenance: str
    bound_rhs: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.masses) != self.spec.q:
            raise ValueError("one mass per field element")
        if any(m < 0 for m in self.masses):
            raise ValueError("negative mass")
        total = sum(self.masses)
        if isinstance(total, Fraction) or isinstance(total, int):
            if total != 1:
                raise ValueError(f"masses sum to {total}")
        elif abs(total - 1) > 1e-12:
            raise ValueError(f"masses sum to {total}")

    @property
    def exact(self) -> bool:
        return all(isinstance(m, (Fraction, int)) for m in self.masses)

    def l1_exact(self) -> Fraction:
        q = self.spec.q
        return sum((abs(Fraction(m) - Fraction(1, q)) for m in self.masses), Fraction(0))

    def is_point_mass(self) -> int | None:
        hits = [x for x, m in enumerate(self.masses) if m == 1]
        return hits[0] if hits else None


def l1_distance(dist: TraceDistribution) -> float:
    if dist.exact:
        return float(dist.l1_exact())
    q = dist.spec.q
    return float(sum(abs(m - 1.0 / q) for m in dist.masses))


def _pgl_code_distribution(spec: FieldSpec, n: int, terms) -> list[Fraction]:
    from .characters import GeneralPowerCharacter
    from .ffield import AdditiveCharacter
    from .sums import code_distribution

    ch = GeneralPowerCharacter(tuple(terms), AdditiveCharacter(spec, 1))
    counts = code_distribution(ch, n, "pgl")
    # T | f carries mass 0 already; support of positive terms is everything
    return [Fraction(c) for c in counts]


def exact_trace_distribution(n: int, k: int, spec: FieldSpec) -> TraceDistribution:
    """Law of Tr(g^k), g uniform on GL_n(F_q), from P_GL and p_k."""
    check_budget(spec, n)
    if k == 0:
        masses = [Fraction(0)] * spec.q
        masses[spec.from_int(n)] = Fraction(1)
        return TraceDistribution(spec, masses, "exact_pgl")
    masses = _pgl_code_distribution(spec, n, ((k, 1),))
    return TraceDistribution(spec, masses, "exact_pgl", meta={"n": n, "k": k})


def empirical_trace_distribution(n: int, k: int, spec: FieldSpec, samples: int,
                                 seed: int) -> TraceDistribution:
    mats = sample_many(n, spec, samples, seed)
    tr = trace_powers_batch(mats, k)
    counts = np.bincount(tr, minlength=spec.q)
    masses = [float(c) / samples for c in counts]
    return TraceDistribution(spec, masses, "empirical", meta={"n": n, "k": k, "seed": seed,
                                                              "samples": samples})


def reduction_rhs(n: int, k: int, spec: FieldSpec, chi_side: bool = True) -> float:
    """q^{-n} sum_{psi != 1} sum_{i <= n} |S(i, chi_{k,psi})|."""
    from .characters import chi
    from .sums import exact_sum

    total = 0.0
    for c in range(1, spec.q):
        ch = chi(spec, k, c)
        for i in range(n + 1):
            total += abs(exact_sum(ch, i))
    return total / spec.q ** n


def linear_combination_distribution(n: int, a, spec: FieldSpec, mode: str = "exact",
                                    samples: int = 10000, seed: int = 0) -> TraceDistribution:
    """Law of sum_i a_i Tr(g^i) with the character-sum bound on its L1 distance."""
    from .characters import xi
    from .sums import exact_sum

    a = [int(x) for x in a]
    terms = tuple((i + 1, x) for i, x in enumerate(a) if x)
    if mode == "exact":
        check_budget(spec, n)
        if not terms:
            masses = [Fraction(0)] * spec.q
            masses[0] = Fraction(1)
        else:
            masses = _pgl_code_distribution(spec, n, terms)
        dist = TraceDistribution(spec, masses, "exact_pgl")
    elif mode == "empirical":
        mats = sample_many(n, spec, samples, seed)
        vf = batch.VecField(spec)
        F = np.array([char_poly(g).coeffs for g in mats], dtype=np.int64).reshape(len(mats), -1)
        acc = np.zeros(len(mats), dtype=np.int64)
        if terms:
            ps = batch.newton(vf, F, max(i for i, _ in terms))
            for i, x in terms:
                acc = vf.add(acc, vf.mul(ps[:, i], x))
        counts = np.bincount(acc, minlength=spec.q)
        dist = TraceDistribution(spec, [float(c) / samples for c in counts], "empirical")
    else:
        raise ValueError("mode must be exact or empirical")
    rhs = 0.0
    if terms:
        for c in range(1, spec.q):
            ix = xi(spec, a, c).iota()
            for i in range(n + 1):
                rhs += abs(exact_sum(ix, i))
    dist.bound_rhs = rhs / spec.q ** n
    return dist


# -- counterexample constructions ------------------------------------------

def product_of_irreducibles(spec: FieldSpec, n: int, char_safe: bool = False) -> MonicPoly:
    """F = product of all monic irreducibles of degree <= n.

    With ``char_safe`` the polynomial T F is returned when char | deg F (so
    that the constant term of the induced combination can be dropped)."""
    F = MonicPoly.one(spec)
    for d in range(1, n + 1):
        for P in irreducibles(spec, d):
            F = F * P
    if char_safe and F.degree % spec.p == 0:
        F = F * MonicPoly.T(spec)
    return F


def combination_from_product(F: MonicPoly) -> list[int]:
    """(a_1, ..., a_D) = coefficients of F with a_0 dropped."""
    return list(F.full[1:])


def vanishes_on_small_fields(F: MonicPoly, max_d: int = 3) -> bool:
    """F(lambda) = 0 for every lambda in F_{q^d}, d <= max_d."""
    for d in range(1, max_d + 1):
        ext = extend_field(F.spec, d)
        for x in range(ext.field.q):
            if F.evaluate(ext, x) != 0:
                return False
    return True


def convolution_check(n: int, spec: FieldSpec) -> tuple[bool, str | None]:
    """P_GL = alpha_1 * alpha_2 on M_{n,q}, exactly, where alpha_1(f) =
    |f|^{-1} 1_{T not | f} and alpha_2(f) = P_GL(f) / |f|."""
    from .characters import product_index

    q = spec.q
    tab = factor_table(spec, n)
    lhs = pgl_masses(spec, n)
    rhs = np.array([Fraction(0)] * q ** n, dtype=object)
    for a in range(n + 1):
        b = n - a
        unit_a = np.array([True] if a == 0 else tab.coprime_to_T[tab.degree_slice(a)])
        al1 = np.where(unit_a, Fraction(1, q ** a), Fraction(0)).astype(object)
        al2 = (pgl_masses(spec, b) * Fraction(1, q ** b)).astype(object)
        if a == 0:
            idx = np.arange(q ** b).reshape(1, -1)
        elif b == 0:
            idx = np.arange(q ** a).reshape(-1, 1)
        else:
            idx = product_index(spec, a, b)
        contrib = al1[:, None] * al2[None, :]
        for i in range(idx.shape[0]):
            if al1[i] == 0:
                continue
            np.add.at(rhs, idx[i], contrib[i])
    for loc in range(q ** n):
        if lhs[loc] != rhs[loc]:
            return False, str(MonicPoly.from_index(spec, n, loc))
    return True, None

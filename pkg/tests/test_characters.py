import math
import random

import pytest

from tracechar.characters import (PrincipalCharacterError, build_lfunction, chi, chi_eval,
                                  inverse_root_power_sums, iota_transform, parse_character,
                                  verify_dirichlet, verify_primitive, xi, xi_eval)
from tracechar.ffield import AdditiveCharacter, gf
from tracechar.fpoly import MonicPoly, enumerate_monic, parse_poly
from tracechar.kexpr import eval_k
from tracechar.sums import exact_sum, prime_sum_poly


def test_chi_examples():
    s = gf(2)
    ch = chi(s, 1)
    assert chi_eval(ch, MonicPoly.one(s)) == 1
    assert chi_eval(ch, parse_poly("T^3+T", s)) == 0
    assert chi_eval(ch, parse_poly("T+1", s)) == -1


def test_xi_examples():
    s = gf(2)
    assert xi_eval(xi(s, [0, 0]), parse_poly("T^3+T+1", s)) == 1
    assert xi_eval(xi(s, [1]), parse_poly("T^2+T+1", s)) == -1


def test_iota_xi_equals_chi():
    for q in (2, 3):
        s = gf(q)
        for k in range(1, 6):
            for c in range(1, q):
                a = [0] * (k - 1) + [1]
                ix = iota_transform(xi(s, a, c))
                ch = chi(s, k, c)
                for n in range(0, 9 if q == 2 else 6):
                    for f in enumerate_monic(s, n):
                        assert abs(ix(f) - ch(f)) < 1e-12


def test_chi_multiplicative_random_pairs():
    rng = random.Random(4)
    for q in (2, 3, 4):
        s = gf(q)
        for _ in range(60):
            ch = chi(s, rng.randint(1, 9), rng.randint(1, q - 1))
            a, b = rng.randint(0, 5), rng.randint(0, 5)
            f = MonicPoly.from_index(s, a, rng.randrange(q ** a))
            g = MonicPoly.from_index(s, b, rng.randrange(q ** b))
            assert abs(ch(f * g) - ch(f) * ch(g)) < 1e-12


def test_chi_periodic_mod_t_power():
    s = gf(2)
    for k in range(1, 5):
        ch = chi(s, k)
        seen = {}
        for n in range(0, 9):
            for f in enumerate_monic(s, n):
                if f.constant() == 0:
                    continue
                key = tuple((f.full + [0] * (k + 1))[: k + 1])
                seen.setdefault(key, ch(f))
                assert abs(seen[key] - ch(f)) < 1e-12


def test_xi_depends_on_top_coefficients():
    s = gf(2)
    for k in range(1, 5):
        for a_code in range(1, 2 ** k):
            a = [(a_code >> i) & 1 for i in range(k)]
            x = xi(s, a)
            for n in range(k, 9):
                seen = {}
                for f in enumerate_monic(s, n):
                    key = tuple(f.full[n - k:])
                    seen.setdefault(key, x(f))
                    assert seen[key] == x(f)


def test_verify_dirichlet_examples():
    s2, s3 = gf(2), gf(3)
    assert verify_dirichlet(xi(s2, [0, 1]).iota(), MonicPoly.T(s2, 3), 8)
    assert verify_dirichlet(chi(s3, 1), MonicPoly.T(s3, 2), 6)
    rep = verify_dirichlet(lambda f: 1, MonicPoly.T(s2), 4)
    assert not rep and rep.reason == "vanishing"
    assert rep.witness["f"] == "T"


def test_verify_dirichlet_catches_non_multiplicative():
    s = gf(3)
    rep = verify_dirichlet(lambda f: 0 if f.constant() == 0 else (1 if f.degree < 2 else -1),
                           MonicPoly.T(s), 4)
    assert not rep and rep.reason in ("periodicity", "multiplicativity")


def test_verify_primitive_examples():
    assert verify_primitive(xi(gf(3), [1]).iota(), 1)
    rep = verify_primitive(xi(gf(2), [0, 1]).iota(), 2)
    assert not rep.regime_covered
    assert rep.note
    triv = verify_primitive(xi(gf(3), [1], 0).iota(), 1)
    assert not triv


def test_parse_character():
    s = gf(3)
    assert parse_character("chi:k=5,psi=2", s) == chi(s, 5, 2)
    assert parse_character("iota_xi:a=[0,1],psi=1", s) == xi(s, [0, 1]).iota()
    big = parse_character("chi:k=2^64+13,psi=1", s, eval_k)
    assert big.k == 2 ** 64 + 13
    with pytest.raises(ValueError):
        parse_character("chi:k=3", s)


def test_lfunction_examples():
    L = build_lfunction(chi(gf(2), 1))
    assert L.coeffs == [1, -1]
    assert L.degree == 1
    assert inverse_root_power_sums(L, 5) == [1] * 5
    assert build_lfunction(chi(gf(2), 2)).degree <= 2
    with pytest.raises(PrincipalCharacterError):
        build_lfunction(chi(gf(3), 2, 0))


def test_lfunction_termination():
    for q in (2, 3):
        s = gf(q)
        for k in range(1, 7):
            ch = chi(s, k)
            assert exact_sum(ch, k + 1).is_zero()
            assert exact_sum(ch, k + 2).is_zero()


def test_roots_and_newton_q2():
    s = gf(2)
    for k in range(1, 7):
        L = build_lfunction(chi(s, k))
        for r in L.roots():
            assert min(abs(abs(r) - 1), abs(abs(r) - math.sqrt(2))) < 1e-6
        sn = L.inverse_root_power_sums_exact(8)
        for n in range(1, 9):
            assert prime_sum_poly(chi(s, k), n) == -sn[n - 1]


def test_values_by_enumeration_match_code_arrays():
    from tracechar.sieve import factor_table

    s = gf(4)
    ch = chi(s, 2 ** 64 + 13, 3)
    ex = ch.exponent_array(4)
    tab = factor_table(s, 4)
    for n in range(5):
        base = int(tab.off[n])
        for f in enumerate_monic(s, n):
            e = ex[base + f.index]
            if e < 0:
                assert ch(f) == 0
            else:
                assert abs(ch(f) - complex(ch.cyclo(f))) < 1e-12
                assert abs(ch(f) - AdditiveCharacter(s, 3)(ch.code(f))) < 1e-12

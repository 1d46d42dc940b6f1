import math
import random

import pytest

from tracechar.characters import GeneralPowerCharacter, build_lfunction, chi, xi
from tracechar.cyclo import CycloInt
from tracechar.ffield import AdditiveCharacter, gf
from tracechar.gcdsum import gcd_qd
from tracechar.sieve import factor_table, prime_counts
from tracechar.sums import (DegreeSet, appendix_bound, char_sum, crit_set, crit_start, exact_sum,
                            mv_bound_terms, mv_decompose, powersum_distribution, prime_sum_field,
                            prime_sum_poly, prime_sum_poly_fast, prop_crit_rhs, sieve_count)


def one(q):
    return GeneralPowerCharacter((), AdditiveCharacter(gf(q), 1))


def test_trivial_character_sum():
    for q, n in [(2, 5), (3, 4), (4, 3)]:
        assert exact_sum(one(q), n).as_integer() == q ** n


def test_orthogonality_example():
    assert exact_sum(chi(gf(2), 2), 4).is_zero()


def test_xi_sum_is_partial_sum_of_chi():
    s = gf(2)
    for n in range(0, 9):
        lhs = exact_sum(xi(s, [1]), n)
        rhs = sum((exact_sum(chi(s, 1), i) for i in range(n + 1)), CycloInt.integer(2, 0))
        assert lhs == rhs


def test_weighted_sums_agree_with_direct_loop():
    s = gf(3)
    ch = chi(s, 4, 2)
    for weight in ("unit", "lambda", "mu", "pgl"):
        fast = char_sum(ch, 4, weight)
        slow = char_sum(lambda f, c=ch: c(f), 4, weight, spec=s)
        assert abs(fast.value - slow.value) < 1e-9


def test_workers_do_not_change_exact_sums():
    ch = chi(gf(3), 7)
    assert exact_sum(ch, 8, workers=1) == exact_sum(ch, 8, workers=3)


def test_prime_sum_examples():
    s = gf(2)
    assert prime_sum_poly(chi(s, 1), 1).as_integer() == -1
    assert prime_sum_poly(chi(s, 3), 2).as_integer() == 3
    v = prime_sum_poly(chi(s, 7), 4)
    assert abs(v) <= 4 * math.gcd(7, 15)
    assert prime_sum_field(1, AdditiveCharacter(s, 1), 1).as_integer() == -1
    assert prime_sum_field(7, AdditiveCharacter(s, 1), 4) == prime_sum_field(1, AdditiveCharacter(s, 1), 4)
    assert prime_sum_field(5, AdditiveCharacter(gf(3), 0), 3).as_integer() == 26


@pytest.mark.parametrize("q", [2, 3, 4])
def test_field_side_equals_polynomial_side(q):
    s = gf(q)
    rng = random.Random(q)
    for n in range(1, 6):
        for _ in range(4):
            k = rng.randrange(1, 2 ** 80)
            c = rng.randrange(1, q)
            ch = chi(s, k, c)
            a = prime_sum_poly(ch, n)
            assert a == prime_sum_field(k, ch.psi, n)
            assert a == prime_sum_poly_fast(ch, n)
            assert abs(a) <= q ** (n / 2) * gcd_qd(k, q, n) + 1e-9


def test_mu_twist_difference_supported_on_prime_powers():
    s = gf(2)
    tab = factor_table(s, 10)
    P = prime_counts(s, 10)
    for k in (1, 3, 5):
        ch = chi(s, k)
        for d in range(1, 11):
            mu, lam = tab.moebius(d), tab.von_mangoldt(d)
            # mu * Lambda is -d on primes and vanishes on proper prime powers
            assert not ((mu != 0) & (lam > 0) & (lam != d)).any()
            diff = exact_sum(ch, d, "lambda") + exact_sum(ch, d, "prime") * (-d)
            bound = sum((d // e) * P[d // e - 1] for e in range(2, d + 1) if d % e == 0)
            assert abs(diff) <= bound + 1e-9
            assert bound <= 2 * 2 ** (d / 2)


def test_mv_examples():
    s = gf(2)
    a = one(2)
    sm, ro = mv_decompose(a, 4, DegreeSet.of(4, []))
    assert ro.is_zero() and sm.as_integer() == 16
    sm, ro = mv_decompose(a, 4, DegreeSet.of(4, range(1, 5)))
    assert sm.is_zero()
    # quartics over F_2 with no linear factor: T^4+T+1, T^4+T^3+1, T^4+T^3+T^2+T+1, (T^2+T+1)^2
    sm, ro = mv_decompose(a, 4, DegreeSet.of(4, [1]))
    assert sm.as_integer() == 4 and ro.as_integer() == 12
    assert mv_bound_terms(chi(s, 3), 6, DegreeSet.of(6, [])).bound == 0


def test_mv_bound_example():
    s = gf(2)
    S = DegreeSet.of(8, range(4, 9))
    ch = chi(s, 3)
    sm, ro = mv_decompose(ch, 8, S)
    b = mv_bound_terms(ch, 8, S)
    assert abs(ro) <= 2 ** 8 * b.rigorous
    assert abs(ro) <= 2 ** 8 * b.bound * b.kappa
    assert b.kappa >= 1


def test_mv_trivial_character_a2():
    S = DegreeSet.of(6, [3, 4, 5, 6])
    b = mv_bound_terms(one(3), 6, S)
    assert b.A2 == pytest.approx(sum(1 / d for d in S.members))


def test_mv_random_rigorous_bound():
    rng = random.Random(11)
    for _ in range(30):
        q = rng.choice((2, 3))
        n = rng.randint(2, 8)
        S = DegreeSet.of(n, [d for d in range(1, n + 1) if rng.random() < 0.5])
        ch = chi(gf(q), rng.randint(1, 12), rng.randint(1, q - 1))
        sm, ro = mv_decompose(ch, n, S)
        assert sm + ro == exact_sum(ch, n)
        assert abs(ro) <= q ** n * mv_bound_terms(ch, n, S).rigorous + 1e-9


def test_sieve_examples():
    s = gf(2)
    assert sieve_count(s, 5, DegreeSet.of(5, [])).dp == 32
    assert sieve_count(s, 2, DegreeSet.of(2, [1])).dp == 1
    assert sieve_count(s, 4, DegreeSet.of(4, [1, 2])).dp == 3


def test_sieve_matches_brute_force():
    rng = random.Random(12)
    for q in (2, 3):
        for n in range(1, 9):
            S = DegreeSet.of(n, [d for d in range(1, n + 1) if rng.random() < 0.4])
            r = sieve_count(gf(q), n, S)
            assert r.dp == r.brute and r.bound_ok


def test_crit_set_examples():
    assert len(crit_set(3, 2, 16)) == 0
    assert crit_start(2, 16) == 48
    S = crit_set(1, 2, 100)
    assert S.sorted() == list(range(crit_start(2, 100), 101))
    k = 1
    for i in range(1, 30):
        k *= 2 ** i - 1
    S = crit_set(k, 2, 200)
    assert all(d in S for d in range(crit_start(2, 200), 201) if gcd_qd(k, 2, d) == 1)
    assert any(d not in S for d in range(crit_start(2, 200), 201))


def test_prop_crit_rhs():
    assert prop_crit_rhs(3, 2, 16).value == pytest.approx(1 / 16 + 1)
    n = 2 ** 20
    val = prop_crit_rhs(1, 2, n).value
    want = 1 / n + math.exp(-sum(1 / d for d in range(241, n + 1)))
    assert val == pytest.approx(want, rel=1e-9)
    # prime k: the right side keeps decreasing along the grid
    vals = [prop_crit_rhs(1000003, 2, n).value for n in (2 ** 12, 2 ** 14, 2 ** 16)]
    assert vals[0] > vals[1] > vals[2]


def test_gcd_qd_never_materialises():
    assert gcd_qd(3, 2, 2) == 3
    assert gcd_qd(2 ** 61 - 1, 2, 61 * 10 ** 6) == 2 ** 61 - 1


def test_appendix_formula():
    res = appendix_bound(8, 2, 8)
    assert res.valid
    assert res.a == pytest.approx(math.log(math.log(8)))
    assert 0 < res.R < 1
    assert appendix_bound(3, 2, 5).status.startswith("trivial")
    res = appendix_bound(8, 2, 6)
    assert not res.valid and res.R < 6 / (5 * math.sqrt(2))


def test_appendix_holds_on_small_suite():
    for q in (2, 3):
        s = gf(q)
        for k in range(1, 8):
            ch = chi(s, k)
            d = build_lfunction(ch).degree
            for n in range(3, d + 1):
                res = appendix_bound(d, q, n)
                if res.valid:
                    assert abs(exact_sum(ch, n)) <= q ** (n / 2) * math.exp(res.bound_log)


def test_powersum_distribution_examples():
    s = gf(2)
    d = powersum_distribution(s, 2, 3)
    # p_3 over T^2, T^2+1, T^2+T, T^2+T+1 is 0, 0, 1, 0
    assert str(d.masses[0]) == "3/4"
    d = powersum_distribution(gf(3), 1, 2)
    assert list(map(str, d.masses)) == ["1/3", "2/3", "0"]
    d = powersum_distribution(s, 3, 1)
    assert d.l1_exact() == 0


def test_cube_comparison_near_ties():
    from tracechar.sums import _cube_below

    for q in (2, 3, 4):
        for d in range(3, 400, 3):
            r = q ** (d // 3)
            for g in (r - 1, r, r + 1):
                assert _cube_below(g, q, d) == (g ** 3 < q ** d)

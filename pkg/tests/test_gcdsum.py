import json
import math
from importlib import resources

import pytest

from tracechar.gcdsum import (ap_set, blk, blk_ratio, blk_trivial_bound, cyclotomic_at, divisors,
                              gcd_terms, lemma_sweep, mult_order, nu_p_factor, prod_q_minus_one)


def test_cyclotomic_examples():
    assert cyclotomic_at(1, 2) == 1
    assert cyclotomic_at(2, 2) == 3
    assert cyclotomic_at(6, 2) == 3
    for p in (2, 3, 5, 7, 11):
        for a in (2, 3, 10):
            assert cyclotomic_at(p, a) == (a ** p - 1) // (a - 1)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_cyclotomic_reconstruction(q):
    for n in range(1, 65):
        assert math.prod(cyclotomic_at(d, q) for d in divisors(n)) == q ** n - 1


def test_mult_order():
    assert mult_order(3, 2) == 2
    assert mult_order(7, 2) == 3
    assert mult_order(13, 1) == 1
    with pytest.raises(ValueError):
        mult_order(5, 10)


def test_ap_set_examples():
    assert ap_set(7, 2, 25).members == (3, 21)
    assert ap_set(2, 2, 50).members == ()
    assert ap_set(3, 2, 20).members == (2, 6, 18)


def test_ap_set_structure():
    primes = [p for p in range(2, 101) if all(p % r for r in range(2, p))]
    for p in primes:
        for a in (2, 3, 5, 10):
            assert ap_set(p, a, 200).matches, (p, a)


def test_blk_examples():
    assert blk(4, 1, 2) == 0
    assert blk(2, 3, 2) == pytest.approx(math.log(3), abs=1e-12)
    L = 3
    k = prod_q_minus_one(2, 1, 2 * L - 1)
    for d, g, _ in gcd_terms(L, k, 2):
        assert g == 2 ** d - 1


def test_trivial_bound():
    for q in (2, 3):
        for k in (2, 3, 7, 2 ** 64 + 13, prod_q_minus_one(q, 1, 12)):
            for L in range(1, 20):
                assert blk(L, k, q) <= blk_trivial_bound(L, k, q) + 1e-9


def test_nu_p_factor():
    exps, cof, full = nu_p_factor(2 ** 5 * 3 ** 2 * 101)
    assert exps == {2: 5, 3: 2, 101: 1} and cof == 1 and full
    big = (2 ** 61 - 1) * (2 ** 89 - 1)
    exps, cof, full = nu_p_factor(12 * big, limit=1000)
    assert exps == {2: 2, 3: 1} and cof == big and not full


def test_sweep_below_pinned_constant():
    path = resources.files("tracechar") / "goldens" / "lemma_sweep.json"
    pinned = json.loads(path.read_text())
    rows = lemma_sweep(pinned["seed"], pinned["q"], pinned["trials"], pinned["max_bits"],
                       pinned["max_L"])
    assert max(r[2] for r in rows) <= pinned["max_ratio"] * (1 + 1e-12)
    assert blk_ratio(2, 1, 2) == 0.0

from math import gcd

import pytest
from hypothesis import given, strategies as st

from cleangraph.ring import (
    complement_pairs,
    count_self_inverse_closed,
    crt,
    enumerate_idempotents,
    enumerate_self_inverse_units,
    enumerate_units,
    euler_phi,
    factorize,
    mod_inverse,
    ring_data,
)
from oracles import distinct_primes_scan, idempotents_scan, self_inverse_scan, units_scan


@pytest.mark.parametrize(
    "n, factors, m, k_total, k_odd",
    [
        (15, ((3, 1), (5, 1)), 0, 2, 2),
        (12, ((2, 2), (3, 1)), 2, 2, 1),
        (1, (), 0, 0, 0),
        (2, ((2, 1),), 1, 1, 0),
        (360, ((2, 3), (3, 2), (5, 1)), 3, 3, 2),
        (2**31 - 1, ((2**31 - 1, 1),), 0, 1, 1),
    ],
)
def test_factorize_examples(n, factors, m, k_total, k_odd):
    f = factorize(n)
    assert f.factors == factors
    assert (f.m, f.k_total, f.k_odd) == (m, k_total, k_odd)


def test_factorize_rejects_bad_input():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(-4)
    with pytest.raises(ValueError):
        factorize(2**63)
    with pytest.raises(TypeError):
        factorize(6.0)


@given(st.integers(min_value=1, max_value=10**9))
def test_factorization_invariants(n):
    f = factorize(n)
    prod = 1
    for p, a in f.factors:
        prod *= p**a
        assert a >= 1
    assert prod == n
    primes = f.primes
    assert list(primes) == sorted(set(primes))
    assert f.k_total == f.k_odd + (1 if f.m >= 1 else 0)
    assert f.m == dict(f.factors).get(2, 0)


@pytest.mark.parametrize("n, phi", [(15, 8), (1, 1), (36, 12), (2, 1), (97, 96), (1024, 512)])
def test_euler_phi_examples(n, phi):
    assert euler_phi(factorize(n)) == phi


def test_euler_phi_matches_gcd_count():
    for n in range(2, 600):
        assert euler_phi(factorize(n)) == len(units_scan(n))


@given(st.integers(1, 2000), st.integers(1, 2000))
def test_euler_phi_multiplicative(a, b):
    if gcd(a, b) == 1:
        assert euler_phi(factorize(a * b)) == euler_phi(factorize(a)) * euler_phi(factorize(b))


@pytest.mark.parametrize(
    "n, expected", [(15, [0, 1, 6, 10]), (12, [0, 1, 4, 9]), (7, [0, 1]), (1, [0]), (30, [0, 1, 6, 10, 15, 16, 21, 25])]
)
def test_idempotent_examples(n, expected):
    assert enumerate_idempotents(factorize(n)) == expected


def test_idempotents_match_scan_and_count():
    for n in range(2, 3000):
        f = factorize(n)
        ids = enumerate_idempotents(f)
        assert ids == idempotents_scan(n)
        assert len(ids) == 2 ** distinct_primes_scan(n)


@given(st.integers(2, 10**6))
def test_idempotent_complement_closure(n):
    ids = set(enumerate_idempotents(factorize(n)))
    assert {0, 1} <= ids
    assert all((1 - e) % n in ids for e in ids)


@pytest.mark.parametrize("n, expected", [(15, [1, 2, 4, 7, 8, 11, 13, 14]), (2, [1]), (12, [1, 5, 7, 11])])
def test_unit_examples(n, expected):
    assert enumerate_units(factorize(n)) == expected


@pytest.mark.parametrize("n, expected", [(15, [1, 4, 11, 14]), (12, [1, 5, 7, 11]), (3, [1, 2]), (8, [1, 3, 5, 7])])
def test_self_inverse_examples(n, expected):
    assert enumerate_self_inverse_units(factorize(n)) == expected


@pytest.mark.parametrize("fn", [enumerate_units, enumerate_self_inverse_units, count_self_inverse_closed])
def test_unit_ops_reject_n_below_2(fn):
    with pytest.raises(ValueError):
        fn(factorize(1))


@pytest.mark.parametrize("n, r", [(15, 4), (6, 2), (8, 4), (4, 2), (16, 4), (2, 1), (24, 8), (12, 4)])
def test_count_self_inverse_examples(n, r):
    assert count_self_inverse_closed(factorize(n)) == r


def test_self_inverse_count_matches_scan_small():
    for n in range(2, 3000):
        f = factorize(n)
        sinv = enumerate_self_inverse_units(f)
        assert sinv == self_inverse_scan(n)
        assert len(sinv) == count_self_inverse_closed(f)
        assert set(sinv) <= set(enumerate_units(f))


def test_phi_minus_r_even():
    for n in range(3, 3000):
        f = factorize(n)
        assert (euler_phi(f) - count_self_inverse_closed(f)) % 2 == 0


@pytest.mark.parametrize("u, n, inv", [(2, 15, 8), (1, 15, 1), (14, 15, 14), (1, 2, 1), (7, 12, 7)])
def test_mod_inverse_examples(u, n, inv):
    assert mod_inverse(u, n) == inv


def test_mod_inverse_rejects_non_units():
    with pytest.raises(ValueError):
        mod_inverse(6, 15)
    with pytest.raises(ValueError):
        mod_inverse(0, 7)


@given(st.integers(2, 10**5).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))))
def test_mod_inverse_involution(nu):
    n, u = nu
    if gcd(u, n) != 1:
        return
    v = mod_inverse(u, n)
    assert 1 <= v < n and u * v % n == 1
    assert mod_inverse(v, n) == u


def test_non_self_inverse_units_pair_up():
    rd = ring_data(105)
    rest = rd.non_self_inverse_units
    assert len(rest) == rd.phi - rd.r
    assert all(rd.inverse(u) in rest and rd.inverse(u) != u for u in rest)


def test_crt_recombines():
    assert crt([2, 3, 2], [3, 5, 7]) == 23
    assert crt([1, 0], [3, 5]) == 10


def test_complement_pairs():
    assert complement_pairs(factorize(15)) == [(6, 10)]
    pairs = complement_pairs(factorize(30))
    assert len(pairs) == 3
    assert all((a + b) % 30 == 1 for a, b in pairs)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from matsumset.errors import CapExceeded, ConfigInvalid, RangeTooLarge
from matsumset.integers import (
    IntSet,
    batch_int_det,
    class_multiplicities,
    det_bound,
    divides_W,
    divides_W_witness,
    integer_matrices,
    nu_p,
    omega_W,
    prime_factors,
    primes_in,
    resclass_census,
    sigma_p,
)


def test_nu_examples():
    assert nu_p(IntSet.interval(12), 5) == 5
    assert nu_p(IntSet.of([1, 2, 3]), 7) == 3
    assert nu_p(IntSet.of([3, 6, 9, 1]), 3) == 2


def test_sigma_examples():
    assert sigma_p(IntSet.interval(10), 3) == 34
    assert class_multiplicities(IntSet.interval(10), 3).tolist() == [3, 4, 3]
    for p in (2, 3, 11, 97):
        assert sigma_p(IntSet.of([42]), p) == 1
        assert sigma_p(IntSet.interval(p), p) == p


def test_primes_in_examples():
    assert primes_in(10, 20) == [11, 13, 17, 19]
    assert primes_in(2, 2) == [2]
    assert primes_in(90, 100) == [97]


def test_sieve_matches_naive_primality():
    assert primes_in(2, 3000) == [m for m in range(2, 3001) if oracles.is_prime_naive(m)]
    lo = 2**31 - 2000
    got = primes_in(lo, 2**31)
    assert got[-1] == 2**31 - 1
    assert all(prime_factors(m) == [m] for m in got[-5:])


def test_sieve_errors():
    for lo, hi in ((1, 10), (10, 5), (2, 2**31 + 1)):
        with pytest.raises(RangeTooLarge):
            primes_in(lo, hi)
    with pytest.raises(RangeTooLarge):
        primes_in(2, 2**27)


def test_intset_validation():
    with pytest.raises(ConfigInvalid):
        IntSet(5, ())
    with pytest.raises(ConfigInvalid):
        IntSet(5, (0, 1))
    with pytest.raises(ConfigInvalid):
        IntSet(5, (6,))
    assert IntSet(9, (3, 1, 3)).members == (1, 3)


def test_census_examples():
    c = resclass_census(IntSet.interval(100), 10)
    assert c.pass_fraction == 1.0
    assert [r[0] for r in c.rows] == [11, 13, 17, 19]
    assert all(r[1] == r[0] for r in c.rows)
    s = resclass_census(IntSet.of([7], N=50), 20)
    assert all(r[1] == 1 for r in s.rows)
    assert all(r[3] == (1 >= r[2]) for r in s.rows)
    assert s.to_json() == resclass_census(IntSet.of([7], N=50), 20).to_json()
    assert c.to_json()["log"] == "natural"
    assert c.target_count == pytest.approx(0.6 * 10 / math.log(10))


def test_census_superset_monotone():
    rng = np.random.default_rng(4)
    for _ in range(20):
        small = IntSet.of(rng.integers(1, 500, 30).tolist(), N=500)
        big = IntSet.of(list(small.members) + rng.integers(1, 500, 40).tolist(), N=500)
        a, b = resclass_census(small, 40), resclass_census(big, 40)
        for ra, rb in zip(a.rows, b.rows):
            assert rb[1] >= ra[1]
            assert rb[3] or not ra[3]
        assert b.pass_count >= a.pass_count


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(1, 300), min_size=1, max_size=60), st.integers(2, 400))
def test_cauchy_and_class_sums(members, p):
    t = IntSet.of(members, N=300)
    nu, sigma = nu_p(t, p), sigma_p(t, p)
    assert len(t) ** 2 <= nu * sigma
    assert int(class_multiplicities(t, p).sum()) == len(t)
    assert nu <= min(p, len(t))


@pytest.mark.parametrize("N", [1, 2, 7, 50, 199, 200])
def test_nu_of_interval(N):
    for p in range(2, 401):
        assert nu_p(IntSet.interval(N), p) == min(p, N)


def test_omega_examples():
    one = IntSet.of([1])
    rep = omega_W(one, one, 2)
    assert rep.omega == 0 and rep.zero_det_pairs == 1 and rep.total_pairs == 1
    rep = omega_W(IntSet.of([1, 2]), one, 2)
    assert rep.primes == (2, 3, 5) and rep.omega == 3
    assert rep.zero_det_pairs == 6 and rep.total_pairs == 16


@pytest.mark.parametrize("r,s", [([1, 2], [1, 2]), ([1, 2, 3], [1]), ([2, 5], [1, 4])])
def test_omega_matches_oracle(r, s):
    primes, zeros = oracles.omega_primes(r, s, 2)
    rep = omega_W(IntSet.of(r), IntSet.of(s), 2)
    assert list(rep.primes) == primes
    assert rep.zero_det_pairs == zeros


def test_omega_matches_oracle_n3():
    primes, zeros = oracles.omega_primes([1, 2], [1], 3)
    rep = omega_W(IntSet.of([1, 2]), IntSet.of([1]), 3)
    assert list(rep.primes) == primes and rep.zero_det_pairs == zeros


def test_omega_frozen_123():
    rep = omega_W(IntSet.of([1, 2, 3]), IntSet.of([1, 2, 3]), 2)
    assert list(rep.primes) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert rep.zero_det_pairs == 655


@pytest.mark.parametrize("workers", [2, 8])
def test_omega_worker_invariance(workers):
    r, s = IntSet.of([1, 2, 3]), IntSet.of([1, 4])
    assert omega_W(r, s, 2, workers=workers) == omega_W(r, s, 2)


def test_divides_examples():
    assert divides_W(IntSet.of([1, 2]), IntSet.of([1]), 2, 5)
    one = IntSet.of([1])
    assert not any(divides_W(one, one, 2, p) for p in (2, 3, 5, 7, 1031))


def test_divides_agrees_with_omega_up_to_bound():
    r = s = IntSet.of([1, 2, 3])
    rep = omega_W(r, s, 2)
    bound = det_bound(2, 3)
    for p in primes_in(2, bound + 5):
        assert divides_W(r, s, 2, p) == (p in rep.primes)


def test_divides_witness_is_genuine():
    r, s = IntSet.of([1, 3, 4]), IntSet.of([2, 5])
    for p in (2, 3, 7, 11, 13):
        w = divides_W_witness(r, s, 2, p)
        if w is not None:
            d = oracles.int_det((w[0] + w[1]).ravel().tolist(), 2)
            assert d != 0 and d % p == 0


def test_divides_large_prime_path():
    # primes above the table limit use integer determinants reduced mod p
    r, s = IntSet.of([1, 400, 700]), IntSet.of([1, 600])
    rep = omega_W(r, s, 2)
    big = [p for p in rep.primes if p > 1024][:3]
    assert big
    for p in big:
        assert divides_W(r, s, 2, p)
    assert not divides_W(r, s, 2, next(p for p in primes_in(1031, 4000) if p not in rep.primes))


def test_integer_determinants():
    m = integer_matrices([1, 2, 3], 3)
    dets = batch_int_det(m)
    for i in range(0, m.shape[0], 97):
        assert dets[i] == oracles.int_det(m[i].ravel().tolist(), 3)
    assert batch_int_det(np.array([[[10**12, 1], [1, 10**12]]], dtype=object))[0] == 10**24 - 1


@settings(max_examples=100, deadline=None)
@given(st.integers(-10**9, 10**9).filter(bool))
def test_prime_factors_against_naive(m):
    got = prime_factors(m)
    assert all(oracles.is_prime_naive(p) for p in got[:3] if p < 10**5)
    rest = abs(m)
    for p in got:
        assert rest % p == 0
        while rest % p == 0:
            rest //= p
    assert rest == 1


def test_omega_errors():
    with pytest.raises(CapExceeded):
        omega_W(IntSet.interval(10), IntSet.interval(10), 2)
    with pytest.raises(ConfigInvalid):
        omega_W(IntSet.of([1]), IntSet.of([1]), 1)
    with pytest.raises(ConfigInvalid):
        divides_W(IntSet.of([1]), IntSet.of([1]), 2, 4)

import math
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from steiner_sieve.arith import (
    FactorizationBudgetExceeded,
    PrimePower,
    cyclotomic_value,
    divides_exp_minus_one,
    divisors,
    factorize,
    is_large,
    is_prime,
    multiplicative_order_is,
    prime_power,
    prime_powers_upto,
    zsigmondy_ppd,
)


def test_is_prime_examples():
    assert is_prime(757)
    assert not is_prime(1)
    assert not is_prime(1023)
    assert not is_prime(0) and is_prime(2)


def test_is_prime_matches_sympy_small():
    for n in range(3000):
        assert is_prime(n) == sympy.isprime(n)


def test_is_prime_large_known():
    assert is_prime(2**89 - 1)  # Mersenne prime, deterministic range
    assert not is_prime(2**83 - 1)
    assert is_prime(2**127 - 1)  # beyond the deterministic range
    assert not is_prime((2**61 - 1) * (2**89 - 1))
    # strong pseudoprime to many small bases
    assert not is_prime(3825123056546413051)


def test_factorize_examples():
    assert list(factorize(1023)) == [(3, 1), (11, 1), (31, 1)]
    assert list(factorize(64)) == [(2, 6)]
    assert list(factorize(19682)) == [(2, 1), (13, 1), (757, 1)]
    assert list(factorize(1)) == []


def test_factorize_semiprime_beyond_trial_division():
    p, q = 1000003, 998244353
    assert list(factorize(p * q)) == [(p, 1), (q, 1)]
    assert list(factorize(p**3 * 7)) == [(7, 1), (p, 3)]


def test_factorize_budget_without_accelerator():
    p, q = 2**61 - 1, 2**31 - 1
    with pytest.raises(FactorizationBudgetExceeded):
        factorize(p * (2**89 - 1), budget=1000, accelerate=False)
    assert list(factorize(p * q, accelerate=False)) == [(q, 1), (p, 1)]


def _check_factorization(n):
    f = factorize(n)
    assert f.value() == n
    ps = f.primes()
    assert ps == sorted(set(ps))
    assert all(sympy.isprime(p) for p in ps)


def test_factorize_roundtrip_random_128bit():
    rng = random.Random(20240917)
    for _ in range(1000):
        _check_factorization(rng.getrandbits(128) | 1 << 127)


@settings(max_examples=300)
@given(st.integers(1, 10**15))
def test_factorize_matches_sympy(n):
    assert dict(factorize(n)) == sympy.factorint(n)


def test_divisors_examples():
    assert divisors(63) == [1, 3, 7, 9, 21, 63]
    assert divisors(1) == [1]
    assert divisors(1023) == [1, 3, 11, 31, 33, 93, 341, 1023]


@given(st.integers(1, 10**9))
def test_divisors_closed_under_complement(n):
    ds = divisors(n)
    assert ds[0] == 1 and ds[-1] == n
    assert ds == sorted({n // d for d in ds})
    assert len(ds) == math.prod(m + 1 for _, m in factorize(n))


def test_prime_powers_upto():
    got = [(pp.p, pp.e, pp.q) for pp in prime_powers_upto(10)]
    assert got == [(2, 1, 2), (3, 1, 3), (2, 2, 4), (5, 1, 5), (7, 1, 7), (2, 3, 8), (3, 2, 9)]
    assert [pp.q for pp in prime_powers_upto(2)] == [2]
    qs = {pp.q: pp for pp in prime_powers_upto(32)}
    assert qs[32] == PrimePower(2, 5, 32)
    assert 33 not in qs and 36 not in qs


def test_prime_powers_oracle():
    got = [pp.q for pp in prime_powers_upto(5000)]
    want = [n for n in range(2, 5001) if len(sympy.factorint(n)) == 1]
    assert got == want


def test_prime_power_decomposition():
    assert prime_power(2187) == PrimePower(3, 7, 2187)
    assert prime_power(12) is None
    assert prime_power(1) is None
    with pytest.raises(ValueError):
        PrimePower(4, 2, 16)


def test_zsigmondy_examples():
    assert zsigmondy_ppd(2, 6) is None
    assert zsigmondy_ppd(3, 9) == 757
    assert zsigmondy_ppd(2, 10) == 11


def _ppd_bruteforce(q, n):
    primes = sympy.factorint(q**n - 1)
    prim = [r for r in primes if all((q**i - 1) % r for i in range(1, n))]
    return min(prim) if prim else None


def test_zsigmondy_sweep():
    for q in range(2, 21):
        if prime_power(q) is None:
            continue
        for n in range(3, 21):
            r = zsigmondy_ppd(q, n)
            if (q, n) == (2, 6):
                assert r is None
                continue
            assert r is not None and r % n == 1
            assert r == _ppd_bruteforce(q, n)


def test_zsigmondy_preconditions():
    with pytest.raises(ValueError):
        zsigmondy_ppd(6, 4)
    with pytest.raises(ValueError):
        zsigmondy_ppd(2, 2)


def test_cyclotomic_values():
    x = sympy.Symbol("x")
    for n in range(1, 25):
        assert cyclotomic_value(n, 3) == sympy.cyclotomic_poly(n, x).subs(x, 3)


def test_multiplicative_order():
    assert multiplicative_order_is(3, 9, 757)
    assert multiplicative_order_is(3, 3, 13)
    assert multiplicative_order_is(2, 3, 7)
    assert not multiplicative_order_is(2, 6, 7)
    assert not multiplicative_order_is(3, 9, 13)


def test_divides_exp_minus_one_examples():
    assert divides_exp_minus_one(3, 3, 9)
    assert not divides_exp_minus_one(2, 4, 10)
    assert divides_exp_minus_one(5, 2, 6)


def test_divides_exp_minus_one_both_directions():
    for r in range(2, 8):
        for a in range(1, 41):
            for b in range(1, 41):
                direct = (r**b - 1) % (r**a - 1) == 0
                assert divides_exp_minus_one(r, a, b) == direct == (b % a == 0)
                divides_exp_minus_one(r, a, b, verify=True)


def test_is_large_examples():
    assert is_large(29120, 29120)
    assert not is_large(20, 29120)
    assert is_large(448, 29120)
    with pytest.raises(ValueError):
        is_large(30000, 29120)

import random

import pytest

from quadprim.arith import (
    Factorization,
    ctx_for_prime_power,
    enumerate_odd_prime_powers,
    euler_phi,
    factorize,
    first_primes,
    is_prime,
    mobius,
    num_squarefree_divisors,
    prime_power_ctx,
    primes_upto,
    product_factorization,
    squarefree_odd_radical,
    w_bound_constant,
)


def brute_divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def test_is_prime_against_sieve():
    sieve = set(primes_upto(2000))
    for n in range(2000):
        assert is_prime(n) == (n in sieve), n


def test_is_prime_large_examples():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**67 - 1)  # 193707721 * 761838257287
    assert is_prime(1_000_000_007)
    assert not is_prime(1_000_000_007 * 1_000_000_009)


def reassemble(fact: Factorization) -> int:
    n = 1
    for p, e in fact.factors:
        n *= p**e
    return n


def test_factorize_reassembles_and_sorts():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randrange(2, 10**6)
        fact = factorize(n)
        assert reassemble(fact) == n
        primes = [p for p, _ in fact.factors]
        assert primes == sorted(primes)
        assert all(is_prime(p) for p in primes)


def test_factorize_semiprimes_beyond_trial_division():
    # forces the rho path: both factors above the trial division bound
    ps = [1_000_003, 1_000_033, 1_000_037, 15_485_863]
    for i, a in enumerate(ps):
        for b in ps[i:]:
            fact = factorize(a * b)
            assert reassemble(fact) == a * b
            assert set(fact.primes()) == {a, b}


def test_factorize_edge_cases():
    assert factorize(1).factors == ()
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(-6)


def test_mobius_sums_to_zero():
    # sum of mu(d) over divisors of n is 0 for n > 1
    for n in range(2, 500):
        assert sum(mobius(d) for d in brute_divisors(n)) == 0
    assert mobius(1) == 1
    assert mobius(12) == 0
    assert mobius(30) == -1


def test_euler_phi_divisor_sum():
    # sum of phi(d) over divisors of n is n (phi(1) = 1 special-cased)
    for n in range(2, 300):
        total = sum(euler_phi(factorize(d)) if d > 1 else 1
                    for d in brute_divisors(n))
        assert total == n


def test_euler_phi_examples():
    assert euler_phi(factorize(10)) == 4
    assert euler_phi(factorize(97)) == 96
    # the largest scan exception: phi((3541**2 - 1) / 2)
    assert euler_phi(factorize((3541**2 - 1) // 2)) == 1224960


def test_num_squarefree_divisors():
    assert num_squarefree_divisors(factorize(10200)) == 16
    assert num_squarefree_divisors(factorize(8)) == 2
    for n in (2, 6, 30, 210, 2310):
        fact = factorize(n)
        brute = sum(1 for d in brute_divisors(n) if mobius(d) != 0)
        assert num_squarefree_divisors(fact) == brute


def test_w_bound_constant_example():
    # for n = 30, a = 2 only the primes 2 and 3 are <= 2**a
    c = w_bound_constant(factorize(30), 2)
    assert c == pytest.approx(4 / 6**0.5, rel=1e-12)


def test_w_bound_constant_bounds_divisor_count():
    # 2**(number of distinct primes) <= c * n**(1/a) for any n, a
    rng = random.Random(7)
    pool = primes_upto(3000)
    for _ in range(200):
        primes = sorted(rng.sample(pool, rng.randrange(1, 7)))
        factors = tuple((p, rng.randrange(1, 4)) for p in primes)
        n = 1
        for p, e in factors:
            n *= p**e
        fact = Factorization(n, factors)
        for a in (2, 4, 8):
            bound = w_bound_constant(fact, a) * n ** (1.0 / a)
            assert num_squarefree_divisors(fact) <= bound * (1 + 1e-12)


def test_squarefree_odd_radical():
    assert squarefree_odd_radical(factorize(10200)) == 255
    assert squarefree_odd_radical(factorize(64)) == 1
    assert squarefree_odd_radical(factorize(3 * 3 * 5 * 8)) == 15


def test_product_factorization():
    f = product_factorization(factorize(12), factorize(18))
    assert reassemble(f) == 216
    assert f.factors == ((2, 3), (3, 3))


def test_prime_power_ctx_fields():
    ctx = prime_power_ctx(3541, 1)
    assert ctx.q == 3541
    assert ctx.fact_q2m1.factors == (
        (2, 3), (3, 1), (5, 1), (7, 1), (11, 1), (23, 1), (59, 1))
    assert ctx.two_adic_d == 3
    assert ctx.odd_part == (3541**2 - 1) // 8
    assert ctx.rprime == 3 * 5 * 7 * 11 * 23 * 59
    assert ctx.t_q == 7


def test_prime_power_ctx_two_adic_floor():
    # q odd means 8 divides q**2 - 1
    for q in (3, 5, 7, 9, 11, 25, 27, 121, 169):
        ctx = ctx_for_prime_power(q)
        assert ctx.two_adic_d >= 3
        assert (q * q - 1) % 2**ctx.two_adic_d == 0
        assert ctx.odd_part % 2 == 1


def test_ctx_for_prime_power_rejects_non_prime_powers():
    for bad in (1, 6, 12, 15, 100):
        with pytest.raises(ValueError):
            ctx_for_prime_power(bad)
    with pytest.raises(ValueError):
        prime_power_ctx(4, 2)


def test_first_primes():
    assert first_primes(5) == [2, 3, 5, 7, 11]
    assert first_primes(25)[-1] == 97


def test_enumerate_odd_prime_powers_small():
    got = [ctx.q for ctx in enumerate_odd_prime_powers(3, 30)]
    assert got == [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29]
    for ctx in enumerate_odd_prime_powers(3, 30):
        assert ctx.q == ctx.p**ctx.k


def test_enumerate_odd_prime_powers_window():
    got = [(ctx.q, ctx.p, ctx.k) for ctx in enumerate_odd_prime_powers(121, 128)]
    assert got == [(121, 11, 2), (125, 5, 3), (127, 127, 1)]


def test_enumerate_rejects_bad_range():
    with pytest.raises(ValueError):
        enumerate_odd_prime_powers(2, 10)
    with pytest.raises(ValueError):
        enumerate_odd_prime_powers(10, 5)

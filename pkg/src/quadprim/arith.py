"""Exact integer number theory for the verification pipeline.

Factorization (deterministic Miller-Rabin, trial division, Pollard-Brent
rho), the classical multiplicative functions, the square-free divisor
bound, and enumeration of odd prime powers together with the derived
data every later stage needs.  Everything here is exact integer
arithmetic; the only real-valued result is ``w_bound_constant``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt, log
from typing import Iterator

__all__ = [
    "TRIAL_DIVISION_BOUND",
    "Factorization",
    "PrimePowerCtx",
    "is_prime",
    "factorize",
    "mobius",
    "euler_phi",
    "num_squarefree_divisors",
    "w_bound_constant",
    "squarefree_odd_radical",
    "product_factorization",
    "prime_power_ctx",
    "ctx_for_prime_power",
    "enumerate_odd_prime_powers",
    "primes_upto",
    "first_primes",
]

TRIAL_DIVISION_BOUND = 10**6

# Witness set making Miller-Rabin deterministic for every n < 3.3 * 10**24,
# which covers all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Gaps of the mod-30 wheel starting from 7.
_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, exact for 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = ((d & -d).bit_length()) - 1
    d >>= r
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """A positive integer with its complete prime factorization.

    ``factors`` holds (prime, multiplicity) pairs with strictly ascending
    primes; the empty tuple factors 1.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def multiplicity(self, p: int) -> int:
        for prime, mult in self.factors:
            if prime == p:
                return mult
        return 0


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of odd composite n (Brent's cycle variant).

    The polynomial constant is swept deterministically so repeated runs
    split identically.
    """
    c = 1
    while True:
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r <<= 1
        if g != n:
            return g
        # Batch gcd overshot; replay one step at a time.
        g = 1
        y = ys
        while g == 1:
            y = (y * y + c) % n
            g = gcd(abs(x - y), n)
        if g != n:
            return g
        c += 1


def _split(m: int, acc: dict[int, int]) -> None:
    # m has no prime factor below the trial division bound
    stack = [m]
    while stack:
        v = stack.pop()
        if is_prime(v):
            acc[v] = acc.get(v, 0) + 1
            continue
        d = _pollard_brent(v)
        stack.append(d)
        stack.append(v // d)


def factorize(n: int) -> Factorization:
    """Factor a positive integer into prime powers.

    Trial division runs over a mod-30 wheel up to ``TRIAL_DIVISION_BOUND``
    (or sqrt(n) if smaller); whatever survives is split by Miller-Rabin
    plus Pollard-Brent rho.  Exact for every input below 2**64 and for
    larger inputs whose prime factors pass the witness set.
    """
    if n < 1:
        raise ValueError("factorize requires a positive integer")
    acc: dict[int, int] = {}
    m = n
    for p in (2, 3, 5):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            acc[p] = e
    d = 7
    wi = 0
    while d <= TRIAL_DIVISION_BOUND:
        if d * d > m:
            break
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            acc[d] = e
        d += _WHEEL[wi]
        wi = (wi + 1) & 7
    if m > 1:
        if d * d > m:
            acc[m] = acc.get(m, 0) + 1
        else:
            _split(m, acc)
    return Factorization(n, tuple(sorted(acc.items())))


def mobius(d: int, fact: Factorization | None = None) -> int:
    """Moebius function of d; ``fact`` may supply a known factorization."""
    if fact is None:
        fact = factorize(d)
    elif fact.value != d:
        raise ValueError("factorization does not match d")
    if any(mult > 1 for _, mult in fact.factors):
        return 0
    return -1 if len(fact.factors) % 2 else 1


def euler_phi(fact: Factorization) -> int:
    """Euler totient from a factorization."""
    result = 1
    for p, mult in fact.factors:
        result *= p ** (mult - 1) * (p - 1)
    return result


def num_squarefree_divisors(fact: Factorization) -> int:
    """Number of square-free divisors: 2 to the number of distinct primes."""
    return 1 << len(fact.factors)


def w_bound_constant(fact: Factorization, a: int) -> float:
    """Constant c with num_squarefree_divisors(R) <= c * R**(1/a).

    c = 2**j / (p_1 ... p_j)**(1/a) over the distinct primes of R that do
    not exceed 2**a; primes above 2**a can only shrink the quotient.
    """
    if a < 1:
        raise ValueError("a must be a positive integer")
    bound = 1 << a
    small = [p for p, _ in fact.factors if p <= bound]
    prod = 1
    for p in small:
        prod *= p
    return float(2 ** len(small)) / float(prod) ** (1.0 / a)


def squarefree_odd_radical(fact: Factorization) -> int:
    """Product of the distinct odd primes of the factored value."""
    result = 1
    for p, _ in fact.factors:
        if p != 2:
            result *= p
    return result


def product_factorization(f: Factorization, g: Factorization) -> Factorization:
    """Factorization of f.value * g.value from the two factor lists."""
    acc = dict(f.factors)
    for p, mult in g.factors:
        acc[p] = acc.get(p, 0) + mult
    return Factorization(f.value * g.value, tuple(sorted(acc.items())))


@dataclass(frozen=True)
class PrimePowerCtx:
    """Everything later stages need to know about one prime power q = p**k.

    fact_q2m1   factorization of q**2 - 1
    two_adic_d  multiplicity of 2 in q**2 - 1 (at least 3 for odd q)
    odd_part    (q**2 - 1) / 2**two_adic_d
    rprime      product of the distinct odd primes of q**2 - 1
    t_q         number of distinct primes of q**2 - 1
    """

    p: int
    k: int
    q: int
    fact_q2m1: Factorization
    two_adic_d: int
    odd_part: int
    rprime: int
    t_q: int


def prime_power_ctx(p: int, k: int) -> PrimePowerCtx:
    """Build the context for q = p**k; p must be prime, k >= 1."""
    if k < 1:
        raise ValueError("exponent k must be at least 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    q = p**k
    # q**2 - 1 factors through the two halves, both of size about q.
    fact = product_factorization(factorize(q - 1), factorize(q + 1))
    d = fact.multiplicity(2)
    odd_part = (q * q - 1) >> d
    return PrimePowerCtx(
        p=p,
        k=k,
        q=q,
        fact_q2m1=fact,
        two_adic_d=d,
        odd_part=odd_part,
        rprime=squarefree_odd_radical(fact),
        t_q=len(fact.factors),
    )


def ctx_for_prime_power(q: int) -> PrimePowerCtx:
    """Context for an arbitrary prime power given only its value."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    fact = factorize(q)
    if len(fact.factors) != 1:
        raise ValueError(f"{q} is not a prime power")
    p, k = fact.factors[0]
    return prime_power_ctx(p, k)


def primes_upto(n: int) -> list[int]:
    """All primes <= n by a byte sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            start = p * p
            sieve[start :: p] = bytearray(len(range(start, n + 1, p)))
    return [i for i in range(2, n + 1) if sieve[i]]


def first_primes(count: int) -> list[int]:
    """The first ``count`` primes in ascending order."""
    if count <= 0:
        return []
    if count < 6:
        return [2, 3, 5, 7, 11][:count]
    bound = int(count * (log(count) + log(log(count)))) + 10
    ps = primes_upto(bound)
    while len(ps) < count:
        bound *= 2
        ps = primes_upto(bound)
    return ps[:count]


def _odd_primes_in_range(lo: int, hi: int) -> Iterator[int]:
    # Segmented sieve so large intervals never materialize a full table.
    lo = max(lo, 3)
    if lo > hi:
        return
    base = primes_upto(isqrt(hi))
    block = 1 << 18
    for start in range(lo, hi + 1, block):
        end = min(start + block - 1, hi)
        seg = bytearray([1]) * (end - start + 1)
        for p in base:
            if p * p > end:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            seg[first - start :: p] = bytearray(len(range(first, end + 1, p)))
        for v in range(start | 1, end + 1, 2):
            if seg[v - start]:
                yield v


def enumerate_odd_prime_powers(lo: int, hi: int) -> list[PrimePowerCtx]:
    """Contexts for every odd prime power in [lo, hi], ascending in q."""
    if not 3 <= lo <= hi:
        raise ValueError("range must satisfy 3 <= lo <= hi")
    entries: list[tuple[int, int, int]] = [(v, v, 1) for v in _odd_primes_in_range(lo, hi)]
    for p in primes_upto(isqrt(hi)):
        if p == 2:
            continue
        value, k = p * p, 2
        while value <= hi:
            if value >= lo:
                entries.append((value, p, k))
            value *= p
            k += 1
    entries.sort()
    return [prime_power_ctx(p, k) for _, p, k in entries]

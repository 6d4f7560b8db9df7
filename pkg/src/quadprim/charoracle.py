"""Character-sum oracle over small quadratic extensions.

Multiplicative characters of F_{q**2}* are indexed against the chosen
primitive element a: chi_t(a**e) = exp(2*pi*i*t*e/m) with m = q**2 - 1.
On top of a discrete-log table (one multiplicative sweep, memoized per
field) this module evaluates

- translate sums  sum_{x in F_q} chi(theta + x),
- orthogonality-based indicators (n-free, k-th power residue, and the
  combined square-not-fourth-power-and-free indicator that picks out
  elements of order m/2),
- line target counts both by direct order tests and through the
  character expansion, and
- the sieve lower bound relating a count for a modulus to counts for a
  family of its divisors.

Everything here is exhaustive and floating-point based, so fields are
capped at q <= ORACLE_Q_CAP.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from weakref import WeakKeyDictionary

from .arith import euler_phi, factorize, mobius
from .ffield import FieldElem, QuadExtField

__all__ = [
    "ORACLE_Q_CAP",
    "CharIndex",
    "LineTargetCount",
    "SieveCheck",
    "TranslateSumSurvey",
    "LineIdentitySurvey",
    "trivial_character",
    "characters_of_order",
    "char_eval",
    "translate_character_sum",
    "translate_transversal",
    "mfree_indicator",
    "power_residue_indicator",
    "rfree_square_indicator",
    "rfree_square_indicator_expanded",
    "is_mfree_exact",
    "is_power_residue_exact",
    "line_target_count",
    "check_sieve_inequality",
    "survey_translate_sums",
    "survey_line_identities",
]

ORACLE_Q_CAP = 200

# Optional hard ceiling on the memoized table footprint, in bytes.
_DLOG_BYTES_ENV = "QUADPRIM_DLOG_MAX_BYTES"

_dlog_cache: "WeakKeyDictionary[QuadExtField, list[int]]" = WeakKeyDictionary()
_roots_cache: "WeakKeyDictionary[QuadExtField, list[complex]]" = WeakKeyDictionary()


def _require_oracle_field(fld: QuadExtField) -> None:
    if fld.q > ORACLE_Q_CAP:
        raise ValueError(
            f"oracle supports q <= {ORACLE_Q_CAP}, got q = {fld.q}")


def _pack(u: FieldElem, p: int) -> int:
    code = 0
    for c in reversed(u):
        code = code * p + c
    return code


def _dlog_table(fld: QuadExtField) -> list[int]:
    tbl = _dlog_cache.get(fld)
    if tbl is not None:
        return tbl
    _require_oracle_field(fld)
    m, p = fld.m, fld.p
    size = fld.q * fld.q
    budget = int(os.environ.get(_DLOG_BYTES_ENV, "0") or "0")
    if budget and (size * 8 + m * 16) > budget:
        raise RuntimeError(
            f"dlog table would exceed {_DLOG_BYTES_ENV}={budget} bytes")
    tbl = [-1] * size
    v = fld.one
    mul, a = fld.mul, fld.a
    for e in range(m):
        tbl[_pack(v, p)] = e
        v = mul(v, a)
    _dlog_cache[fld] = tbl
    return tbl


def _root_table(fld: QuadExtField) -> list[complex]:
    roots = _roots_cache.get(fld)
    if roots is None:
        _require_oracle_field(fld)
        m = fld.m
        step = 2.0 * math.pi / m
        roots = [cmath.exp(1j * step * e) for e in range(m)]
        _roots_cache[fld] = roots
    return roots


def dlog(u: FieldElem, fld: QuadExtField) -> int:
    """Exponent e with a**e == u; ValueError for the zero element."""
    e = _dlog_table(fld)[_pack(u, fld.p)]
    if e < 0:
        raise ValueError("zero has no discrete logarithm")
    return e


@dataclass(frozen=True)
class CharIndex:
    """Multiplicative character chi_t of exact order `order`."""

    t: int
    order: int


def trivial_character(fld: QuadExtField) -> CharIndex:
    return CharIndex(0, 1)


def characters_of_order(d: int, fld: QuadExtField) -> tuple[CharIndex, ...]:
    """All characters of exact order d, ascending in index t."""
    m = fld.m
    if d < 1 or m % d:
        raise ValueError(f"order {d} does not divide the group order {m}")
    base = m // d
    return tuple(CharIndex((base * j) % m, d)
                 for j in range(1, d + 1) if math.gcd(j, d) == 1)


def char_eval(chi: CharIndex, u: FieldElem, fld: QuadExtField) -> complex:
    return _root_table(fld)[(chi.t * dlog(u, fld)) % fld.m]


def translate_character_sum(chi: CharIndex, theta: FieldElem,
                            fld: QuadExtField) -> complex:
    """sum_{x in F_q} chi(theta + x) for theta outside F_q."""
    if fld.in_base_field(theta):
        raise ValueError("theta must lie outside the base field")
    roots = _root_table(fld)
    tbl = _dlog_table(fld)
    m, p, t = fld.m, fld.p, chi.t
    add = fld.add
    total = 0j
    for x in fld.base_field_elements():
        total += roots[(t * tbl[_pack(add(theta, x), p)]) % m]
    return total


def translate_transversal(fld: QuadExtField) -> tuple[FieldElem, ...]:
    """One representative per translate class, q - 1 in all, deterministic."""
    _require_oracle_field(fld)
    reps: list[FieldElem] = []
    seen: set[FieldElem] = set()
    target = fld.q - 1
    for u in fld.elements():
        uq = fld.frobenius_q(u)
        if uq == u:
            continue
        key = fld.sub(uq, u)
        if key not in seen:
            seen.add(key)
            reps.append(u)
            if len(reps) == target:
                break
    return tuple(reps)


# -- indicators ------------------------------------------------------------


def _squarefree_divisors(n: int) -> list[tuple[int, int]]:
    """(d, mu(d)) for squarefree divisors d of n."""
    out = [(1, 1)]
    for prime, _ in factorize(n).factors:
        out += [(d * prime, -mu) for d, mu in out]
    return out


def mfree_indicator(x: FieldElem, n: int, fld: QuadExtField) -> complex:
    """Character expansion of [x is n-free], i.e. no prime dividing n has
    x as one of its power residues.  n must divide the group order."""
    m = fld.m
    if n < 1 or m % n:
        raise ValueError(f"{n} does not divide the group order {m}")
    e = dlog(x, fld)
    roots = _root_table(fld)
    total = 0j
    for d, mu in _squarefree_divisors(n):
        phi = euler_phi(factorize(d))
        coeff = mu / phi
        for chi in characters_of_order(d, fld):
            total += coeff * roots[(chi.t * e) % m]
    theta_n = euler_phi(factorize(n)) / n
    return theta_n * total


def power_residue_indicator(x: FieldElem, k: int, fld: QuadExtField) -> complex:
    """Character expansion of [x is a k-th power].  k must divide the
    group order."""
    m = fld.m
    if k < 1 or m % k:
        raise ValueError(f"{k} does not divide the group order {m}")
    e = dlog(x, fld)
    roots = _root_table(fld)
    total = 0j
    for j in range(k):
        total += roots[((m // k) * j * e) % m]
    return total / k


def rfree_square_indicator(x: FieldElem, r: int, fld: QuadExtField) -> complex:
    """[x is r-free, a square, and not a fourth power], as the product of
    the two simpler indicators.  Picks out elements of order m/2 when r
    is the odd radical of m."""
    return mfree_indicator(x, r, fld) * (
        power_residue_indicator(x, 2, fld) - power_residue_indicator(x, 4, fld))


def rfree_square_indicator_expanded(x: FieldElem, r: int,
                                    fld: QuadExtField) -> complex:
    """Same quantity as rfree_square_indicator, written out as one double
    sum over combined character indices.  Independent code path used to
    cross-check the grouped form."""
    m = fld.m
    if r < 1 or m % r:
        raise ValueError(f"{r} does not divide the group order {m}")
    if m % 4:
        raise ValueError("group order must be divisible by 4")
    e = dlog(x, fld)
    roots = _root_table(fld)
    quartet = ((0, 1.0), (m // 2, 1.0), (m // 4, -1.0), (3 * m // 4, -1.0))
    total = 0j
    for d, mu in _squarefree_divisors(r):
        coeff = mu / euler_phi(factorize(d))
        for chi in characters_of_order(d, fld):
            for s, sign in quartet:
                total += coeff * sign * roots[(((chi.t + s) % m) * e) % m]
    theta_r = euler_phi(factorize(r)) / r
    return (theta_r / 4.0) * total


def is_mfree_exact(x: FieldElem, n: int, fld: QuadExtField) -> bool:
    """Order test: x is n-free iff x is no ell-th power for any prime
    ell dividing n."""
    m = fld.m
    if n < 1 or m % n:
        raise ValueError(f"{n} does not divide the group order {m}")
    if x == fld.zero:
        raise ValueError("zero is not in the multiplicative group")
    return all(fld.pow(x, m // ell) != fld.one
               for ell in factorize(n).primes())


def is_power_residue_exact(x: FieldElem, k: int, fld: QuadExtField) -> bool:
    m = fld.m
    if k < 1 or m % k:
        raise ValueError(f"{k} does not divide the group order {m}")
    if x == fld.zero:
        raise ValueError("zero is not in the multiplicative group")
    return fld.pow(x, m // k) == fld.one


# -- line target counts and the sieve --------------------------------------


@dataclass(frozen=True)
class LineTargetCount:
    """Count of x in F_q for which alpha * (theta + x) is an r-free
    square and not a fourth power, by exact order tests (direct) and by
    the character expansion (via_formula)."""

    q: int
    r: int
    direct: int
    via_formula: complex


def _direct_line_count(theta: FieldElem, alpha: FieldElem, r: int,
                       fld: QuadExtField) -> int:
    m, one = fld.m, fld.one
    ells = factorize(r).primes()
    half, quarter = m // 2, m // 4
    count = 0
    for x in fld.base_field_elements():
        u = fld.mul(alpha, fld.add(theta, x))
        if fld.pow(u, half) != one:
            continue
        if fld.pow(u, quarter) == one:
            continue
        if all(fld.pow(u, m // ell) != one for ell in ells):
            count += 1
    return count


def line_target_count(theta: FieldElem, alpha: FieldElem, r: int,
                      fld: QuadExtField) -> LineTargetCount:
    _require_oracle_field(fld)
    m = fld.m
    if fld.in_base_field(theta):
        raise ValueError("theta must lie outside the base field")
    if alpha == fld.zero:
        raise ValueError("alpha must be nonzero")
    if r < 1 or m % r:
        raise ValueError(f"{r} does not divide the group order {m}")

    direct = _direct_line_count(theta, alpha, r, fld)

    roots = _root_table(fld)
    tbl = _dlog_table(fld)
    p = fld.p
    # discrete logs of the q line elements, computed once
    logs = [tbl[_pack(fld.mul(alpha, fld.add(theta, x)), p)]
            for x in fld.base_field_elements()]
    quartet = ((0, 1.0), (m // 2, 1.0), (m // 4, -1.0), (3 * m // 4, -1.0))
    total = 0j
    for d, mu in _squarefree_divisors(r):
        coeff = mu / euler_phi(factorize(d))
        for chi in characters_of_order(d, fld):
            for s, sign in quartet:
                t = (chi.t + s) % m
                total += coeff * sign * sum(roots[(t * e) % m] for e in logs)
    theta_r = euler_phi(factorize(r)) / r
    return LineTargetCount(fld.q, r, direct, (theta_r / 4.0) * total)


@dataclass(frozen=True)
class SieveCheck:
    """Sieve lower bound for one (theta, alpha) pair: the count at the
    full modulus must be at least sum(part_counts) - (s - 1) * base_count."""

    q: int
    modulus: int
    base: int
    parts: tuple[int, ...]
    full_count: int
    base_count: int
    part_counts: tuple[int, ...]
    bound: int
    holds: bool


def check_sieve_inequality(theta: FieldElem, alpha: FieldElem, modulus: int,
                           base: int, parts: tuple[int, ...],
                           fld: QuadExtField) -> SieveCheck:
    """Validate the divisor family and test the sieve inequality with
    exact counts.  Every prime of the modulus must divide some part,
    the base must divide every part, and parts must divide the modulus."""
    _require_oracle_field(fld)
    m = fld.m
    if modulus < 1 or m % modulus or modulus % 2 == 0:
        raise ValueError("modulus must be an odd divisor of the group order")
    if not parts:
        raise ValueError("at least one part is required")
    for r in parts:
        if modulus % r:
            raise ValueError(f"part {r} does not divide the modulus {modulus}")
        if r % base:
            raise ValueError(f"base {base} does not divide part {r}")
    covered = set()
    for r in parts:
        covered.update(factorize(r).primes())
    if not set(factorize(modulus).primes()) <= covered:
        raise ValueError("parts do not cover the primes of the modulus")
    if fld.in_base_field(theta):
        raise ValueError("theta must lie outside the base field")
    if alpha == fld.zero:
        raise ValueError("alpha must be nonzero")

    full = _direct_line_count(theta, alpha, modulus, fld)
    base_count = _direct_line_count(theta, alpha, base, fld)
    part_counts = tuple(_direct_line_count(theta, alpha, r, fld)
                        for r in parts)
    bound = sum(part_counts) - (len(parts) - 1) * base_count
    return SieveCheck(fld.q, modulus, base, tuple(parts), full, base_count,
                      part_counts, bound, full >= bound)


# -- aggregate surveys (shared by tests and the command line) ---------------


@dataclass(frozen=True)
class TranslateSumSurvey:
    q: int
    characters: int
    translates: int
    max_deviation: float
    ok: bool


def survey_translate_sums(fld: QuadExtField, tol: float = 1e-6) -> TranslateSumSurvey:
    """Check every nontrivial character against every translate class.

    Characters trivial on F_q* (index divisible by q - 1) must sum to
    exactly -1; all others must have modulus sqrt(q).  Cost grows like
    q**4, so keep q small.
    """
    _require_oracle_field(fld)
    q, m = fld.q, fld.m
    sqrt_q = math.sqrt(q)
    reps = translate_transversal(fld)
    worst = 0.0
    checked = 0
    for t in range(1, m):
        chi = CharIndex(t, m // math.gcd(t, m))
        coset_character = t % (q - 1) == 0
        for theta in reps:
            b = translate_character_sum(chi, theta, fld)
            dev = abs(b + 1.0) if coset_character else abs(abs(b) - sqrt_q)
            if dev > worst:
                worst = dev
            checked += 1
    return TranslateSumSurvey(q, m - 1, len(reps), worst, worst <= tol)


@dataclass(frozen=True)
class LineIdentitySurvey:
    q: int
    r: int
    pairs: int
    max_deviation: float
    ok: bool


def survey_line_identities(fld: QuadExtField, r: int | None = None,
                           alphas: tuple[FieldElem, ...] | None = None,
                           tol: float = 1e-3) -> LineIdentitySurvey:
    """Compare direct and character-expansion line counts over every
    translate class for each given alpha (default: 1 and the primitive
    element).  r defaults to the odd radical of the group order."""
    _require_oracle_field(fld)
    if r is None:
        r = fld.ctx.rprime
    if alphas is None:
        alphas = (fld.one, fld.a)
    worst = 0.0
    pairs = 0
    for theta in translate_transversal(fld):
        for alpha in alphas:
            res = line_target_count(theta, alpha, r, fld)
            dev = abs(res.via_formula - res.direct)
            if dev > worst:
                worst = dev
            pairs += 1
    return LineIdentitySurvey(fld.q, r, pairs, worst, worst <= tol)

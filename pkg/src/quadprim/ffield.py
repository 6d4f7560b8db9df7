"""Concrete arithmetic for F_q and its quadratic extension, q = p**k odd.

The extension is realized as a single tower step F_p[x]/(f) of degree 2k,
with f the first monic irreducible polynomial in a fixed enumeration by
ascending coefficient code.  A context therefore always yields the same
modulus, the same primitive element and the same root of unity, on every
run and platform.

Elements are coordinate tuples of length 2k over F_p, constant term
first.  The subfield F_q sits inside as the fixed points of the q-power
map, which is precomputed as a linear map on coordinates.
"""

from __future__ import annotations

from math import gcd

from .arith import PrimePowerCtx

__all__ = [
    "FieldElem",
    "QuadExtField",
    "build_field",
    "translate_class_key",
    "line_class_key",
    "is_two_primitive_exponent",
]

FieldElem = tuple  # coordinate vector of length 2k over F_p


# -- polynomial helpers over F_p (little-endian coefficient lists) --------


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    # f monic; result reduced mod f
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    deg_f = len(f) - 1
    for t in range(len(res) - 1, deg_f - 1, -1):
        c = res[t]
        if c:
            res[t] = 0
            for i in range(deg_f):
                res[t - deg_f + i] = (res[t - deg_f + i] - c * f[i]) % p
    return _ptrim(res[:deg_f])


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    acc = list(base)
    while e:
        if e & 1:
            result = _pmulmod(result, acc, f, p)
        acc = _pmulmod(acc, acc, f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        monic = [(c * inv_lead) % p for c in b]
        # a mod monic
        r = list(a)
        while len(r) >= len(monic) and r:
            c = r[-1]
            if c:
                shift = len(r) - len(monic)
                for i, mc in enumerate(monic):
                    r[shift + i] = (r[shift + i] - c * mc) % p
            r.pop()
            _ptrim(r)
        a, b = monic, r
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial of degree >= 2 over F_p."""
    n = len(f) - 1
    x = [0, 1]
    # distinct prime divisors of the degree
    divs = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            divs.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        divs.append(m)
    for r in divs:
        h = _ppowmod(x, p ** (n // r), f, p)
        diff = list(h)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, _ptrim(diff), p)) != 1:
            return False
    h = _ppowmod(x, p**n, f, p)
    return _ptrim([(c - (1 if i == 1 else 0)) % p for i, c in enumerate(h + [0, 0])]) == []


class QuadExtField:
    """Arithmetic for F_{q**2} = F_p[x]/(f) with q = p**k odd.

    Immutable after construction.  All derived data (modulus, primitive
    element ``a``, root of unity ``zeta``, q-power map) is deterministic
    in the context.
    """

    def __init__(self, ctx: PrimePowerCtx):
        if ctx.q % 2 == 0:
            raise ValueError("context must describe an odd prime power")
        self.ctx = ctx
        self.p = ctx.p
        self.k = ctx.k
        self.q = ctx.q
        self.deg = 2 * ctx.k
        self.m = ctx.q * ctx.q - 1
        self.zero: FieldElem = (0,) * self.deg
        self.one: FieldElem = (1,) + (0,) * (self.deg - 1)
        self.modulus = self._find_modulus()
        self._init_reduction()
        self._frobq_cols = self._build_frobenius_columns()
        self.a = self._find_primitive()
        self.zeta = self.pow(self.a, ctx.odd_part)

    def __repr__(self) -> str:  # pragma: no cover
        return f"QuadExtField(q={self.q}, p={self.p}, k={self.k})"

    # -- construction -----------------------------------------------------

    def _find_modulus(self) -> tuple[int, ...]:
        """First monic irreducible of degree 2k by ascending coefficient code."""
        p, deg = self.p, self.deg
        if deg == 2:
            for code in range(p * p):
                c0, c1 = code % p, code // p
                disc = (c1 * c1 - 4 * c0) % p
                if disc and pow(disc, (p - 1) // 2, p) == p - 1:
                    return (c0, c1, 1)
            raise AssertionError("no irreducible quadratic found")
        code = 0
        while True:
            coeffs = []
            v = code
            for _ in range(deg):
                coeffs.append(v % p)
                v //= p
            f = coeffs + [1]
            if _is_irreducible(f, p):
                return tuple(f)
            code += 1

    def _init_reduction(self) -> None:
        # rows[i] = coordinates of x**(deg+i) modulo the modulus
        p, deg = self.p, self.deg
        f = self.modulus
        top = [(-c) % p for c in f[:deg]]
        rows = [tuple(top)]
        cur = list(top)
        for _ in range(deg - 2):
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                cur = [(ci + carry * ti) % p for ci, ti in zip(cur, top)]
            rows.append(tuple(cur))
        self._red = tuple(rows)
        if deg == 2:
            self._r20, self._r21 = rows[0]

    def _build_frobenius_columns(self) -> tuple[FieldElem, ...]:
        x = (0, 1) + (0,) * (self.deg - 2)
        xq = self._pow_raw(x, self.q)
        cols = [self.one]
        for _ in range(self.deg - 1):
            cols.append(self.mul(cols[-1], xq))
        return tuple(cols)

    def _find_primitive(self) -> FieldElem:
        cofactors = [self.m // r for r in self.ctx.fact_q2m1.primes()]
        code = self.p
        while True:
            u = self.element_from_index(code)
            if all(self._pow_raw(u, cf) != self.one for cf in cofactors):
                return u
            code += 1

    # -- element arithmetic -------------------------------------------------

    def add(self, u: FieldElem, v: FieldElem) -> FieldElem:
        p = self.p
        return tuple((a + b) % p for a, b in zip(u, v))

    def sub(self, u: FieldElem, v: FieldElem) -> FieldElem:
        p = self.p
        return tuple((a - b) % p for a, b in zip(u, v))

    def neg(self, u: FieldElem) -> FieldElem:
        p = self.p
        return tuple((-a) % p for a in u)

    def mul(self, u: FieldElem, v: FieldElem) -> FieldElem:
        p = self.p
        if self.deg == 2:
            u0, u1 = u
            v0, v1 = v
            t = u1 * v1
            return ((u0 * v0 + t * self._r20) % p, (u0 * v1 + u1 * v0 + t * self._r21) % p)
        deg = self.deg
        conv = [0] * (2 * deg - 1)
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    conv[i + j] += ui * vj
        red = self._red
        for t in range(2 * deg - 2, deg - 1, -1):
            c = conv[t] % p
            if c:
                row = red[t - deg]
                for i, ri in enumerate(row):
                    conv[i] += c * ri
        return tuple(c % p for c in conv[:deg])

    def scalar(self, c: int) -> FieldElem:
        return (c % self.p,) + (0,) * (self.deg - 1)

    def _pow_raw(self, u: FieldElem, e: int) -> FieldElem:
        result = self.one
        acc = u
        while e:
            if e & 1:
                result = self.mul(result, acc)
            acc = self.mul(acc, acc)
            e >>= 1
        return result

    def pow(self, u: FieldElem, e: int) -> FieldElem:
        """u**e; the exponent is reduced mod q**2 - 1 for nonzero u."""
        if u == self.zero:
            if e == 0:
                return self.one
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return self.zero
        return self._pow_raw(u, e % self.m)

    def inv(self, u: FieldElem) -> FieldElem:
        if u == self.zero:
            raise ZeroDivisionError("zero has no inverse")
        return self._pow_raw(u, self.m - 1)

    def frobenius_q(self, u: FieldElem) -> FieldElem:
        """The q-power map, applied as a precomputed linear map."""
        p = self.p
        acc = [0] * self.deg
        for ci, col in zip(u, self._frobq_cols):
            if ci:
                for idx, cc in enumerate(col):
                    acc[idx] += ci * cc
        return tuple(v % p for v in acc)

    def in_base_field(self, u: FieldElem) -> bool:
        """True when u lies in F_q, i.e. u**q == u."""
        return self.frobenius_q(u) == u

    def element_order(self, u: FieldElem) -> int:
        if u == self.zero:
            raise ZeroDivisionError("zero has no multiplicative order")
        t = self.m
        for prime, mult in self.ctx.fact_q2m1.factors:
            for _ in range(mult):
                if t % prime:
                    break
                tt = t // prime
                if self._pow_raw(u, tt) == self.one:
                    t = tt
                else:
                    break
        return t

    # -- enumeration and indexing -----------------------------------------

    def element_from_index(self, n: int) -> FieldElem:
        p = self.p
        coords = []
        for _ in range(self.deg):
            coords.append(n % p)
            n //= p
        return tuple(coords)

    def index_of(self, u: FieldElem) -> int:
        n = 0
        for c in reversed(u):
            n = n * self.p + c
        return n

    def elements(self):
        """All q**2 elements, ascending in index_of."""
        for n in range(self.p**self.deg):
            yield self.element_from_index(n)

    def base_field_elements(self) -> list[FieldElem]:
        """The q elements of F_q: zero, then ascending powers of a**(q+1)."""
        out = [self.zero]
        b = self.pow(self.a, self.q + 1)
        cur = self.one
        for _ in range(self.q - 1):
            out.append(cur)
            cur = self.mul(cur, b)
        return out


def build_field(ctx: PrimePowerCtx) -> QuadExtField:
    """Construct the quadratic extension for an odd prime power context."""
    return QuadExtField(ctx)


def is_two_primitive_exponent(j: int, ctx: PrimePowerCtx) -> bool:
    """True when a**j has order (q**2 - 1)/2, i.e. gcd(j, q**2 - 1) == 2."""
    return gcd(j, ctx.q * ctx.q - 1) == 2


def translate_class_key(u: FieldElem, fld: QuadExtField) -> FieldElem:
    """Class invariant u**q - u of the translate set of u.

    Two elements outside F_q lie in the same set {theta + x : x in F_q}
    exactly when their keys coincide.  Raises for u in F_q, whose
    translate set is F_q itself and is never inspected.
    """
    uq = fld.frobenius_q(u)
    if uq == u:
        raise ValueError("element lies in the base field")
    return fld.sub(uq, u)


def line_class_key(u: FieldElem, gamma: FieldElem, fld: QuadExtField) -> FieldElem | None:
    """Class invariant of the line through u with slope gamma.

    The lines {gamma * (theta + x)} of a fixed gamma correspond to the
    translate sets of u/gamma.  Returns None when u/gamma lies in F_q,
    meaning u is on no line of gamma.
    """
    if gamma == fld.zero:
        raise ZeroDivisionError("gamma must be nonzero")
    v = fld.mul(u, fld.inv(gamma))
    vq = fld.frobenius_q(v)
    if vq == v:
        return None
    return fld.sub(vq, v)

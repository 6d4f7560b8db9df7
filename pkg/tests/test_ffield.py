import math

import pytest

from quadprim.arith import ctx_for_prime_power, euler_phi, factorize
from quadprim.ffield import (
    build_field,
    is_two_primitive_exponent,
    line_class_key,
    translate_class_key,
)

SMALL_QS = (3, 5, 7, 9, 11, 13, 25, 27)


@pytest.fixture(scope="module")
def fields():
    return {q: build_field(ctx_for_prime_power(q)) for q in SMALL_QS}


def test_field_axioms_sampled(fields):
    for q in (5, 9, 27):
        fld = fields[q]
        elems = list(fld.elements())
        sample = elems[:: max(1, len(elems) // 12)]
        for u in sample:
            for v in sample:
                assert fld.add(u, v) == fld.add(v, u)
                assert fld.mul(u, v) == fld.mul(v, u)
                assert fld.sub(fld.add(u, v), v) == u
                for w in sample[:4]:
                    lhs = fld.mul(u, fld.add(v, w))
                    rhs = fld.add(fld.mul(u, v), fld.mul(u, w))
                    assert lhs == rhs
            assert fld.mul(u, fld.one) == u
            assert fld.add(u, fld.zero) == u


def test_inverse_and_pow(fields):
    for q, fld in fields.items():
        for u in list(fld.elements())[1:]:
            assert fld.mul(u, fld.inv(u)) == fld.one
        assert fld.pow(fld.a, fld.m) == fld.one
        assert fld.pow(fld.a, -1) == fld.inv(fld.a)
        assert fld.pow(fld.zero, 0) == fld.one
        assert fld.pow(fld.zero, 5) == fld.zero
        with pytest.raises(ZeroDivisionError):
            fld.inv(fld.zero)
        with pytest.raises(ZeroDivisionError):
            fld.pow(fld.zero, -2)


def test_primitive_element_order(fields):
    for q, fld in fields.items():
        assert fld.element_order(fld.a) == fld.m


def test_element_order_example(fields):
    fld = fields[5]
    a2 = fld.mul(fld.a, fld.a)
    assert fld.element_order(a2) == 12


def test_zeta_generates_two_part(fields):
    for q, fld in fields.items():
        d = fld.ctx.two_adic_d
        z = fld.zeta
        assert fld.pow(z, 1 << d) == fld.one
        half = fld.pow(z, 1 << (d - 1))
        assert half != fld.one
        assert fld.mul(half, half) == fld.one  # so half == -1
        assert half == fld.neg(fld.one)


def test_frobenius_is_field_automorphism(fields):
    for q in (9, 25, 27):
        fld = fields[q]
        elems = list(fld.elements())
        sample = elems[:: max(1, len(elems) // 20)]
        for u in sample:
            assert fld.frobenius_q(u) == fld.pow(u, q)
            for v in sample[:5]:
                assert fld.frobenius_q(fld.add(u, v)) == \
                    fld.add(fld.frobenius_q(u), fld.frobenius_q(v))
                assert fld.frobenius_q(fld.mul(u, v)) == \
                    fld.mul(fld.frobenius_q(u), fld.frobenius_q(v))


def test_base_field_is_frobenius_fixed(fields):
    for q, fld in fields.items():
        fixed = [u for u in fld.elements() if fld.in_base_field(u)]
        assert len(fixed) == q
        base = fld.base_field_elements()
        assert len(base) == q
        assert set(base) == set(fixed)
        assert base[0] == fld.zero
        assert base[1] == fld.one


def test_two_primitive_census(fields):
    # number of elements of order m/2 is phi(m/2)
    for q in (3, 5, 7, 9, 13):
        fld = fields[q]
        m = fld.m
        expected = euler_phi(factorize(m // 2))
        count = sum(
            1 for u in fld.elements()
            if u != fld.zero and fld.element_order(u) == m // 2)
        assert count == expected
        by_exponent = sum(
            1 for j in range(1, m) if is_two_primitive_exponent(j, fld.ctx))
        assert by_exponent == expected


def test_two_primitive_exponents_are_even(fields):
    fld = fields[13]
    for j in range(1, fld.m):
        if is_two_primitive_exponent(j, fld.ctx):
            assert j % 2 == 0
            assert fld.element_order(fld.pow(fld.a, j)) == fld.m // 2


def test_translate_key_partitions(fields):
    for q in (5, 9, 13):
        fld = fields[q]
        buckets = {}
        for u in fld.elements():
            if fld.in_base_field(u):
                with pytest.raises(ValueError):
                    translate_class_key(u, fld)
                continue
            buckets.setdefault(translate_class_key(u, fld), []).append(u)
        # q - 1 classes of size q partition the complement of F_q
        assert len(buckets) == q - 1
        assert all(len(v) == q for v in buckets.values())


def test_translate_key_constant_on_translates(fields):
    for q in (5, 27):
        fld = fields[q]
        theta = next(u for u in fld.elements() if not fld.in_base_field(u))
        key = translate_class_key(theta, fld)
        for x in fld.base_field_elements():
            assert translate_class_key(fld.add(theta, x), fld) == key


def test_line_class_key(fields):
    fld = fields[5]
    gamma = fld.a
    # scaling a line element by gamma leaves the key of u/gamma fixed
    for u in fld.elements():
        if u == fld.zero:
            continue
        key = line_class_key(u, gamma, fld)
        v = fld.mul(u, fld.inv(gamma))
        if fld.in_base_field(v):
            assert key is None
        else:
            assert key == translate_class_key(v, fld)
    with pytest.raises(ZeroDivisionError):
        line_class_key(fld.one, fld.zero, fld)


def test_construction_is_deterministic():
    f1 = build_field(ctx_for_prime_power(9))
    f2 = build_field(ctx_for_prime_power(9))
    assert f1.modulus == f2.modulus
    assert f1.a == f2.a
    assert f1.zeta == f2.zeta


def test_modulus_is_minimal_code():
    # degree 2: the first monic x**2 + c1 x + c0 with non-residue discriminant
    for p in (3, 5, 7, 13):
        fld = build_field(ctx_for_prime_power(p))
        c0, c1, lead = fld.modulus
        assert lead == 1
        code = c1 * p + c0
        for earlier in range(code):
            e0, e1 = earlier % p, earlier // p
            disc = (e1 * e1 - 4 * e0) % p
            is_non_residue = disc != 0 and pow(disc, (p - 1) // 2, p) == p - 1
            assert not is_non_residue


def test_element_roundtrip(fields):
    for q, fld in fields.items():
        for n in range(0, q * q, max(1, q * q // 17)):
            assert fld.index_of(fld.element_from_index(n)) == n


def test_rejects_even_context():
    with pytest.raises(ValueError):
        build_field(ctx_for_prime_power(4))


def test_element_count(fields):
    for q in (3, 9):
        fld = fields[q]
        elems = list(fld.elements())
        assert len(elems) == q * q
        assert len(set(elems)) == q * q

import math
import random

import pytest

from quadprim.arith import ctx_for_prime_power, euler_phi, factorize
from quadprim.charoracle import (
    ORACLE_Q_CAP,
    CharIndex,
    char_eval,
    characters_of_order,
    check_sieve_inequality,
    dlog,
    is_mfree_exact,
    is_power_residue_exact,
    line_target_count,
    mfree_indicator,
    power_residue_indicator,
    rfree_square_indicator,
    rfree_square_indicator_expanded,
    survey_line_identities,
    survey_translate_sums,
    translate_character_sum,
    translate_transversal,
    trivial_character,
)
from quadprim.ffield import build_field


@pytest.fixture(scope="module")
def fields():
    return {q: build_field(ctx_for_prime_power(q)) for q in (5, 7, 9, 11, 13, 43)}


def test_dlog_roundtrip(fields):
    fld = fields[9]
    u = fld.one
    for e in range(fld.m):
        assert dlog(u, fld) == e
        u = fld.mul(u, fld.a)
    with pytest.raises(ValueError):
        dlog(fld.zero, fld)


def test_characters_census(fields):
    fld = fields[13]
    m = fld.m
    total = 0
    for d in range(1, m + 1):
        if m % d:
            continue
        chars = characters_of_order(d, fld)
        expected = euler_phi(factorize(d)) if d > 1 else 1
        assert len(chars) == expected
        total += len(chars)
    assert total == m
    with pytest.raises(ValueError):
        characters_of_order(5, fields[5])  # 5 does not divide 24


def test_char_eval_multiplicative(fields):
    fld = fields[7]
    rng = random.Random(3)
    elems = [u for u in fld.elements() if u != fld.zero]
    chars = [CharIndex(t, fld.m // math.gcd(t, fld.m)) for t in (1, 5, 8, 24)]
    for chi in chars:
        for _ in range(40):
            u, v = rng.choice(elems), rng.choice(elems)
            lhs = char_eval(chi, fld.mul(u, v), fld)
            rhs = char_eval(chi, u, fld) * char_eval(chi, v, fld)
            assert abs(lhs - rhs) < 1e-12


def test_character_orthogonality(fields):
    fld = fields[5]
    m = fld.m
    elems = [u for u in fld.elements() if u != fld.zero]
    # sum over the group of a nontrivial character vanishes
    for t in (1, 2, 7, 12):
        total = sum(char_eval(CharIndex(t, 0), u, fld) for u in elems)
        assert abs(total) < 1e-9
    # trivial character sums to the group size
    total = sum(char_eval(trivial_character(fld), u, fld) for u in elems)
    assert abs(total - m) < 1e-9


def test_translate_sum_values(fields):
    # nontrivial characters trivial on F_q* give exactly -1; all other
    # nontrivial characters give modulus sqrt(q)
    for q in (5, 7, 9, 11, 13):
        fld = fields[q]
        survey = survey_translate_sums(fld, tol=1e-6)
        assert survey.ok, (q, survey.max_deviation)
        assert survey.characters == fld.m - 1
        assert survey.translates == q - 1


def test_translate_sum_trivial_character(fields):
    fld = fields[7]
    theta = translate_transversal(fld)[0]
    total = translate_character_sum(trivial_character(fld), theta, fld)
    assert abs(total - 7) < 1e-9
    with pytest.raises(ValueError):
        translate_character_sum(trivial_character(fld), fld.one, fld)


def test_translate_transversal_is_transversal(fields):
    for q in (5, 9, 13):
        fld = fields[q]
        reps = translate_transversal(fld)
        assert len(reps) == q - 1
        keys = {fld.sub(fld.frobenius_q(u), u) for u in reps}
        assert len(keys) == q - 1


def test_indicators_match_exact_predicates(fields):
    for q in (9, 13):
        fld = fields[q]
        m = fld.m
        r = fld.ctx.rprime
        u = fld.one
        for _ in range(m - 1):
            u = fld.mul(u, fld.a)
            free = mfree_indicator(u, r, fld)
            assert abs(free - (1.0 if is_mfree_exact(u, r, fld) else 0.0)) < 1e-9
            sq = power_residue_indicator(u, 2, fld)
            assert abs(sq - (1.0 if is_power_residue_exact(u, 2, fld) else 0.0)) < 1e-9
            fourth = power_residue_indicator(u, 4, fld)
            assert abs(fourth - (1.0 if is_power_residue_exact(u, 4, fld) else 0.0)) < 1e-9


def test_two_primitive_indicator_forms_agree(fields):
    # product form == expanded double sum == exact order test
    for q in (9, 13):
        fld = fields[q]
        m = fld.m
        r = fld.ctx.rprime
        u = fld.one
        for _ in range(m - 1):
            u = fld.mul(u, fld.a)
            grouped = rfree_square_indicator(u, r, fld)
            expanded = rfree_square_indicator_expanded(u, r, fld)
            assert abs(grouped - expanded) < 1e-9
            exact = 1.0 if fld.element_order(u) == m // 2 else 0.0
            assert abs(grouped - exact) < 1e-6


def test_exact_predicates_reject_zero(fields):
    fld = fields[5]
    with pytest.raises(ValueError):
        is_mfree_exact(fld.zero, 3, fld)
    with pytest.raises(ValueError):
        is_power_residue_exact(fld.zero, 2, fld)
    with pytest.raises(ValueError):
        mfree_indicator(fld.one, 5, fld)  # 5 does not divide 24


def test_line_target_count_identity(fields):
    fld = fields[7]
    for theta in translate_transversal(fld):
        for alpha in (fld.one, fld.a):
            res = line_target_count(theta, alpha, 3, fld)
            assert abs(res.via_formula - res.direct) < 1e-3


def test_line_target_count_finds_empty_line(fields):
    # the line property fails at q = 5: some line holds no 2-primitive
    # element, and the count certifies it with r = the full odd radical
    fld = fields[5]
    r = fld.ctx.rprime
    counts = []
    for theta in translate_transversal(fld):
        for alpha in [fld.one, fld.a, fld.mul(fld.a, fld.a)]:
            counts.append(line_target_count(theta, alpha, r, fld).direct)
    assert min(counts) == 0


def test_line_target_count_all_positive_q43(fields):
    # q = 43 holds the line property, so every line carries at least one
    # element of order m/2; check alpha over the first slopes
    from quadprim.verify import build_gamma_set

    fld = fields[43]
    r = fld.ctx.rprime
    gammas = build_gamma_set(fld).gammas[:6]
    for theta in translate_transversal(fld)[:7]:
        for alpha in gammas:
            assert line_target_count(theta, alpha, r, fld).direct >= 1


def test_line_count_survey(fields):
    for q in (7, 11, 13):
        survey = survey_line_identities(fields[q], tol=1e-3)
        assert survey.ok, (q, survey.max_deviation)


def test_line_target_count_validation(fields):
    fld = fields[7]
    theta = translate_transversal(fld)[0]
    with pytest.raises(ValueError):
        line_target_count(fld.one, fld.a, 3, fld)  # theta in F_q
    with pytest.raises(ValueError):
        line_target_count(theta, fld.zero, 3, fld)
    with pytest.raises(ValueError):
        line_target_count(theta, fld.a, 5, fld)  # 5 does not divide 48


def test_sieve_inequality_random_families(fields):
    rng = random.Random(17)
    for q in (7, 11, 13, 43):
        fld = fields[q]
        ctx = fld.ctx
        primes = [p for p, _ in factorize(ctx.rprime).factors]
        reps = translate_transversal(fld)
        for _ in range(25):
            theta = rng.choice(reps)
            alpha = rng.choice((fld.one, fld.a, fld.mul(fld.a, fld.a)))
            if len(primes) > 1 and rng.random() < 0.5:
                # shared base: the first prime sits inside every part
                base = primes[0]
                parts = tuple(base * p for p in primes[1:])
            else:
                base = 1
                parts = tuple(primes)
            chk = check_sieve_inequality(theta, alpha, ctx.rprime, base,
                                         parts, fld)
            assert chk.holds, (q, chk)


def test_sieve_inequality_with_shared_base(fields):
    fld = fields[13]  # rprime = 21
    theta = translate_transversal(fld)[1]
    chk = check_sieve_inequality(theta, fld.a, 21, 3, (21,), fld)
    assert chk.holds
    chk = check_sieve_inequality(theta, fld.a, 21, 1, (3, 7), fld)
    assert chk.holds
    assert chk.bound == sum(chk.part_counts) - chk.base_count


def test_sieve_inequality_validation(fields):
    fld = fields[13]
    theta = translate_transversal(fld)[0]
    with pytest.raises(ValueError):  # parts do not cover 7
        check_sieve_inequality(theta, fld.a, 21, 1, (3,), fld)
    with pytest.raises(ValueError):  # base does not divide the part
        check_sieve_inequality(theta, fld.a, 21, 7, (3, 7), fld)
    with pytest.raises(ValueError):  # part does not divide the modulus
        check_sieve_inequality(theta, fld.a, 3, 1, (21,), fld)
    with pytest.raises(ValueError):  # even modulus
        check_sieve_inequality(theta, fld.a, 8, 1, (8,), fld)


def test_oracle_cap():
    fld = build_field(ctx_for_prime_power(211))
    assert 211 > ORACLE_Q_CAP
    with pytest.raises(ValueError):
        translate_transversal(fld)
    with pytest.raises(ValueError):
        survey_translate_sums(fld)


def test_dlog_budget_env(monkeypatch):
    monkeypatch.setenv("QUADPRIM_DLOG_MAX_BYTES", "1024")
    fld = build_field(ctx_for_prime_power(197))  # fresh field, no cached table
    with pytest.raises(RuntimeError):
        dlog(fld.one, fld)

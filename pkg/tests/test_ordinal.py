import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegarfn.ordinal import (
    EQ, GT, LT, OMEGA, ONE, ZERO, Ordinal, OrdinalError, add, compare, decode_nat,
    encode_nat, format_ordinal, is_code, mul, omega_pow, omega_tower, parse_ordinal, prec,
)

W = OMEGA
nat = Ordinal.nat
P = parse_ordinal


def poly(coeffs):
    """Ordinal with finite exponents from a {exponent: coefficient} dict."""
    return Ordinal.from_summands((nat(e), c) for e, c in coeffs.items())


# -- independent oracles for polynomial ordinals (finite exponents) --------

def as_vector(a, width=4):
    vec = [0] * width
    for e, c in a.terms:
        vec[e.finite_value()] = c
    return tuple(reversed(vec))


def oracle_add(a, b, width=4):
    va, vb = list(reversed(as_vector(a, width))), list(reversed(as_vector(b, width)))
    lead = max((i for i, c in enumerate(vb) if c), default=None)
    if lead is None:
        return tuple(reversed(va))
    out = [0] * width
    for i in range(width):
        if i > lead:
            out[i] = va[i]
        elif i == lead:
            out[i] = va[i] + vb[i]
        else:
            out[i] = vb[i]
    return tuple(reversed(out))


def test_compare_trivial():
    assert compare(ZERO, ONE) == LT
    assert compare(W, omega_pow(W)) == LT


def test_compare_lexicographic_oracle():
    # every CNF term with exponents <= 2 and coefficients <= 9 on a grid
    grid = [poly({2: a, 1: b, 0: c}) for a in range(0, 10, 3) for b in range(0, 10, 2) for c in range(0, 10, 4)]
    for x, y in itertools.product(grid, repeat=2):
        vx, vy = as_vector(x), as_vector(y)
        expected = LT if vx < vy else GT if vx > vy else EQ
        assert compare(x, y) == expected
    assert compare(P("w^2*3+w"), P("w^2*2+w*9+5")) == GT


def test_add_examples():
    assert add(ONE, W) == W
    assert add(W, ONE) == P("w+1")
    a, b = P("w^2+w*2"), P("w*3+1")
    assert as_vector(add(a, b)) == oracle_add(a, b)
    assert add(a, b) == P("w^2+w*5+1")


def test_add_matches_naive_oracle():
    vals = [poly({2: a, 1: b, 0: c}) for a in range(3) for b in range(3) for c in range(3)]
    for x, y in itertools.product(vals, repeat=2):
        assert as_vector(add(x, y)) == oracle_add(x, y)


def test_mul_examples():
    assert mul(W, nat(2)) == P("w*2")
    assert mul(P("w^2+3"), ZERO) == ZERO
    assert mul(nat(2), W) == W


def test_mul_finite_is_repeated_addition():
    vals = [poly({1: a, 0: c}) for a in range(3) for c in range(3)]
    for x in vals:
        for n in range(5):
            acc = ZERO
            for _ in range(n):
                acc = add(acc, x)
            assert mul(x, nat(n)) == acc


def test_two_times_omega_order_type():
    # 2*w is w copies of 2: every proper initial segment is finite
    assert all(mul(nat(2), nat(n)) == nat(2 * n) for n in range(20))
    assert mul(nat(2), W) == W


def test_omega_pow():
    assert omega_pow(ZERO) == ONE
    assert omega_pow(ONE) == W
    assert omega_pow(mul(W, nat(2))) == P("w^(w*2)")
    pool = [ZERO, ONE, nat(2), W, P("w+1"), P("w*2"), P("w^2"), P("w^w")]
    for a, b in itertools.combinations(sorted(pool), 2):
        assert compare(omega_pow(a), omega_pow(b)) == LT


def test_omega_tower():
    assert omega_tower(0) == ONE
    assert omega_tower(1) == W
    assert omega_tower(3) == omega_pow(omega_pow(omega_pow(ONE)))
    assert format_ordinal(omega_tower(3)) == "w^(w^w)"
    with pytest.raises(OrdinalError):
        omega_tower(5, max_depth=4)


def test_codes():
    assert encode_nat(ZERO) == 0
    assert encode_nat(ONE) == 1
    assert encode_nat(W) == 2
    assert encode_nat(omega_tower(2)) == 7
    assert not is_code(3)
    with pytest.raises(OrdinalError):
        decode_nat(3)


def test_codes_enumerate_valid_codes_injectively():
    seen = {}
    for n in range(3000):
        if is_code(n):
            o = decode_nat(n)
            assert o not in seen
            seen[o] = n
            assert encode_nat(o) == n


def test_literal_round_trip():
    for s in ["0", "7", "w", "w+1", "w*2", "w^2*3+w", "w^w", "w^(w^w)", "w^(w^2*3+1)*2+5", "w^(w+1)"]:
        assert format_ordinal(parse_ordinal(s)) == s
    with pytest.raises(OrdinalError):
        parse_ordinal("w^")
    with pytest.raises(OrdinalError):
        parse_ordinal("w^(1")


def test_normalization_idempotent():
    a = P("w^w*2+w^2+w*3+4")
    pieces = [(e, c) for e, c in a.terms]
    split = []
    for e, c in pieces:
        split.extend([(e, 1)] * c)
    for perm in itertools.islice(itertools.permutations(split), 200):
        assert Ordinal.from_summands(perm) == a


def test_rejects_non_canonical():
    with pytest.raises(OrdinalError):
        Ordinal(((ZERO, 1), (ONE, 1)))
    with pytest.raises(OrdinalError):
        Ordinal(((ONE, 0),))


# -- hypothesis ------------------------------------------------------------

def ordinals(max_depth=2):
    if max_depth == 0:
        return st.integers(0, 4).map(nat)
    exps = ordinals(max_depth - 1)
    return st.lists(st.tuples(exps, st.integers(1, 3)), max_size=3).map(Ordinal.from_summands)


@given(ordinals(), ordinals(), ordinals())
@settings(max_examples=300)
def test_laws(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert compare(a, add(a, b)) in (LT, EQ)
    if compare(a, b) == LT:
        assert compare(omega_pow(a), omega_pow(b)) == LT


@given(ordinals(), ordinals())
def test_code_order(a, b):
    assert decode_nat(encode_nat(a)) == a
    assert prec(encode_nat(a), encode_nat(b)) == (compare(a, b) == LT)
    assert parse_ordinal(format_ordinal(a)) == a

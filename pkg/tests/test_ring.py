from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bezoutqe.ring import (
    QQT, ZZ, Localization, Poly, RingParseError, format_poly, parse_backend, parse_poly,
)

T = Poly.T()
ints = st.integers(min_value=-10**6, max_value=10**6)
small_polys = st.lists(st.integers(-6, 6), min_size=1, max_size=5).map(lambda cs: Poly(cs))


def sym(p: Poly):
    t = sympy.Symbol("T")
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs())] or [0], t)


# Bezout identities

@given(ints, ints)
def test_gcd_bezout_integers(a, b):
    g, u, w = ZZ.gcd_bezout(a, b)
    assert a * u + b * w == g
    assert g >= 0
    assert g == sympy.gcd(a, b)


@settings(max_examples=60)
@given(small_polys, small_polys)
def test_gcd_bezout_polys(a, b):
    g, u, w = QQT.gcd_bezout(a, b)
    assert a * u + b * w == g
    expected = sympy.gcd(sym(a), sym(b))
    if g.is_zero():
        assert expected.is_zero
    else:
        assert g.lc() == 1
        assert sym(g).as_expr() == expected.monic().as_expr()


def test_gcd_examples():
    assert ZZ.gcd_bezout(12, 8) == (4, 1, -1)
    assert ZZ.gcd_bezout(0, 5) == (5, 0, 1)
    g, u, w = QQT.gcd_bezout(T * T - 1, T - 1)
    assert g == T - 1
    assert (T * T - 1) * u + (T - 1) * w == g


def test_colon_examples():
    assert ZZ.colon(12, 8) == 3
    assert ZZ.colon(3, 2) == 3
    assert QQT.colon(T * T, T) == T
    with pytest.raises(ZeroDivisionError):
        ZZ.colon(0, 0)


@given(ints.filter(bool), ints.filter(bool))
def test_colon_is_local_divisibility(a, b):
    # a | b at p iff p does not divide (a:b)
    e = ZZ.colon(a, b)
    for p in (2, 3, 5, 7):
        assert (ZZ.valuation(p, a) <= ZZ.valuation(p, b)) == (e % p != 0)


def test_good_factorization_examples():
    assert ZZ.good_factorization(12, 2) == (3, 4)
    assert ZZ.good_factorization(6, 6) == (1, 6)


@given(ints.filter(bool), ints.filter(bool))
def test_good_factorization_property(a, b):
    c, d = ZZ.good_factorization(a, b)
    assert abs(c * d) == abs(a)
    assert ZZ.gcd(c, b) == 1
    assert ZZ.rad_member(b, d)
    for p in sympy.factorint(d):
        assert b % p == 0


def test_rad_member_examples():
    assert ZZ.rad_member(6, 12)
    assert not ZZ.rad_member(2, 12)
    assert ZZ.rad_member(0, 0)
    assert not ZZ.rad_member(1, 0)
    assert QQT.rad_member(T * (T + 1), T ** 3 * (T + 1) ** 2)
    assert not QQT.rad_member(T, T * (T + 1))


@given(st.integers(-2000, 2000), st.integers(-2000, 2000))
def test_rad_member_against_factorization(a, b):
    if b == 0:
        expected = a == 0
    else:
        expected = all(a % p == 0 for p in sympy.factorint(abs(b)))
    assert ZZ.rad_member(a, b) == expected


# valuations

def test_valuation_examples():
    assert ZZ.valuation(2, 12) == 2
    assert ZZ.valuation(3, 0) == float("inf")
    assert QQT.valuation(T, T ** 3 + T ** 2) == 2
    with pytest.raises(ValueError):
        ZZ.valuation(4, 8)


@given(ints.filter(bool), ints.filter(bool))
def test_valuation_additive(a, b):
    for p in (2, 3, 5):
        assert ZZ.valuation(p, a * b) == ZZ.valuation(p, a) + ZZ.valuation(p, b)
        assert ZZ.valuation(p, a + b) >= min(ZZ.valuation(p, a), ZZ.valuation(p, b))


def test_irreducibility_against_sympy():
    t = sympy.Symbol("T")
    for p in [T, T + 1, T * T + 1, T * T - 1, T ** 3 - 2, T ** 4 + 4, 2 * T + 3]:
        assert QQT.is_irreducible(p) == sympy.Poly(sym(p).as_expr(), t).is_irreducible
    for n in range(-5, 60):
        assert ZZ.is_irreducible(n) == sympy.isprime(abs(n))


def test_irreducible_factors_against_sympy():
    p = (T ** 2 + 1) ** 2 * (T - 3) * 5
    ours = {format_poly(q): e for q, e in QQT.irreducible_factors(p)}
    _, fs = sympy.factor_list(sym(p).as_expr())
    theirs = {str(sympy.Poly(f, sympy.Symbol("T")).monic().as_expr()).replace("**", "^"): e
              for f, e in fs}
    assert ours == theirs


def test_fresh_irreducible():
    assert ZZ.fresh_irreducible([30]) == 7
    assert QQT.fresh_irreducible([T * (T + 1)]) == T - 1


# localizations

def test_localization_arithmetic():
    loc = Localization(ZZ, 2)
    assert loc.v(12) == 2
    assert loc.v(0) == float("inf")
    assert loc.divides(4, 12)
    assert not loc.divides(8, 12)
    assert loc.divides(3, 2)
    g, u, w = loc.gcd_bezout(12, 6)
    assert loc.v(g) == 1
    with pytest.raises(ValueError):
        Localization(ZZ, 6)


# polynomials

def test_poly_print_parse_roundtrip():
    for p in [T ** 2 - Fraction(3, 2) * T + 1, Poly(0), Poly(-7), T ** 3, -(T + 1) * (T - 2)]:
        assert parse_poly(format_poly(p)) == p
    assert format_poly(T ** 2 - Fraction(3, 2) * T + 1) == "T^2 - 3/2*T + 1"
    with pytest.raises(RingParseError):
        parse_poly("T^")


# backend descriptors

@pytest.mark.parametrize("sel,flags", [
    ("z", (False, False, True)),
    ("q_poly", (False, True, True)),
    ("z_loc:2", (True, False, False)),
    ("q_poly_loc:T", (True, True, False)),
    ("q_poly_loc:T^2+1", (True, True, False)),
])
def test_backend_flags(sel, flags):
    b = parse_backend(sel)
    assert (b.is_valuation, b.residue_fields_infinite, b.jacobson_radical_zero) == flags


def test_backend_rejects_reducible_prime():
    with pytest.raises(ValueError):
        parse_backend("z_loc:4")
    with pytest.raises(ValueError):
        parse_backend("q_poly_loc:T^2-1")
    with pytest.raises(ValueError):
        parse_backend("reals")

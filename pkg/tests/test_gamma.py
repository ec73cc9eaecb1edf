import sympy
from hypothesis import given
from hypothesis import strategies as st

from bezoutqe.gamma import GammaElem, Infinity, join, leq, localize, meet, to_local, v
from bezoutqe.ring import QQT, ZZ, Localization, Poly

T = Poly.T()
nonzero = st.integers(-500, 500).filter(bool)
gammas = st.tuples(nonzero, nonzero).map(lambda t: GammaElem.make(ZZ, t[0], t[1]))


def primes_of(*gs):
    out = set()
    for g in gs:
        out |= set(sympy.factorint(abs(g.num * g.den)))
    return out or {2}


def test_make_reduces():
    g = GammaElem.make(ZZ, 4, 2)
    assert (g.num, g.den) == (2, 1)
    assert str(GammaElem.make(ZZ, -6, 4)) == "v(3)/v(2)"
    assert GammaElem.make(ZZ, 5, -5).is_one()
    assert v(0, ZZ) is Infinity


def test_local_make_is_power_of_p():
    loc = Localization(ZZ, 2)
    assert GammaElem.make(loc, 12) == GammaElem(4, 1, loc)
    assert GammaElem.make(loc, 3, 8) == GammaElem(1, 8, loc)


def test_examples():
    assert meet(v(12, ZZ), v(18, ZZ)) == v(6, ZZ)
    assert join(v(12, ZZ), v(18, ZZ)) == v(36, ZZ)
    assert leq(v(2, ZZ), v(6, ZZ))
    assert not leq(v(6, ZZ), v(2, ZZ))
    assert leq(v(6, ZZ), Infinity)
    assert meet(Infinity, v(3, ZZ)) == v(3, ZZ)
    assert meet(v(T, QQT), v(T * T + T, QQT)) == v(T, QQT)


@given(gammas, gammas, gammas)
def test_lattice_laws(a, b, c):
    assert meet(a, b) == meet(b, a)
    assert join(a, b) == join(b, a)
    assert meet(a, meet(b, c)) == meet(meet(a, b), c)
    assert meet(a, join(a, b)) == a
    assert join(a, meet(a, b)) == a
    # lattice-ordered group: multiplication distributes over meet
    assert meet(a, b) * c == meet(a * c, b * c)


@given(gammas, gammas)
def test_order_is_local(a, b):
    # a <= b iff a <= b at every prime
    local = all(localize(a, p) <= localize(b, p) for p in primes_of(a, b))
    assert leq(a, b) == local


@given(gammas, gammas)
def test_meet_join_localize(a, b):
    for p in primes_of(a, b):
        assert localize(meet(a, b), p) == min(localize(a, p), localize(b, p))
        assert localize(join(a, b), p) == max(localize(a, p), localize(b, p))


@given(gammas)
def test_separation(a):
    # a is the unit iff it is trivial at every prime dividing num*den
    assert a.is_one() == all(localize(a, p) == 0 for p in primes_of(a))
    assert (a * a.inverse()).is_one()


def test_to_local():
    loc = Localization(ZZ, 3)
    g = to_local(GammaElem.make(ZZ, 18, 4), loc)
    assert g == GammaElem(9, 1, loc)

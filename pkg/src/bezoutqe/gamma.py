"""Group of divisibility: cosets a/b modulo units, ordered by divisibility."""
from __future__ import annotations

from dataclasses import dataclass, field

from .ring import INF, Localization, Ring


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __mul__(self, other):
        return self

    __rmul__ = __mul__

    def __repr__(self):
        return "Infinity"

    __str__ = __repr__


Infinity = _Infinity()


@dataclass(frozen=True)
class GammaElem:
    """The coset num * den^-1 * U with num, den coprime canonical associates."""

    num: object
    den: object
    ring: Ring = field(compare=False, repr=False)

    @staticmethod
    def make(ring: Ring, num, den=None) -> "GammaElem":
        if den is None:
            den = ring.one
        if ring.is_zero(num) or ring.is_zero(den):
            raise ValueError("GammaElem components must be nonzero")
        g = ring.gcd(num, den)
        if isinstance(ring, Localization):
            k = ring.v(num) - ring.v(den)
            p = ring.p
            if k >= 0:
                return GammaElem(p ** k, ring.one, ring)
            return GammaElem(ring.one, p ** (-k), ring)
        num = ring.canonical(ring.quo(num, g))
        den = ring.canonical(ring.quo(den, g))
        return GammaElem(num, den, ring)

    @staticmethod
    def unit(ring: Ring) -> "GammaElem":
        return GammaElem(ring.one, ring.one, ring)

    def is_one(self) -> bool:
        return self.num == self.ring.one and self.den == self.ring.one

    def __mul__(self, other):
        if other is Infinity:
            return Infinity
        return GammaElem.make(self.ring, self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        return GammaElem.make(self.ring, self.num * other.den, self.den * other.num)

    def inverse(self) -> "GammaElem":
        return GammaElem(self.den, self.num, self.ring)

    def __str__(self):
        f = self.ring.format
        if self.den == self.ring.one:
            return f"v({f(self.num)})"
        return f"v({f(self.num)})/v({f(self.den)})"


def v(a, ring: Ring):
    """The value a*U; Infinity at zero."""
    ring.check(a)
    if ring.is_zero(a):
        return Infinity
    return GammaElem.make(ring, a)


def _split(g1: GammaElem, g2: GammaElem):
    return g1.num * g2.den, g2.num * g1.den, g1.den * g2.den


def meet(g1, g2):
    if g1 is Infinity:
        return g2
    if g2 is Infinity:
        return g1
    r = g1.ring
    a, b, d = _split(g1, g2)
    return GammaElem.make(r, r.gcd(a, b), d)


def join(g1, g2):
    if g1 is Infinity or g2 is Infinity:
        return Infinity
    r = g1.ring
    a, b, d = _split(g1, g2)
    return GammaElem.make(r, r.lcm(a, b), d)


def leq(g1, g2) -> bool:
    if g2 is Infinity:
        return True
    if g1 is Infinity:
        return False
    return g1.ring.divides(g1.num * g2.den, g2.num * g1.den)


def localize(g, p):
    """Image of g in the value group of the localization at p (an int, or INF)."""
    if g is Infinity:
        return INF
    r = g.ring
    return r.valuation(p, g.num) - r.valuation(p, g.den)


def to_local(g, local: Localization):
    """Reinterpret a global Gamma value in the localization's value group."""
    if g is Infinity:
        return Infinity
    return GammaElem.make(local, g.num, g.den)

"""Effectively given Bezout domains: ZZ, QQ[T] and their localizations.

Elements are plain Python values: ``int`` for ZZ, :class:`Poly` for QQ[T].
Localizations reuse the base-ring values (every base element is a local
element) and only produce :class:`Frac` values when a genuine fraction is
needed, e.g. Bezout coefficients or oracle witnesses.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

INF = math.inf


class BackendMismatch(TypeError):
    """Element does not belong to the ring it was handed to."""


class RingParseError(ValueError):
    pass


class Poly:
    """Immutable, hashable polynomial in T over QQ (wraps ``flint.fmpq_poly``)."""

    __slots__ = ("_f", "_h")

    def __init__(self, value=0):
        if isinstance(value, Poly):
            f = value._f
        elif isinstance(value, flint.fmpq_poly):
            f = value
        elif isinstance(value, (list, tuple)):
            f = flint.fmpq_poly([_to_fmpq(c) for c in value])
        else:
            f = flint.fmpq_poly([_to_fmpq(value)])
        self._f = f
        self._h = None

    @classmethod
    def T(cls) -> "Poly":
        return cls(flint.fmpq_poly([0, 1]))

    # coefficient access
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(c.p), int(c.q)) for c in self._f.coeffs())

    def degree(self) -> int:
        return self._f.degree()

    def lc(self) -> Fraction:
        cs = self.coeffs()
        return cs[-1] if cs else Fraction(0)

    def is_zero(self) -> bool:
        return self._f.degree() < 0

    def is_constant(self) -> bool:
        return self._f.degree() <= 0

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return Poly(self._f / _to_fmpq(self.lc()))

    def derivative(self) -> "Poly":
        return Poly(self._f.derivative())

    def __call__(self, x):
        v = self._f(_to_fmpq(x))
        return Fraction(int(v.p), int(v.q))

    # arithmetic
    def __add__(self, other):
        o = _as_poly(other)
        return NotImplemented if o is None else Poly(self._f + o._f)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_poly(other)
        return NotImplemented if o is None else Poly(self._f - o._f)

    def __rsub__(self, other):
        o = _as_poly(other)
        return NotImplemented if o is None else Poly(o._f - self._f)

    def __mul__(self, other):
        o = _as_poly(other)
        return NotImplemented if o is None else Poly(self._f * o._f)

    __rmul__ = __mul__

    def __neg__(self):
        return Poly(-self._f)

    def __pow__(self, n: int):
        return Poly(self._f ** n)

    def __truediv__(self, other):
        # only division by a nonzero rational constant
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("Poly division only by nonzero constants")
            other = other.lc()
        return Poly(self._f / _to_fmpq(other))

    def __divmod__(self, other):
        o = _as_poly(other)
        q, r = divmod(self._f, o._f)
        return Poly(q), Poly(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self._f == o._f

    def __hash__(self):
        if self._h is None:
            self._h = hash(("Poly",) + self.coeffs())
        return self._h

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def _to_fmpq(c):
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, int):
        return flint.fmpq(c)
    raise TypeError(f"not a rational constant: {c!r}")


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Poly(x)
    return None


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_poly(p: Poly) -> str:
    cs = p.coeffs()
    if not cs:
        return "0"
    parts = []
    for k in range(len(cs) - 1, -1, -1):
        c = cs[k]
        if c == 0:
            continue
        mag = abs(c)
        mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
        if not mono:
            body = _fmt_rat(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_rat(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


_POLY_TOKEN = re.compile(r"\s*(?:(\d+)|(T)|([-+*/^()]))")


def parse_poly(text: str) -> Poly:
    """Parse a polynomial expression in T with rational coefficients."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise RingParseError(f"bad polynomial literal {text!r} at {pos}")
        toks.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take(expected=None):
        nonlocal i
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise RingParseError(f"bad polynomial literal {text!r}")
        i += 1
        return t

    def expr():
        sign = 1
        if peek() in ("-", "+"):
            sign = -1 if take() == "-" else 1
        acc = term() * sign
        while peek() in ("-", "+"):
            op = take()
            t = term()
            acc = acc - t if op == "-" else acc + t
        return acc

    def term():
        acc = power()
        while peek() in ("*", "/"):
            op = take()
            rhs = power()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise RingParseError(f"division by non-constant in {text!r}")
                acc = acc / rhs
        return acc

    def power():
        base = atom()
        if peek() == "^":
            take()
            e = take()
            if not e.isdigit():
                raise RingParseError(f"bad exponent in {text!r}")
            base = base ** int(e)
        return base

    def atom():
        t = peek()
        if t == "(":
            take()
            v = expr()
            take(")")
            return v
        if t == "T":
            take()
            return Poly.T()
        if t is not None and t.isdigit():
            take()
            return Poly(int(t))
        if t == "-":
            take()
            return -atom()
        raise RingParseError(f"bad polynomial literal {text!r}")

    if not toks:
        raise RingParseError("empty polynomial literal")
    out = expr()
    if i != len(toks):
        raise RingParseError(f"trailing input in polynomial literal {text!r}")
    return out


class Ring:
    """Common interface of the shipped backends."""

    name = "ring"
    zero = 0
    one = 1

    # subclasses provide: check, is_zero, is_unit, canonical, unit_part,
    # divides, quo, gcd_bezout, parse, format
    def gcd(self, a, b):
        return self.gcd_bezout(a, b)[0]

    def lcm(self, a, b):
        if self.is_zero(a) or self.is_zero(b):
            return self.zero
        return self.canonical(self.quo(a * b, self.gcd(a, b)))

    def cofactors(self, a, b):
        """(g, a/g, b/g) with g = gcd(a, b); exact quotients, units kept."""
        g = self.gcd(a, b)
        if self.is_zero(g):
            raise ZeroDivisionError("cofactors of (0, 0)")
        return g, self.quo(a, g), self.quo(b, g)

    def colon(self, a, b):
        self.check(a)
        self.check(b)
        if self.is_zero(a) and self.is_zero(b):
            raise ZeroDivisionError("colon(0, 0) is undefined")
        return self.canonical(self.quo(a, self.gcd(a, b)))

    def associates(self, a, b) -> bool:
        return self.canonical(a) == self.canonical(b)


class GlobalRing(Ring):
    is_valuation = False

    def good_factorization(self, a, b):
        """a = c*d with gcd(c, b) a unit and every maximal ideal over d containing b."""
        self.check(a)
        self.check(b)
        if self.is_zero(a) or self.is_zero(b):
            raise ZeroDivisionError("good_factorization needs nonzero arguments")
        c, d = a, self.one
        while True:
            g = self.gcd(c, b)
            if self.is_unit(g):
                return c, self.canonical(d)
            c = self.quo(c, g)
            d = d * g

    def rad_member(self, a, b) -> bool:
        self.check(a)
        self.check(b)
        if self.is_zero(b):
            return self.is_zero(a)
        return self.divides(self.squarefree_part(b), a)

    def valuation(self, p, a):
        self.check(a)
        if not self.is_irreducible(p):
            raise ValueError(f"{self.format(p)} is not irreducible")
        if self.is_zero(a):
            return INF
        k = 0
        while self.divides(p, a):
            a = self.quo(a, p)
            k += 1
        return k

    def fresh_irreducible(self, avoid=()):
        """Smallest irreducible (in a fixed enumeration) dividing none of ``avoid``."""
        avoid = [x for x in avoid if not self.is_zero(x)]
        for p in self.irreducibles():
            if not any(self.divides(p, x) for x in avoid):
                return p
        raise AssertionError("unreachable")


class Integers(GlobalRing):
    name = "z"

    def check(self, a):
        if not isinstance(a, int) or isinstance(a, bool):
            raise BackendMismatch(f"{a!r} is not an element of ZZ")

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def canonical(self, a):
        return abs(a)

    def unit_part(self, a):
        return -1 if a < 0 else 1

    def divides(self, a, b):
        self.check(a)
        self.check(b)
        if a == 0:
            return b == 0
        return b % a == 0

    def quo(self, b, a):
        q, r = divmod(b, a)
        if r:
            raise ArithmeticError(f"{a} does not divide {b}")
        return q

    def gcd_bezout(self, a, b):
        self.check(a)
        self.check(b)
        r0, r1 = a, b
        s0, s1 = 1, 0
        t0, t1 = 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0 < 0:
            r0, s0, t0 = -r0, -s0, -t0
        return r0, s0, t0

    def gcd(self, a, b):
        return math.gcd(a, b)

    def squarefree_part(self, b):
        out = 1
        for p, _ in flint.fmpz(b).factor():
            out *= int(p)
        return out

    def is_irreducible(self, p):
        self.check(p)
        return abs(p) > 1 and bool(flint.fmpz(abs(p)).is_prime())

    def irreducible_factors(self, a):
        if a == 0:
            raise ValueError("factorization of 0")
        return [(int(p), e) for p, e in flint.fmpz(a).factor()]

    def irreducibles(self):
        p = 2
        while True:
            if flint.fmpz(p).is_prime():
                yield p
            p += 1

    def parse(self, text: str) -> int:
        s = text.strip().replace(" ", "")
        if not re.fullmatch(r"[-+]?\d+", s):
            raise RingParseError(f"not an integer literal: {text!r}")
        return int(s)

    def format(self, a) -> str:
        return str(a)

    def __repr__(self):
        return "Integers()"


class RationalPolynomials(GlobalRing):
    name = "q_poly"
    zero = Poly(0)
    one = Poly(1)

    def check(self, a):
        if not isinstance(a, Poly):
            raise BackendMismatch(f"{a!r} is not an element of QQ[T]")

    def is_zero(self, a):
        return a.is_zero()

    def is_unit(self, a):
        return a.degree() == 0

    def canonical(self, a):
        return a.monic()

    def unit_part(self, a):
        return a.lc() if not a.is_zero() else Fraction(1)

    def divides(self, a, b):
        self.check(a)
        self.check(b)
        if a.is_zero():
            return b.is_zero()
        return divmod(b, a)[1].is_zero()

    def quo(self, b, a):
        q, r = divmod(b, a)
        if not r.is_zero():
            raise ArithmeticError(f"{a} does not divide {b}")
        return q

    def gcd_bezout(self, a, b):
        self.check(a)
        self.check(b)
        if a.is_zero() and b.is_zero():
            return self.zero, self.zero, self.zero
        g, s, t = a._f.xgcd(b._f)
        g, s, t = Poly(g), Poly(s), Poly(t)
        lc = g.lc()
        if lc != 1:
            g, s, t = g / lc, s / lc, t / lc
        return g, s, t

    def gcd(self, a, b):
        if a.is_zero() and b.is_zero():
            return self.zero
        return Poly(a._f.gcd(b._f)).monic()

    def squarefree_part(self, b):
        return self.canonical(self.quo(b, self.gcd(b, b.derivative())))

    def is_irreducible(self, p):
        self.check(p)
        if p.degree() < 1:
            return False
        return _poly_irreducible(p)

    def irreducible_factors(self, a):
        if a.is_zero():
            raise ValueError("factorization of 0")
        _, facs = a._f.factor()
        out = [(Poly(f).monic(), e) for f, e in facs]
        return sorted(out, key=lambda fe: (fe[0].degree(), fe[0].coeffs()))

    def irreducibles(self):
        # monic linear polynomials T - c for c = 0, -1, 1, -2, 2, ...
        yield Poly.T()
        c = 1
        while True:
            yield Poly.T() + c
            yield Poly.T() - c
            c += 1

    def parse(self, text: str) -> Poly:
        return parse_poly(text)

    def format(self, a) -> str:
        return format_poly(a)

    def __repr__(self):
        return "RationalPolynomials()"


@lru_cache(maxsize=4096)
def _poly_irreducible(p: Poly) -> bool:
    _, facs = p._f.factor()
    return len(facs) == 1 and facs[0][1] == 1


ZZ = Integers()
QQT = RationalPolynomials()


def base_ring_of(value) -> GlobalRing:
    if isinstance(value, Poly):
        return QQT
    if isinstance(value, int) and not isinstance(value, bool):
        return ZZ
    if isinstance(value, Frac):
        return value.ring
    raise BackendMismatch(f"no backend for {value!r}")


@dataclass(frozen=True)
class Frac:
    """Element num/den of a localization; den is a canonical local unit."""

    num: object
    den: object
    ring: GlobalRing = field(compare=False, repr=False)

    @staticmethod
    def make(ring: GlobalRing, num, den=None) -> "Frac":
        if den is None:
            den = ring.one
        if ring.is_zero(den):
            raise ZeroDivisionError("zero denominator")
        g = ring.gcd(num, den)
        num, den = ring.quo(num, g), ring.quo(den, g)
        u = ring.unit_part(den)
        return Frac(num / u if isinstance(num, Poly) else num * u,
                    den / u if isinstance(den, Poly) else den * u, ring)

    def _lift(self, other):
        if isinstance(other, Frac):
            return other
        return Frac.make(self.ring, other)

    def __add__(self, other):
        o = self._lift(other)
        return Frac.make(self.ring, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Frac.make(self.ring, self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return Frac.make(self.ring, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __neg__(self):
        return Frac(-self.num, self.den, self.ring)

    def is_zero(self):
        return self.ring.is_zero(self.num)

    def __str__(self):
        f = self.ring.format
        if self.ring.is_unit(self.den) and self.den == self.ring.one:
            return f(self.num)
        return f"({f(self.num)})/({f(self.den)})"


class Localization(Ring):
    """Base ring localized at the maximal ideal generated by the irreducible p."""

    is_valuation = True

    def __init__(self, base: GlobalRing, p):
        base.check(p)
        if not base.is_irreducible(p):
            raise ValueError(f"{base.format(p)} is not irreducible in {base.name}")
        self.base = base
        self.p = base.canonical(p)
        self.zero = base.zero
        self.one = base.one
        self.name = f"{base.name}_loc:{base.format(self.p)}"

    def __eq__(self, other):
        return isinstance(other, Localization) and other.base is self.base and other.p == self.p

    def __hash__(self):
        return hash(("loc", self.base.name, self.p))

    def __repr__(self):
        return f"Localization({self.base!r}, {self.base.format(self.p)})"

    def check(self, a):
        if isinstance(a, Frac):
            if a.ring is not self.base:
                raise BackendMismatch(f"{a!r} is not an element of {self.name}")
            if self.base.divides(self.p, a.den):
                raise BackendMismatch(f"denominator of {a} is not a local unit")
            return
        self.base.check(a)

    def v(self, a):
        """Local valuation v_p(a); INF at zero."""
        if isinstance(a, Frac):
            return self.base.valuation(self.p, a.num)
        return self.base.valuation(self.p, a)

    def is_zero(self, a):
        return a.is_zero() if isinstance(a, Frac) else self.base.is_zero(a)

    def is_unit(self, a):
        return self.v(a) == 0

    def canonical(self, a):
        k = self.v(a)
        if k == INF:
            return self.zero
        return self._pow(k)

    def _pow(self, k: int):
        return self.p ** k

    def unit_part(self, a):
        return self.base.unit_part(a)

    def divides(self, a, b):
        self.check(a)
        self.check(b)
        va, vb = self.v(a), self.v(b)
        if vb == INF:
            return True
        return va <= vb

    def quo(self, b, a):
        """Exact local quotient b/a as a Frac (or base element when possible)."""
        if not self.divides(a, b):
            raise ArithmeticError("not locally divisible")
        bf = b if isinstance(b, Frac) else Frac.make(self.base, b)
        af = a if isinstance(a, Frac) else Frac.make(self.base, a)
        out = Frac.make(self.base, bf.num * af.den, bf.den * af.num)
        if self.base.is_unit(out.den):
            return out.num
        return out

    def gcd(self, a, b):
        if self.is_zero(a) and self.is_zero(b):
            return self.zero
        return self._pow(min(self.v(a), self.v(b)))

    def gcd_bezout(self, a, b):
        self.check(a)
        self.check(b)
        if self.is_zero(a) and self.is_zero(b):
            return self.zero, self.zero, self.zero
        g = self.gcd(a, b)
        if not self.is_zero(a) and self.v(a) <= self.v(b):
            return g, self.quo(g, a), self.zero
        return g, self.zero, self.quo(g, b)

    def good_factorization(self, a, b):
        if self.is_zero(a) or self.is_zero(b):
            raise ZeroDivisionError("good_factorization needs nonzero arguments")
        k = self.v(a)
        if self.v(b) == 0 or k == 0:
            return a, self.one
        return self.quo(a, self._pow(k)), self._pow(k)

    def rad_member(self, a, b) -> bool:
        # single maximal ideal (p): b in it forces a in it
        if self.v(b) == 0:
            return True
        return self.v(a) >= 1

    def valuation(self, p, a):
        if not self.base.associates(p, self.p):
            raise ValueError("a localization only has the valuation at its own prime")
        return self.v(a)

    def parse(self, text: str):
        return self.base.parse(text)

    def format(self, a) -> str:
        return str(a) if isinstance(a, Frac) else self.base.format(a)


@dataclass(frozen=True)
class BackendDescriptor:
    ring_id: str
    ring: Ring = field(compare=False)
    prime: object = None

    @property
    def is_valuation(self) -> bool:
        return _FLAGS[self.ring_id][0]

    @property
    def residue_fields_infinite(self) -> bool:
        return _FLAGS[self.ring_id][1]

    @property
    def jacobson_radical_zero(self) -> bool:
        return _FLAGS[self.ring_id][2]

    @property
    def base(self) -> GlobalRing:
        return self.ring.base if isinstance(self.ring, Localization) else self.ring

    def selector(self) -> str:
        if self.prime is None:
            return self.ring_id
        return f"{self.ring_id}:{self.base.format(self.prime)}"

    def localize(self, p) -> "BackendDescriptor":
        if self.is_valuation:
            raise ValueError("already a valuation backend")
        return BackendDescriptor(self.ring_id + "_loc", Localization(self.base, p), self.base.canonical(p))

    def __str__(self):
        return self.selector()


# ring-id -> (is_valuation, residue_fields_infinite, jacobson_radical_zero)
_FLAGS = {
    "z": (False, False, True),
    "q_poly": (False, True, True),
    "z_loc": (True, False, False),
    "q_poly_loc": (True, True, False),
}

Z_BACKEND = BackendDescriptor("z", ZZ)
QPOLY_BACKEND = BackendDescriptor("q_poly", QQT)


def parse_backend(selector: str) -> BackendDescriptor:
    """Parse ``z``, ``q_poly``, ``z_loc:<prime>`` or ``q_poly_loc:<irreducible>``."""
    sel = selector.strip()
    if sel == "z":
        return Z_BACKEND
    if sel == "q_poly":
        return QPOLY_BACKEND
    head, sep, arg = sel.partition(":")
    if sep and head in ("z_loc", "q_poly_loc"):
        base = ZZ if head == "z_loc" else QQT
        p = base.parse(arg)
        return BackendDescriptor(head, Localization(base, p), base.canonical(p))
    raise ValueError(f"unknown backend selector {selector!r}")

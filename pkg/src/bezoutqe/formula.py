"""Abstract syntax for pp formulas, invariant conditions and Boolean sentences."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .gamma import GammaElem, Infinity, leq
from .ring import Poly, base_ring_of


@dataclass(frozen=True)
class Term:
    """Linear form sum(c * var); coefficients are base-ring elements, none zero."""

    items: tuple = ()

    @staticmethod
    def of(mapping) -> "Term":
        items = []
        for var, c in sorted(dict(mapping).items()):
            if not base_ring_of(c).is_zero(c):
                items.append((var, c))
        return Term(tuple(items))

    @staticmethod
    def var(name: str, coeff) -> "Term":
        return Term.of({name: coeff})

    def as_dict(self) -> dict:
        return dict(self.items)

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.items)

    def get(self, var, zero=0):
        for v, c in self.items:
            if v == var:
                return c
        return zero

    def is_zero(self) -> bool:
        return not self.items

    def __add__(self, other: "Term") -> "Term":
        d = self.as_dict()
        for v, c in other.items:
            d[v] = d[v] + c if v in d else c
        return Term.of(d)

    def __neg__(self) -> "Term":
        return Term(tuple((v, -c) for v, c in self.items))

    def __sub__(self, other: "Term") -> "Term":
        return self + (-other)

    def scale(self, k) -> "Term":
        return Term.of({v: c * k for v, c in self.items})

    def without(self, var) -> "Term":
        return Term(tuple((v, c) for v, c in self.items if v != var))

    def rename(self, mapping) -> "Term":
        return Term.of({mapping.get(v, v): c for v, c in self.items})


@dataclass(frozen=True)
class Eq:
    term: Term


@dataclass(frozen=True)
class Vp:
    delta: GammaElem
    term: Term


Atom = Union[Eq, Vp]


def atom_vars(a: Atom) -> tuple[str, ...]:
    return a.term.vars


@dataclass(frozen=True)
class PPFormula:
    bound: tuple[str, ...] = ()
    atoms: tuple = ()
    # declared free variables; derived from the atoms unless given
    declared: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(set(self.bound)) != len(self.bound):
            raise ValueError("bound variables must be distinct")
        for a in self.atoms:
            if isinstance(a, Vp) and a.delta is Infinity:
                raise ValueError("V atoms need a finite index")

    @property
    def free(self) -> tuple[str, ...]:
        if self.declared is not None:
            return self.declared
        seen = set()
        for a in self.atoms:
            seen.update(a.term.vars)
        return tuple(sorted(seen - set(self.bound)))

    def variables(self) -> set[str]:
        out = set(self.bound)
        for a in self.atoms:
            out.update(a.term.vars)
        return out

    def rename(self, mapping) -> "PPFormula":
        def ren(a):
            if isinstance(a, Eq):
                return Eq(a.term.rename(mapping))
            return Vp(a.delta, a.term.rename(mapping))
        return PPFormula(tuple(mapping.get(b, b) for b in self.bound),
                         tuple(ren(a) for a in self.atoms))

    def __str__(self):
        return print_formula(self)


def fresh_name(base: str, used: set[str]) -> str:
    stem = base.rstrip("0123456789") or "n"
    k = 1
    while f"{stem}{k}" in used:
        k += 1
    return f"{stem}{k}"


def conjoin(f: PPFormula, g: PPFormula) -> PPFormula:
    """f & g with g's bound variables renamed apart from everything in f."""
    used = f.variables() | g.variables()
    mapping = {}
    for b in g.bound:
        if b in f.variables():
            new = fresh_name(b, used)
            used.add(new)
            mapping[b] = new
    g2 = g.rename(mapping) if mapping else g
    return PPFormula(f.bound + g2.bound, f.atoms + g2.atoms)


@dataclass(frozen=True)
class InvCondition:
    """(phi / psi) > 1 or = 1; the index of psi & phi inside phi."""

    phi: PPFormula
    psi: PPFormula
    gt1: bool

    def __post_init__(self):
        fv = set(self.phi.free) | set(self.psi.free)
        if len(fv) > 1:
            raise ValueError("invariant conditions take one free variable")

    @property
    def var(self) -> str:
        fv = sorted(set(self.phi.free) | set(self.psi.free))
        return fv[0] if fv else "x"

    @property
    def psi_and_phi(self) -> PPFormula:
        return conjoin(self.phi, self.psi)


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


BSentence = Union[InvCondition, PPFormula, Not, And, Or]


# normalization

def _unit_of(c):
    ring = base_ring_of(c)
    return ring.unit_part(c)


def _scale_canonical(t: Term) -> Term:
    if t.is_zero():
        return t
    u = _unit_of(t.items[0][1])
    if u == 1:
        return t
    if isinstance(t.items[0][1], Poly):
        inv = Fraction(1) / u
        return Term(tuple((v, c * inv) for v, c in t.items))
    return Term(tuple((v, -c) for v, c in t.items))


def normalize(f: PPFormula) -> PPFormula:
    atoms = []
    for a in f.atoms:
        t = Term.of(a.term.as_dict())
        if t.is_zero():
            continue
        t = _scale_canonical(t)
        if isinstance(a, Vp):
            if leq(a.delta, GammaElem.unit(a.delta.ring)):
                continue
            a = Vp(a.delta, t)
        else:
            a = Eq(t)
        if a not in atoms:
            atoms.append(a)
    used = set()
    for a in atoms:
        used.update(a.term.vars)
    bound = tuple(b for b in f.bound if b in used)
    return PPFormula(bound, tuple(atoms), declared=f.free)


def normalize_sentence(s):
    if isinstance(s, PPFormula):
        return normalize(s)
    if isinstance(s, InvCondition):
        return InvCondition(normalize(s.phi), normalize(s.psi), s.gt1)
    if isinstance(s, Not):
        return Not(normalize_sentence(s.arg))
    return type(s)(normalize_sentence(s.left), normalize_sentence(s.right))


# printing

def _is_negative(c) -> bool:
    return _unit_of(c) < 0


def _fmt_scalar(c) -> str:
    ring = base_ring_of(c)
    s = ring.format(c)
    if isinstance(c, Poly) and not c.is_constant():
        return f"({s})"
    return s


def print_term(t: Term) -> str:
    if t.is_zero():
        return "0"
    out = []
    for i, (var, c) in enumerate(t.items):
        neg = _is_negative(c)
        mag = -c if neg else c
        mono = var if mag == 1 else f"{var}*{_fmt_scalar(mag)}"
        if i == 0:
            out.append(("-" if neg else "") + mono)
        else:
            out.append((" - " if neg else " + ") + mono)
    return "".join(out)


def print_atom(a: Atom) -> str:
    if isinstance(a, Eq):
        return f"{print_term(a.term)} = 0"
    return f"V[{a.delta}]({print_term(a.term)})"


def print_formula(f: PPFormula) -> str:
    body = " & ".join(print_atom(a) for a in f.atoms) if f.atoms else "0 = 0"
    if f.bound:
        return f"E {' '.join(f.bound)} . {body}"
    return body


def print_sentence(s) -> str:
    if isinstance(s, PPFormula):
        return f"PP({print_formula(s)})"
    if isinstance(s, InvCondition):
        rel = ">1" if s.gt1 else "=1"
        return f"Inv({print_formula(s.phi)} | {print_formula(s.psi)}) {rel}"
    if isinstance(s, Not):
        return f"!{print_sentence(s.arg)}"
    op = "&" if isinstance(s, And) else "|"
    return f"({print_sentence(s.left)} {op} {print_sentence(s.right)})"


def to_text(x) -> str:
    if isinstance(x, PPFormula):
        return print_formula(x)
    return print_sentence(x)

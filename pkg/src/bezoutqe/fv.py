"""Constructible subsets of the maximal spectrum and guarded decompositions.

Over the shipped global backends every constructible set is either V(e) or
its complement, so sets are stored normalized as ``Closed(e)``/``Open(e)``
with ``Closed(0)`` the whole spectrum and ``Closed(1)`` the empty set.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .formula import PPFormula, Vp, normalize, print_formula
from .gamma import to_local
from .qe import Answer, ComparisonOracle, Split, UnresolvedSplit, eliminate
from .ring import BackendDescriptor, GlobalRing


@dataclass(frozen=True)
class CSet:
    closed: bool
    elem: object
    ring: GlobalRing = field(compare=False, repr=False)

    @property
    def kind(self) -> str:
        r = self.ring
        if self.closed and r.is_zero(self.elem):
            return "whole"
        if self.closed and r.is_unit(self.elem):
            return "empty"
        return "closed" if self.closed else "open"

    def to_json(self) -> dict:
        return {"kind": self.kind, "elem": self.ring.format(self.elem)}

    def __str__(self):
        k = self.kind
        if k in ("whole", "empty"):
            return k.capitalize()
        return f"{k.capitalize()}({self.ring.format(self.elem)})"


def closed(ring: GlobalRing, e) -> CSet:
    ring.check(e)
    return CSet(True, ring.canonical(e), ring)


def open_(ring: GlobalRing, e) -> CSet:
    ring.check(e)
    if ring.is_zero(e):
        return empty(ring)
    if ring.is_unit(e):
        return whole(ring)
    return CSet(False, ring.canonical(e), ring)


def whole(ring: GlobalRing) -> CSet:
    return CSet(True, ring.zero, ring)


def empty(ring: GlobalRing) -> CSet:
    return CSet(True, ring.one, ring)


def cs_complement(s: CSet) -> CSet:
    return open_(s.ring, s.elem) if s.closed else closed(s.ring, s.elem)


def cs_intersect(s1: CSet, s2: CSet) -> CSet:
    r = s1.ring
    if s1.closed and s2.closed:
        return closed(r, r.gcd(s1.elem, s2.elem))
    if not s1.closed and not s2.closed:
        return open_(r, s1.elem * s2.elem)
    c, o = (s1, s2) if s1.closed else (s2, s1)
    # V(a) minus V(b)
    if r.is_zero(c.elem):
        return o
    if r.is_unit(c.elem):
        return empty(r)
    part, _ = r.good_factorization(c.elem, o.elem)
    return closed(r, part)


def cs_union(s1: CSet, s2: CSet) -> CSet:
    return cs_complement(cs_intersect(cs_complement(s1), cs_complement(s2)))


def cs_difference(s1: CSet, s2: CSet) -> CSet:
    return cs_intersect(s1, cs_complement(s2))


def cs_is_empty(s: CSet) -> bool:
    r = s.ring
    if s.closed:
        return r.is_unit(s.elem)
    # V(e) is everything only for e in the Jacobson radical, which is zero here
    return r.is_zero(s.elem)


def cs_subseteq(s1: CSet, s2: CSet) -> bool:
    if s1.closed and s2.closed:
        return s1.ring.rad_member(s2.elem, s1.elem)
    return cs_is_empty(cs_difference(s1, s2))


def cs_contains(s: CSet, p) -> bool:
    """Is the maximal ideal (p) in s?"""
    inside = s.ring.divides(p, s.elem)
    return inside if s.closed else not inside


def representative(s: CSet):
    """A deterministic irreducible whose maximal ideal lies in s (None if s is empty)."""
    r = s.ring
    if cs_is_empty(s):
        return None
    if s.closed and not r.is_zero(s.elem):
        return r.irreducible_factors(s.elem)[0][0]
    return r.fresh_irreducible([s.elem])


class SymbolicOracle(ComparisonOracle):
    """Answers v(r) <= v(s) uniformly over the maximal ideals in ``guard``.

    Locally r | s iff (r:s) is outside the maximal ideal, so the answer is
    Yes on Open((r:s)) and No on Closed((r:s)).
    """

    def __init__(self, ring: GlobalRing, guard: CSet):
        self.ring = ring
        self.gamma_ring = ring
        self.guard = guard

    def compare(self, r, s):
        ring = self.ring
        if ring.is_zero(s):
            return Answer.YES
        if ring.is_zero(r):
            return Answer.NO
        e = ring.colon(r, s)
        yes = cs_intersect(self.guard, open_(ring, e))
        no = cs_intersect(self.guard, closed(ring, e))
        if cs_is_empty(no):
            return Answer.YES
        if cs_is_empty(yes):
            return Answer.NO
        return Split(yes, no)

    def canonical(self, a):
        return self.ring.canonical(a)


def explore(procedure, ring: GlobalRing, guard: CSet | None = None):
    """Run ``procedure(oracle)`` on every cell of the case tree it induces.

    Yields (guard, result) depth first, yes-branches first.  Guards are
    nonempty, pairwise disjoint and cover the starting guard.
    """
    stack = [guard if guard is not None else whole(ring)]
    while stack:
        g = stack.pop()
        try:
            result = procedure(SymbolicOracle(ring, g))
        except UnresolvedSplit as e:
            stack.append(e.split.no)
            stack.append(e.split.yes)
            continue
        yield g, result


@dataclass(frozen=True)
class GuardedFormula:
    pieces: tuple  # of (CSet, PPFormula)

    def check_partition(self) -> bool:
        if not self.pieces:
            return False
        ring = self.pieces[0][0].ring
        acc = empty(ring)
        for i, (g1, _) in enumerate(self.pieces):
            for g2, _ in self.pieces[i + 1:]:
                if not cs_is_empty(cs_intersect(g1, g2)):
                    return False
            acc = cs_union(acc, g1)
        return acc.kind == "whole"

    def to_json(self) -> list:
        return [{"guard": g.to_json(), "body": print_formula(b)} for g, b in self.pieces]

    def __str__(self):
        return "\n".join(f"{g}: {print_formula(b)}" for g, b in self.pieces)


def _forced_trivial(atom, cmp: SymbolicOracle) -> bool:
    """Is delta <= 1 on the whole guard (without forking)?"""
    d = atom.delta
    out = cmp.compare(d.num, d.den)
    return out == Answer.YES


def decompose(f: PPFormula, backend: BackendDescriptor) -> GuardedFormula:
    if backend.is_valuation:
        raise ValueError("decomposition runs over a global backend; use eliminate directly")
    ring = backend.base
    leaves = []
    for guard, body in explore(lambda cmp: eliminate(f, cmp), ring):
        cmp = SymbolicOracle(ring, guard)
        atoms = tuple(a for a in body.atoms if not (isinstance(a, Vp) and _forced_trivial(a, cmp)))
        leaves.append((guard, normalize(PPFormula((), atoms, declared=body.free))))
    merged = []
    for guard, body in leaves:
        for k, (g, b) in enumerate(merged):
            if b == body:
                merged[k] = (cs_union(g, guard), b)
                break
        else:
            merged.append((guard, body))
    return GuardedFormula(tuple(merged))


def localize_body(body: PPFormula, p, backend: BackendDescriptor,
                  guard: CSet | None = None) -> tuple[PPFormula, BackendDescriptor]:
    """The body read in the localization at (p), with its local backend."""
    if guard is not None and not cs_contains(guard, p):
        raise ValueError(f"({backend.base.format(p)}) is not in {guard}")
    local = backend.localize(p)
    atoms = []
    for a in body.atoms:
        if isinstance(a, Vp):
            a = Vp(to_local(a.delta, local.ring), a.term)
        atoms.append(a)
    return normalize(PPFormula(body.bound, tuple(atoms), declared=body.free)), local

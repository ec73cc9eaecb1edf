"""Positive quantifier elimination for pp formulas over a valuation context.

The engine only ever asks questions of the form "is v(r) <= v(s) here?".
A :class:`ComparisonOracle` answers them, either for one fixed localization
(:class:`LocalOracle`) or symbolically over a region of the maximal spectrum
(see ``fv.SymbolicOracle``), which is what makes the same code serve both the
concrete and the decomposition mode.
"""
from __future__ import annotations

from dataclasses import dataclass

from .formula import Eq, PPFormula, Term, Vp, normalize
from .gamma import GammaElem, v
from .ring import INF, BackendDescriptor, Ring


class Answer:
    YES = "yes"
    NO = "no"


@dataclass(frozen=True)
class Split:
    yes: object
    no: object


class UnresolvedSplit(Exception):
    """Raised when a comparison cannot be answered without a case split."""

    def __init__(self, split: Split):
        super().__init__("comparison depends on the maximal ideal")
        self.split = split


class ComparisonOracle:
    ring: Ring          # base ring of the coefficients
    gamma_ring: Ring    # ring in which Gamma indices are built

    def compare(self, r, s):
        raise NotImplementedError

    def leq_v(self, r, s) -> bool:
        out = self.compare(r, s)
        if isinstance(out, Split):
            raise UnresolvedSplit(out)
        return out == Answer.YES

    def leq_gamma(self, g1: GammaElem, g2: GammaElem) -> bool:
        return self.leq_v(g1.num * g2.den, g2.num * g1.den)

    def canonical(self, a):
        return self.gamma_ring.canonical(a)


class LocalOracle(ComparisonOracle):
    """Comparisons in the localization described by a valuation backend."""

    def __init__(self, backend: BackendDescriptor):
        if not backend.is_valuation:
            raise ValueError("LocalOracle needs a valuation backend")
        self.backend = backend
        self.ring = backend.base
        self.gamma_ring = backend.ring
        self.p = backend.prime

    def compare(self, r, s):
        vs = self.ring.valuation(self.p, s)
        if vs == INF:
            return Answer.YES
        return Answer.YES if self.ring.valuation(self.p, r) <= vs else Answer.NO


@dataclass(frozen=True)
class NormalForm1:
    """x.a = 0 & V_delta(x); a = 0 and delta = v(1) mean no constraint."""

    a: object
    delta: GammaElem

    def to_formula(self, var: str = "x") -> PPFormula:
        ring = self.delta.ring
        atoms = []
        if not ring.is_zero(self.a):
            atoms.append(Eq(Term.var(var, self.a)))
        atoms.append(Vp(self.delta, Term.var(var, ring.one)))
        return normalize(PPFormula((), tuple(atoms), declared=(var,)))


def _split_atom(atom, x, zero):
    """x-atom as (r, t) meaning x*r - t, with t free of x."""
    r = atom.term.get(x, zero)
    return r, -atom.term.without(x)


def _elim_var(x: str, atoms: list, cmp: ComparisonOracle):
    """Yield the atom list after each rewrite; the last one is free of x."""
    ring = cmp.ring
    zero = ring.zero
    rest, eqs, congs = [], [], []
    for atom in atoms:
        r, t = _split_atom(atom, x, zero)
        if ring.is_zero(r):
            rest.append(atom)
        elif isinstance(atom, Eq):
            eqs.append((r, t))
        else:
            congs.append((atom.delta, r, t))
    if not eqs and not congs:
        return

    def state():
        xt = Term.var(x, ring.one)
        out = list(rest)
        out += [Eq(xt.scale(r) - t) for r, t in eqs]
        out += [Vp(d, xt.scale(r) - t) for d, r, t in congs]
        return out

    if not eqs:
        # congruences only: drop those that hold automatically, promote the strongest
        pending, keep = congs, []
        while pending:
            d, r, t = pending.pop(0)
            if cmp.leq_gamma(d, v(r, cmp.gamma_ring)):
                rest.append(Vp(d, t))
                congs = keep + pending
                yield state()
            else:
                keep.append((d, r, t))
        congs = keep
        if not congs:
            return
        best = 0
        for i in range(1, len(congs)):
            gi = congs[i][0] / v(congs[i][1], cmp.gamma_ring)
            gb = congs[best][0] / v(congs[best][1], cmp.gamma_ring)
            if not cmp.leq_gamma(gi, gb):
                best = i
        _, r1, t1 = congs.pop(best)
        eqs = [(r1, t1)]
        yield state()

    best = 0
    for i in range(1, len(eqs)):
        if not cmp.leq_v(eqs[best][0], eqs[i][0]):
            best = i
    eqs.insert(0, eqs.pop(best))
    r0, t0 = eqs[0]
    while len(eqs) > 1:
        r1, t1 = eqs.pop(1)
        _, a0, a1 = ring.cofactors(r0, r1)
        rest.append(Eq(t0.scale(a1) - t1.scale(a0)))
        yield state()
    while congs:
        d, ri, ti = congs.pop(0)
        _, c0, ci = ring.cofactors(r0, ri)
        if cmp.leq_v(r0, ri):
            rest.append(Vp(d, t0.scale(ci) - ti.scale(c0)))
        else:
            rest.append(Vp(d * v(c0, cmp.gamma_ring), ti.scale(c0) - t0.scale(ci)))
        yield state()
    eqs = []
    rest.append(Vp(v(r0, cmp.gamma_ring), t0))
    yield state()


def _steps(f: PPFormula, cmp: ComparisonOracle):
    """Yield (remaining bound variables, atoms) after every rewrite step."""
    atoms = list(f.atoms)
    bound = list(f.bound)
    while bound:
        x = bound[-1]
        for atoms in _elim_var(x, atoms, cmp):
            yield bound, atoms
        bound = bound[:-1]


def eliminate(f: PPFormula, cmp: ComparisonOracle, max_steps: int | None = None) -> PPFormula:
    """Quantifier-free equivalent of f in the valuation context of cmp.

    With ``max_steps`` the rewriting stops early and the partially rewritten,
    still quantified formula is returned.
    """
    f = normalize(f)
    bound, atoms = list(f.bound), list(f.atoms)
    for k, (b, a) in enumerate(_steps(f, cmp)):
        if max_steps is not None and k >= max_steps:
            break
        bound, atoms = list(b), a
    else:
        bound = []
    for a in atoms:
        if isinstance(a, Vp) and not isinstance(a.delta, GammaElem):
            raise ValueError("infinite index in V atom")
    return normalize(PPFormula(tuple(bound), tuple(atoms), declared=f.free))


def normal_form_1var(f: PPFormula, cmp: ComparisonOracle, var: str | None = None) -> NormalForm1:
    g = eliminate(f, cmp)
    free = set(g.free) | set(f.free)
    if var is None:
        if len(free) > 1:
            raise ValueError(f"expected one free variable, got {sorted(free)}")
        var = next(iter(free), "x")
    elif free - {var}:
        raise ValueError(f"expected one free variable, got {sorted(free)}")
    ring = cmp.ring
    a = ring.zero
    best = None
    for atom in g.atoms:
        if atom.term.vars != (var,):
            raise ValueError(f"atom mixes {var} with other variables")
        c = atom.term.items[0][1]
        if isinstance(atom, Eq):
            a = ring.gcd(a, c)
            continue
        if cmp.leq_gamma(atom.delta, v(c, cmp.gamma_ring)):
            continue
        gam = atom.delta / v(c, cmp.gamma_ring)
        if best is None or not cmp.leq_gamma(gam, best):
            best = gam
    if best is None:
        best = GammaElem.unit(cmp.gamma_ring)
    if not ring.is_zero(a):
        a = cmp.canonical(a)
    return NormalForm1(a, best)

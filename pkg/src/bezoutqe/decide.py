"""Deciding Boolean combinations of invariant conditions.

A sentence is valid iff its negation has no model.  The negation is brought
into disjunctive normal form over literals (phi/psi) > 1 and (phi/psi) = 1.
Models can be added up (direct sums), and with infinite residue fields every
nontrivial index is infinite, so a disjunct has a model iff each of its > 1
literals is realised, on its own, by some model that keeps every = 1 literal
of the disjunct at index 1.

Over a valuation ring each pair reduces to one of four shapes and the
indecomposable models that matter are the ring itself, its fraction field and
the Prufer module Q(A)/A; which of them opens which shape is a fixed table.
Over a Bezout domain the same search runs per cell of the case tree that the
symbolic comparison oracle induces on the maximal spectrum.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .formula import And, InvCondition, Not, Or, PPFormula, normalize, print_formula, to_text
from .fv import cs_is_empty, explore, representative
from .gamma import GammaElem
from .oracle import FractionField, FreeModule, Prufer, ZeroModule
from .qe import ComparisonOracle, LocalOracle, normal_form_1var
from .ring import BackendDescriptor

HYPOTHESIS = "the quotient B/M is infinite"
DEFAULT_DNF_CAP = 32


class CapabilityError(Exception):
    """The backend lacks a hypothesis the decision procedure relies on."""


class DNFTooLarge(ValueError):
    pass


# pair forms

@dataclass(frozen=True)
class TorsionPair:
    """[x.a = 0 / x.c = 0] with a not dividing c."""
    a: object
    c: object


@dataclass(frozen=True)
class DivTorsion:
    """[V_delta(x) / x.c = 0]."""
    delta: GammaElem
    c: object


@dataclass(frozen=True)
class DivDiv:
    """[V_d1(x) / V_d2(x)] with d1 < d2."""
    d1: GammaElem
    d2: GammaElem


@dataclass(frozen=True)
class Trivial:
    pass


def _clamped(cmp: ComparisonOracle, d: GammaElem) -> GammaElem:
    one = GammaElem.unit(d.ring)
    return one if cmp.leq_gamma(d, one) else d


def to_pair_form(phi: PPFormula, psi: PPFormula, cmp: ComparisonOracle, var: str | None = None):
    """Classify the pair (phi / psi & phi) in the valuation context of cmp."""
    inv = InvCondition(phi, psi, True)
    var = var or inv.var
    top = normal_form_1var(phi, cmp, var)
    bot = normal_form_1var(inv.psi_and_phi, cmp, var)
    ring = cmp.ring
    a, c = top.a, bot.a
    if not ring.is_zero(a):
        if ring.is_zero(c) or cmp.leq_v(a, c):
            return Trivial()
        return TorsionPair(a, c)
    if not ring.is_zero(c):
        return DivTorsion(_clamped(cmp, top.delta), c)
    d1, d2 = _clamped(cmp, top.delta), _clamped(cmp, bot.delta)
    if cmp.leq_gamma(d2, d1):
        return Trivial()
    return DivDiv(d1, d2)


# which indecomposable opens which pair shape
_OPENS = {
    "free_rank_one": (DivTorsion, DivDiv),
    "fraction_field": (DivTorsion,),
    "prufer": (TorsionPair, DivTorsion),
}


def _catalog(backend: BackendDescriptor):
    return (FreeModule(backend, 1), FractionField(backend), Prufer(backend))


def opens(module, pf) -> bool:
    return isinstance(pf, _OPENS[module.describe()])


def satisfiable_conjunct(target, constraints, backend: BackendDescriptor):
    """A catalog module opening ``target`` and closing every constraint, or None."""
    if not backend.residue_fields_infinite:
        raise CapabilityError(_refusal(backend))
    for m in _catalog(backend):
        if opens(m, target) and not any(opens(m, c) for c in constraints):
            return m
    return None


# sentences

@dataclass(frozen=True)
class DecisionProblem:
    sentence: object
    backend: BackendDescriptor


@dataclass
class Decision:
    valid: bool
    certificate: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "valid" if self.valid else "invalid"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "certificate": self.certificate}


def _refusal(backend: BackendDescriptor) -> str:
    return (f"backend {backend} is refused: deciding sentences requires that "
            f"{HYPOTHESIS} for every maximal ideal M, and this fails here")


def _check_leaves(s):
    if isinstance(s, PPFormula):
        if s.free:
            raise ValueError(f"pp leaf {print_formula(s)} has free variables {list(s.free)}")
        return
    if isinstance(s, InvCondition):
        return
    if isinstance(s, Not):
        _check_leaves(s.arg)
        return
    _check_leaves(s.left)
    _check_leaves(s.right)


def _key(inv: InvCondition):
    return normalize(inv.phi), normalize(inv.psi)


def _pairs(s, out):
    if isinstance(s, InvCondition):
        k = _key(s)
        if k not in out:
            out.append(k)
    elif isinstance(s, Not):
        _pairs(s.arg, out)
    elif isinstance(s, (And, Or)):
        _pairs(s.left, out)
        _pairs(s.right, out)


def _truth(s, assignment) -> bool:
    if isinstance(s, PPFormula):
        return True  # closed pp formulas hold at zero
    if isinstance(s, InvCondition):
        return assignment[_key(s)] == s.gt1
    if isinstance(s, Not):
        return not _truth(s.arg, assignment)
    if isinstance(s, And):
        return _truth(s.left, assignment) and _truth(s.right, assignment)
    return _truth(s.left, assignment) or _truth(s.right, assignment)


def _tautology(s, max_atoms: int = 16) -> bool:
    keys = []
    _pairs(s, keys)
    if len(keys) > max_atoms:
        return False
    for bits in itertools.product((False, True), repeat=len(keys)):
        if not _truth(s, dict(zip(keys, bits))):
            return False
    return True


def _dnf(s, positive: bool, cap: int):
    """Disjuncts (lists of (pair key, gt1, InvCondition)) of s, or of not s."""
    if isinstance(s, PPFormula):
        return [[]] if positive else []
    if isinstance(s, InvCondition):
        return [[(_key(s), s.gt1 == positive, s)]]
    if isinstance(s, Not):
        return _dnf(s.arg, not positive, cap)
    conj = isinstance(s, And) == positive
    left, right = _dnf(s.left, positive, cap), _dnf(s.right, positive, cap)
    if not conj:
        out = left + right
    else:
        out = [l + r for l in left for r in right]
    if sum(len(d) for d in out) > cap:
        raise DNFTooLarge(f"disjunctive normal form exceeds {cap} literals")
    return out


def _local_search(target, constraints, backend):
    cmp = LocalOracle(backend)
    tp = to_pair_form(target.phi, target.psi, cmp, target.var)
    cps = [to_pair_form(c.phi, c.psi, cmp, c.var) for c in constraints]
    m = satisfiable_conjunct(tp, cps, backend)
    return m, tp, cps


def _witness(target, constraints, backend: BackendDescriptor):
    """Certificate entry for a model opening target and closing constraints, or None."""
    target = InvCondition(target.phi, target.psi, True)
    if backend.is_valuation:
        m, tp, _ = _local_search(target, constraints, backend)
        if m is None:
            return None, {"cells": 1, "target_form": type(tp).__name__}
        return {"target": to_text(target), "prime": backend.base.format(backend.prime),
                "module": m.describe(), "pair_form": type(tp).__name__}, None
    ring = backend.base
    cells = 0

    def classify(cmp):
        tp = to_pair_form(target.phi, target.psi, cmp, target.var)
        return tp, [to_pair_form(c.phi, c.psi, cmp, c.var) for c in constraints]

    for guard, (tp, cps) in explore(classify, ring):
        cells += 1
        if cs_is_empty(guard):
            continue
        m = satisfiable_conjunct(tp, cps, backend)
        if m is not None:
            p = representative(guard)
            return {"target": to_text(target), "guard": guard.to_json(),
                    "prime": ring.format(p), "module": m.describe(),
                    "pair_form": type(tp).__name__}, None
    return None, {"cells": cells}


def decide(problem: DecisionProblem, dnf_cap: int = DEFAULT_DNF_CAP) -> Decision:
    s, backend = problem.sentence, problem.backend
    if not backend.residue_fields_infinite:
        raise CapabilityError(_refusal(backend))
    _check_leaves(s)
    if _tautology(s):
        return Decision(True, {"reason": "propositional tautology"})
    disjuncts = _dnf(s, False, dnf_cap)
    trace = []
    for i, lits in enumerate(disjuncts):
        targets = [inv for _, gt1, inv in lits if gt1]
        constraints = [inv for _, gt1, inv in lits if not gt1]
        if not targets:
            return Decision(False, {"disjunct": i, "countermodel": [{"module": "zero"}],
                                    "negation_disjunct": _lits_text(lits)})
        witnesses = []
        for inv in targets:
            w, failure = _witness(inv, constraints, backend)
            if w is None:
                trace.append({"disjunct": i, "blocked_target": to_text(inv), **failure})
                break
            witnesses.append(w)
        else:
            return Decision(False, {"disjunct": i, "countermodel": witnesses,
                                    "negation_disjunct": _lits_text(lits)})
    return Decision(True, {"search": trace, "disjuncts": len(disjuncts)})


def _lits_text(lits) -> list:
    out = []
    for _, gt1, inv in lits:
        out.append(to_text(InvCondition(inv.phi, inv.psi, gt1)))
    return out


def witness_module(entry: dict, backend: BackendDescriptor):
    """Rebuild the module named in a certificate entry, over the local backend it names."""
    local = backend if backend.is_valuation else backend.localize(backend.base.parse(entry["prime"]))
    kind = entry["module"]
    if kind == "free_rank_one":
        return FreeModule(local, 1), local
    if kind == "fraction_field":
        return FractionField(local), local
    if kind == "prufer":
        return Prufer(local), local
    return ZeroModule(local), local

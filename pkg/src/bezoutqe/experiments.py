"""Seeded experiments backing the acceptance checks; each returns plain counts."""
from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field

from .corpus import (
    PPConfig, global_param, global_pp, local_params, local_pp, one_var_pp, pool_for, random_sentence,
)
from .decide import DivDiv, DivTorsion, TorsionPair, _dnf, to_pair_form
from .formula import Eq, Vp, normalize, print_formula
from .gamma import GammaElem
from .fv import (
    closed, cs_complement, cs_contains, cs_difference, cs_intersect, cs_is_empty, cs_subseteq,
    cs_union, decompose, localize_body, open_,
)
from .oracle import CyclicQuotient, FreeModule, eval_pp, pair_index_nontrivial
from .parse import parse_formula
from .qe import LocalOracle, NormalForm1, eliminate, normal_form_1var
from .ring import INF, ZZ, parse_backend


@dataclass
class Tally:
    total: int = 0
    passed: int = 0
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, detail=None, keep: int = 5):
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < keep:
            self.failures.append(detail)

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def summary(self) -> str:
        return f"{self.passed}/{self.total} in {self.seconds:.1f}s"

    def to_json(self) -> dict:
        return {**asdict(self), "ok": self.ok}


def _timed(fn):
    def wrapper(*args, **kw):
        t0 = time.perf_counter()
        tally = fn(*args, **kw)
        tally.seconds = time.perf_counter() - t0
        return tally
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# QE soundness against the oracle

@dataclass(frozen=True)
class SoundnessConfig:
    backends: tuple = ("z_loc:2", "q_poly_loc:T")
    formulas: int = 500
    samples: int = 20
    ranks: tuple = (1, 2)
    pp: PPConfig = PPConfig(max_bound=3, max_atoms=4, max_val=5)
    seed: int = 2024


@_timed
def qe_soundness(cfg: SoundnessConfig = SoundnessConfig()) -> Tally:
    """Truth of eliminate's output equals the oracle's truth of the input."""
    tally = Tally()
    for sel in cfg.backends:
        backend = parse_backend(sel)
        rng = random.Random(f"{cfg.seed}:{sel}")
        cmp = LocalOracle(backend)
        for _ in range(cfg.formulas):
            f = local_pp(rng, backend, cfg.pp)
            g = eliminate(f, cmp)
            names = sorted(set(f.free) | set(g.free))
            for rank in cfg.ranks:
                m = FreeModule(backend, rank)
                for _ in range(cfg.samples):
                    params = local_params(rng, backend, names, rank)
                    ok = eval_pp(f, params, m) == eval_pp(g, params, m)
                    tally.record(ok, (sel, print_formula(f), print_formula(g), repr(params)))
    return tally


# one-variable normal form

@dataclass(frozen=True)
class ShapeConfig:
    backends: tuple = ("z_loc:2", "q_poly_loc:T")
    formulas: int = 100
    samples: int = 20
    seed: int = 7


def nf_shape_ok(g, var: str) -> bool:
    """At most one torsion atom x.a = 0 and one atom V_d(x), nothing else."""
    eqs = [a for a in g.atoms if isinstance(a, Eq)]
    vs = [a for a in g.atoms if isinstance(a, Vp)]
    if g.bound or len(eqs) > 1 or len(vs) > 1 or len(eqs) + len(vs) != len(g.atoms):
        return False
    if any(a.term.vars != (var,) for a in g.atoms):
        return False
    return all(a.term.items[0][1] == a.delta.ring.one for a in vs)


@_timed
def nf_shape(cfg: ShapeConfig = ShapeConfig()) -> Tally:
    tally = Tally()
    for sel in cfg.backends:
        backend = parse_backend(sel)
        rng = random.Random(f"{cfg.seed}:{sel}")
        cmp = LocalOracle(backend)
        for _ in range(cfg.formulas):
            f = one_var_pp(rng, backend)
            nf = normal_form_1var(f, cmp, "m")
            g = nf.to_formula("m")
            ok = nf_shape_ok(g, "m") and eliminate(g, cmp) == g and normal_form_1var(g, cmp, "m") == nf
            for _ in range(cfg.samples):
                params = local_params(rng, backend, ["m"])
                ok = ok and eval_pp(f, params, FreeModule(backend)) == eval_pp(g, params, FreeModule(backend))
            tally.record(ok, (sel, print_formula(f), print_formula(g)))
    return tally


# constructible sets against enumeration

PRIMES_100 = tuple(p for p in range(2, 101) if all(p % q for q in range(2, int(p ** 0.5) + 1)))
GENERIC = "generic"


@dataclass(frozen=True)
class ConstructibleConfig:
    elements: int = 30
    seed: int = 5


def cs_members(s) -> frozenset:
    out = {p for p in PRIMES_100 if cs_contains(s, p)}
    if s.closed == ZZ.is_zero(s.elem):
        out.add(GENERIC)
    return frozenset(out)


def _normalized(s) -> bool:
    if s.kind in ("whole", "empty"):
        return True
    return not ZZ.is_zero(s.elem) and not ZZ.is_unit(s.elem)


def cs_test_elements(cfg: ConstructibleConfig) -> list:
    rng = random.Random(cfg.seed)
    elems = [0, 1, -1]
    while len(elems) < cfg.elements:
        e = 1
        for _ in range(rng.randint(1, 3)):
            e *= rng.choice(PRIMES_100) ** rng.randint(1, 2)
        if e not in elems:
            elems.append(e * rng.choice((1, -1)))
    return elems


@_timed
def constructible_algebra(cfg: ConstructibleConfig = ConstructibleConfig()) -> Tally:
    tally = Tally()
    elems = cs_test_elements(cfg)
    sets = [mk(ZZ, e) for e in elems for mk in (closed, open_)]
    universe = frozenset(PRIMES_100) | {GENERIC}
    for a in sets:
        ma = cs_members(a)
        c = cs_complement(a)
        tally.record(_normalized(c) and cs_members(c) == universe - ma, ("complement", str(a)))
        tally.record(cs_is_empty(a) == (not ma), ("is_empty", str(a)))
        for b in sets:
            mb = cs_members(b)
            for op, ref in ((cs_intersect, ma & mb), (cs_union, ma | mb), (cs_difference, ma - mb)):
                r = op(a, b)
                tally.record(_normalized(r) and cs_members(r) == ref, (op.__name__, str(a), str(b)))
            tally.record(cs_subseteq(a, b) == (ma <= mb), ("subseteq", str(a), str(b)))
    # V(a) minus V(b) = V(c) for the good factorization (c, d) of a against b
    for a in elems:
        for b in elems:
            if a == 0 or b == 0:
                continue
            c, d = ZZ.good_factorization(a, b)
            ok = (c * d in (a, -a) and cs_members(cs_difference(closed(ZZ, a), closed(ZZ, b)))
                  == cs_members(closed(ZZ, c)))
            tally.record(ok, ("good_factorization", a, b))
    return tally


# Feferman-Vaught decomposition

@dataclass(frozen=True)
class FVConfig:
    backends: tuple = ("z", "q_poly")
    formulas: int = 100
    samples: int = 20
    pp: PPConfig = PPConfig(max_bound=3, max_atoms=4)
    seed: int = 99


def fv_test_primes(f, base, pool) -> list:
    coeffs = [c for a in f.atoms for _, c in a.term.items]
    p = base.fresh_irreducible(coeffs + list(pool))
    q = base.fresh_irreducible(coeffs + list(pool) + [p])
    return list(pool) + [p, q]


@_timed
def fv_correctness(cfg: FVConfig = FVConfig()) -> Tally:
    tally = Tally()
    for sel in cfg.backends:
        backend = parse_backend(sel)
        base = backend.base
        rng = random.Random(f"{cfg.seed}:{sel}")
        for _ in range(cfg.formulas):
            f = global_pp(rng, backend, cfg.pp)
            pool = sorted({q for a in f.atoms for _, c in a.term.items for q, _ in
                           base.irreducible_factors(c)} |
                          {q for a in f.atoms if isinstance(a, Vp)
                           for q, _ in base.irreducible_factors(a.delta.num)},
                          key=base.format)
            g = decompose(f, backend)
            ok = g.check_partition()
            detail = (sel, print_formula(f), str(g))
            for p in fv_test_primes(f, base, pool):
                pieces = [(gd, b) for gd, b in g.pieces if cs_contains(gd, p)]
                if len(pieces) != 1:
                    ok = False
                    break
                guard, body = pieces[0]
                loc_body, local = localize_body(body, p, backend, guard)
                m = FreeModule(local)
                for _ in range(cfg.samples):
                    params = {x: global_param(rng, base, pool or pool_for(base), (p,)) for x in f.free}
                    if eval_pp(f, params, m) != eval_pp(loc_body, params, m):
                        ok = False
                        detail = detail + (base.format(p), repr(params))
                        break
            tally.record(ok, detail)
    return tally


# radical membership

@dataclass(frozen=True)
class RadicalConfig:
    pairs: int = 200
    max_degree: int = 4
    seed: int = 17


@_timed
def radical_relation(cfg: RadicalConfig = RadicalConfig()) -> Tally:
    """rad_member against sympy factorizations (a lies in every prime over b)."""
    import sympy

    from .ring import QQT, Poly

    tally = Tally()
    rng = random.Random(cfg.seed)
    primes = (2, 3, 5, 7, 11)
    for _ in range(cfg.pairs):
        b = 0 if rng.random() < 0.05 else rng.choice((1, -1)) * \
            sympy.prod(p ** rng.randint(0, 3) for p in rng.sample(primes, 3))
        a = 0 if rng.random() < 0.05 else rng.choice((1, -1)) * \
            sympy.prod(p ** rng.randint(0, 2) for p in rng.sample(primes, 3))
        a, b = int(a), int(b)
        ref = a == 0 if b == 0 else all(a % p == 0 for p in sympy.factorint(abs(b)))
        tally.record(ZZ.rad_member(a, b) == ref, ("z", a, b))
    t = sympy.Symbol("T")
    factors = [Poly.T(), Poly.T() + 1, Poly.T() ** 2 + 1, Poly.T() - 2, Poly.T() ** 2 - 2]
    for _ in range(cfg.pairs):
        def sample():
            while True:
                x = Poly(rng.choice((1, 2, -3)))
                for q in rng.sample(factors, 2):
                    x = x * q ** rng.randint(0, 2)
                if x.degree() <= cfg.max_degree:
                    return x
        a, b = sample(), sample()
        if rng.random() < 0.05:
            a = Poly(0)
        sb = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(b.coeffs())], t)
        sa = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(a.coeffs())] or [0], t)
        _, fl = sympy.factor_list(sb)
        ref = all(sympy.rem(sa, f) == 0 for f, _ in fl)
        tally.record(QQT.rad_member(a, b) == ref, ("q_poly", str(a), str(b)))
    return tally


# catalog stability for cyclic quotients

@dataclass(frozen=True)
class StabilityConfig:
    backend: str = "q_poly_loc:T"
    probes: int = 200
    extra: int = 6         # probes use k in (N+1, N+1+extra]
    bound_slack: str = "n_plus_1"   # or "two_n_plus_1"
    seed: int = 3


def pair_nfs(pf, ring):
    """The two normal forms (phi, psi & phi) a pair form stands for."""
    one = ring.one
    unit = GammaElem.unit(ring)
    if isinstance(pf, TorsionPair):
        return NormalForm1(pf.a, unit), NormalForm1(pf.c, unit)
    if isinstance(pf, DivTorsion):
        return NormalForm1(ring.zero, pf.delta), NormalForm1(pf.c, pf.delta)
    if isinstance(pf, DivDiv):
        return NormalForm1(ring.zero, pf.d1), NormalForm1(ring.zero, pf.d2)
    return NormalForm1(one, unit), NormalForm1(one, unit)


def _pf_valuations(pf, backend) -> list:
    base, p = backend.base, backend.prime
    vals = []
    for x in vars(pf).values():
        if hasattr(x, "num"):
            vals.append(base.valuation(p, x.num) - base.valuation(p, x.den))
        elif not base.is_zero(x):
            vals.append(base.valuation(p, x))
    return vals


def stability_probes(cfg: StabilityConfig):
    """(pair form, N, k) probes drawn from decision problems on generated sentences."""
    backend = parse_backend(cfg.backend)
    cmp = LocalOracle(backend)
    rng = random.Random(cfg.seed)
    out = []
    while len(out) < cfg.probes:
        s = random_sentence(rng, backend, depth=2)
        for lits in _dnf(s, False, 64):
            forms = [to_pair_form(inv.phi, inv.psi, cmp, inv.var) for _, _, inv in lits]
            forms = [pf for pf in forms if isinstance(pf, (TorsionPair, DivTorsion, DivDiv))]
            vals = [v for pf in forms for v in _pf_valuations(pf, backend) if v != INF]
            n = max(vals, default=0)
            for pf in forms:
                lo = n + 1 if cfg.bound_slack == "n_plus_1" else 2 * n + 1
                out.append((pf, n, rng.randint(lo + 1, lo + cfg.extra)))
                if len(out) == cfg.probes:
                    return backend, out
    return backend, out


@_timed
def catalog_stability(cfg: StabilityConfig = StabilityConfig()) -> Tally:
    """Index of each pair in A/p^k equals its index at the first k above the bound."""
    tally = Tally()
    backend, probes = stability_probes(cfg)
    p = backend.prime
    for pf, n, k in probes:
        phi, both = pair_nfs(pf, backend.ring)
        lo = n + 2 if cfg.bound_slack == "n_plus_1" else 2 * n + 2
        ref = pair_index_nontrivial(phi, both, CyclicQuotient(backend, p ** lo))
        got = pair_index_nontrivial(phi, both, CyclicQuotient(backend, p ** k))
        tally.record(ref == got, (type(pf).__name__, str(vars(pf)), n, k))
    return tally


# parser round trip

@dataclass(frozen=True)
class RoundTripConfig:
    formulas: int = 200
    seed: int = 8


@_timed
def parser_roundtrip(cfg: RoundTripConfig = RoundTripConfig()) -> Tally:
    tally = Tally()
    rng = random.Random(cfg.seed)
    sels = ("z", "q_poly", "z_loc:2", "q_poly_loc:T", "z_loc:3", "q_poly_loc:T^2+1")
    for i in range(cfg.formulas):
        backend = parse_backend(sels[i % len(sels)])
        f = local_pp(rng, backend) if backend.is_valuation else global_pp(rng, backend)
        g = normalize(f)
        text = print_formula(g)
        back = parse_formula(text, backend)
        tally.record(back == g and print_formula(back) == text, (backend.selector(), text))
    return tally


EXPERIMENTS = {
    "qe_soundness": (qe_soundness, SoundnessConfig),
    "nf_shape": (nf_shape, ShapeConfig),
    "constructible_algebra": (constructible_algebra, ConstructibleConfig),
    "fv_correctness": (fv_correctness, FVConfig),
    "radical_relation": (radical_relation, RadicalConfig),
    "catalog_stability": (catalog_stability, StabilityConfig),
    "parser_roundtrip": (parser_roundtrip, RoundTripConfig),
}

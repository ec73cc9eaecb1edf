"""Seeded random generators for formulas, parameters and ring elements."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .formula import And, Eq, InvCondition, Not, Or, PPFormula, Term, Vp, normalize
from .gamma import GammaElem
from .ring import QQT, ZZ, BackendDescriptor, Poly

T = Poly.T()

_Z_UNITS = (1, -1, 3, -3, 5, 7, -9, 11)
_T_UNITS = (Poly(1), Poly(-1), Poly(2), Poly(Fraction(3, 2)), T + 1, 1 - T, T * T + 1, T - 2)


@dataclass(frozen=True)
class PPConfig:
    max_bound: int = 3
    max_atoms: int = 4
    max_val: int = 5
    free_vars: tuple = ("u", "w")
    p_coeff: float = 0.6     # chance that a variable appears in an atom
    p_vatom: float = 0.5
    p_fraction_index: float = 0.15


def local_units(backend: BackendDescriptor):
    p = backend.prime
    base = backend.base
    pool = _Z_UNITS if base is ZZ else _T_UNITS
    return [u for u in pool if not base.divides(p, u)]


def local_scalar(rng: random.Random, backend: BackendDescriptor, max_val: int):
    """unit * p^k with 0 <= k <= max_val."""
    u = rng.choice(local_units(backend))
    return u * backend.prime ** rng.randint(0, max_val)


def local_pp(rng: random.Random, backend: BackendDescriptor, cfg: PPConfig = PPConfig()) -> PPFormula:
    """Random pp formula whose coefficients have local valuations <= cfg.max_val."""
    gring = backend.ring
    p = backend.prime
    nb = rng.randint(0, cfg.max_bound)
    bound = tuple(f"x{i + 1}" for i in range(nb))
    names = bound + tuple(cfg.free_vars)

    def coeff():
        return local_scalar(rng, backend, cfg.max_val)

    def index():
        g = GammaElem.make(gring, p ** rng.randint(1, cfg.max_val))
        if rng.random() < cfg.p_fraction_index:
            g = g / GammaElem.make(gring, p ** rng.randint(1, 2))
        return g

    return _random_pp(rng, bound, names, cfg, coeff, index)


def _random_pp(rng, bound, names, cfg, coeff, index) -> PPFormula:
    atoms = []
    for _ in range(rng.randint(1, cfg.max_atoms)):
        vars_ = [n for n in names if rng.random() < cfg.p_coeff]
        if bound and not any(v in bound for v in vars_) and rng.random() < 0.7:
            vars_.append(rng.choice(bound))
        if not vars_:
            vars_ = [rng.choice(names)]
        t = Term.of({n: coeff() for n in vars_})
        if rng.random() < cfg.p_vatom:
            atoms.append(Vp(index(), t))
        else:
            atoms.append(Eq(t))
    return PPFormula(bound, tuple(atoms))


def local_param(rng: random.Random, backend: BackendDescriptor, max_val: int = 8):
    if rng.random() < 0.15:
        return backend.base.zero
    return local_scalar(rng, backend, max_val)


def local_params(rng, backend, names, rank=1, max_val=8) -> dict:
    out = {}
    for n in names:
        vals = tuple(local_param(rng, backend, max_val) for _ in range(rank))
        out[n] = vals if rank > 1 else vals[0]
    return out


# global formulas built over a few irreducibles

Z_POOL = (2, 3, 5)
T_POOL = (T, T + 1, T * T + 1)


def pool_for(base):
    return Z_POOL if base is ZZ else T_POOL


def pooled_scalar(rng: random.Random, base, pool, max_exp: int = 2):
    c = base.one
    for q in pool:
        c = c * q ** rng.randint(0, max_exp)
    if base is ZZ:
        return c * rng.choice((1, -1))
    return c * rng.choice((Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 3)))


def global_pp(rng: random.Random, backend: BackendDescriptor, cfg: PPConfig = PPConfig(),
              n_irreducibles: int = 3) -> PPFormula:
    """Random pp formula whose coefficients factor over at most three irreducibles."""
    base = backend.base
    pool = rng.sample(pool_for(base), n_irreducibles)
    nb = rng.randint(0, cfg.max_bound)
    bound = tuple(f"x{i + 1}" for i in range(nb))
    names = bound + tuple(cfg.free_vars)

    def coeff():
        return pooled_scalar(rng, base, pool)

    def index():
        while True:
            e = pooled_scalar(rng, base, pool)
            if not base.is_unit(e):
                return GammaElem.make(base, e)

    return _random_pp(rng, bound, names, cfg, coeff, index)


def global_param(rng: random.Random, base, pool, fresh=()):
    if rng.random() < 0.15:
        return base.zero
    c = pooled_scalar(rng, base, tuple(pool), max_exp=3)
    if fresh and rng.random() < 0.3:
        c = c * rng.choice(tuple(fresh))
    return c


def one_var_pp(rng: random.Random, backend: BackendDescriptor, cfg: PPConfig = PPConfig()) -> PPFormula:
    return local_pp(rng, backend, PPConfig(cfg.max_bound, cfg.max_atoms, cfg.max_val, ("m",),
                                           cfg.p_coeff, cfg.p_vatom, cfg.p_fraction_index))


def random_sentence(rng: random.Random, backend: BackendDescriptor, depth: int = 2):
    """Boolean sentence over invariant conditions in the variable m."""
    if depth == 0 or rng.random() < 0.3:
        if backend.is_valuation:
            phi = one_var_pp(rng, backend, PPConfig(max_bound=1, max_atoms=2, max_val=3))
            psi = one_var_pp(rng, backend, PPConfig(max_bound=1, max_atoms=2, max_val=3))
        else:
            cfg = PPConfig(max_bound=1, max_atoms=2, free_vars=("m",))
            phi = global_pp(rng, backend, cfg, 2)
            psi = global_pp(rng, backend, cfg, 2)
        return InvCondition(phi, psi, rng.random() < 0.5)
    k = rng.random()
    if k < 0.2:
        return Not(random_sentence(rng, backend, depth - 1))
    node = And if k < 0.6 else Or
    return node(random_sentence(rng, backend, depth - 1), random_sentence(rng, backend, depth - 1))


__all__ = [
    "PPConfig", "local_pp", "local_params", "local_scalar", "global_pp", "global_param",
    "one_var_pp", "random_sentence", "pool_for", "normalize", "QQT",
]

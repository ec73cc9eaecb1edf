"""Ground-truth evaluation of pp formulas in concrete modules.

Formulas become linear systems y.A = b which are solved by diagonalizing A
with unimodular Bezout transforms.  V atoms are read through the divisibility
interpretation: V_delta(t) holds iff t = z*a for some z, where v(a) = delta.

This module deliberately depends on nothing but ``ring`` and ``formula``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .formula import Eq, PPFormula, Vp
from .ring import INF, ZZ, BackendDescriptor, Frac, GlobalRing

MAX_UNKNOWNS = 64


@dataclass(frozen=True)
class FreeModule:
    backend: BackendDescriptor
    rank: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")

    def describe(self) -> str:
        return "free_rank_one" if self.rank == 1 else f"free:{self.rank}"


@dataclass(frozen=True)
class CyclicQuotient:
    """A/cA over a valuation backend."""

    backend: BackendDescriptor
    c: object

    def __post_init__(self):
        if not self.backend.is_valuation:
            raise ValueError("cyclic quotients live over valuation backends")
        r = self.backend.ring
        if r.is_zero(self.c) or r.is_unit(self.c):
            raise ValueError("c must be a nonzero non-unit")

    def describe(self) -> str:
        return f"cyclic:{self.backend.base.format(self.c)}"


@dataclass(frozen=True)
class FractionField:
    backend: BackendDescriptor

    def describe(self) -> str:
        return "fraction_field"


@dataclass(frozen=True)
class Prufer:
    """Q(A)/A for a valuation backend A: divisible, every element torsion."""

    backend: BackendDescriptor

    def describe(self) -> str:
        return "prufer"


@dataclass(frozen=True)
class ZeroModule:
    backend: BackendDescriptor

    def describe(self) -> str:
        return "zero"


@dataclass(frozen=True)
class LinearSystem:
    """y.A = b: ``matrix`` has one row per unknown and one column per condition."""

    unknowns: tuple
    matrix: tuple
    rhs: tuple  # per condition, a tuple of ``width`` ring elements
    width: int = 1


# linear systems

def _index_element(delta, backend: BackendDescriptor):
    """A ring element a with v(a) = delta, or None when V_delta is everything."""
    base = backend.base
    if backend.is_valuation:
        p = backend.prime
        k = base.valuation(p, delta.num) - base.valuation(p, delta.den)
        return p ** k if k > 0 else None
    if delta.den != base.one:
        raise ValueError(f"fractional index {delta} has no realization over {backend}")
    return None if base.is_unit(delta.num) else delta.num


def _components(value, width: int):
    if isinstance(value, tuple):
        if len(value) != width:
            raise ValueError(f"expected an element with {width} components")
        return value
    if width != 1:
        raise ValueError(f"expected an element with {width} components")
    return (value,)


def _width(m) -> int:
    return m.rank if isinstance(m, FreeModule) else 1


def to_linear_system(f: PPFormula, params: dict, m, max_unknowns: int = MAX_UNKNOWNS) -> LinearSystem:
    backend = m.backend
    base = backend.base
    width = _width(m)
    bound = list(f.bound)
    unknowns = list(bound)
    free = set(f.free)
    for var in free:
        if var not in params:
            raise KeyError(f"unassigned variable {var!r}")
    zero = base.zero
    cols = []  # (coefficient dict over unknowns, rhs components)
    for atom in f.atoms:
        coeffs = {}
        rhs = [zero] * width
        for var, c in atom.term.items:
            if var in bound:
                coeffs[var] = c
            else:
                comps = _components(params[var], width)
                for k in range(width):
                    rhs[k] = rhs[k] - c * comps[k]
        if isinstance(atom, Vp):
            a = _index_element(atom.delta, backend)
            if a is None:
                continue
            z = f"_z{len(unknowns)}"
            unknowns.append(z)
            coeffs[z] = -a
        elif not isinstance(atom, Eq):
            raise TypeError(f"unknown atom {atom!r}")
        cols.append((coeffs, tuple(rhs)))
    if len(unknowns) > max_unknowns:
        raise ValueError(f"system has {len(unknowns)} unknowns, cap is {max_unknowns}")
    matrix = tuple(tuple(col[0].get(u, zero) for col in cols) for u in unknowns)
    rhs = tuple(col[1] for col in cols)
    return LinearSystem(tuple(unknowns), matrix, rhs, width)


# diagonalization

def _bezout_block(ring, x, y):
    """Unimodular [[u, v], [s, w]] sending (x, y) to (gcd, 0).

    Plain elimination when x already divides y, so a pivot only ever changes
    when it strictly drops in the divisibility order.
    """
    if ring.divides(x, y):
        return ring.one, ring.zero, -ring.quo(y, x), ring.one
    g, u, v = ring.gcd_bezout(x, y)
    return u, v, -ring.quo(y, g), ring.quo(x, g)


@lru_cache(maxsize=8192)
def diagonalize(ring: GlobalRing, matrix: tuple, n: int):
    """P, D, Q with P.A.Q = D diagonal, unimodular P, Q and d1 | d2 | ... .

    ``matrix`` is k x n; n is passed separately so that k = 0 works.
    """
    k = len(matrix)
    D = [list(row) for row in matrix]
    P = [[ring.one if i == j else ring.zero for j in range(k)] for i in range(k)]
    Q = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
    iz = ring.is_zero

    def rows_combine(M, i, j, u, v, s, w):
        # row_i <- u*row_i + v*row_j ; row_j <- s*row_i + w*row_j
        ri, rj = M[i], M[j]
        M[i] = [u * a + v * b for a, b in zip(ri, rj)]
        M[j] = [s * a + w * b for a, b in zip(ri, rj)]

    def cols_combine(M, i, j, u, v, s, w):
        for row in M:
            a, b = row[i], row[j]
            row[i] = u * a + v * b
            row[j] = s * a + w * b

    for t in range(min(k, n)):
        piv = next(((i, j) for j in range(t, n) for i in range(t, k) if not iz(D[i][j])), None)
        if piv is None:
            break
        i, j = piv
        D[t], D[i] = D[i], D[t]
        P[t], P[i] = P[i], P[t]
        for row in D:
            row[t], row[j] = row[j], row[t]
        for row in Q:
            row[t], row[j] = row[j], row[t]
        while True:
            dirty = False
            for i in range(t + 1, k):
                if iz(D[i][t]):
                    continue
                u, v, s, w = _bezout_block(ring, D[t][t], D[i][t])
                rows_combine(D, t, i, u, v, s, w)
                rows_combine(P, t, i, u, v, s, w)
            for j in range(t + 1, n):
                if iz(D[t][j]):
                    continue
                u, v, s, w = _bezout_block(ring, D[t][t], D[t][j])
                cols_combine(D, t, j, u, v, s, w)
                cols_combine(Q, t, j, u, v, s, w)
                dirty = True
            if dirty and any(not iz(D[i][t]) for i in range(t + 1, k)):
                continue
            bad = next((i for i in range(t + 1, k) for j in range(t + 1, n)
                        if not ring.divides(D[t][t], D[i][j])), None)
            if bad is None:
                break
            D[t] = [x + y for x, y in zip(D[t], D[bad])]
            P[t] = [x + y for x, y in zip(P[t], P[bad])]
    diag = tuple(D[i][i] for i in range(min(k, n)))
    return tuple(map(tuple, P)), diag, tuple(map(tuple, Q))


# solving

def _local_den(backend, values):
    """Common local-unit denominator s and the numerators s*value."""
    base = backend.base
    den = base.one
    for x in values:
        if isinstance(x, Frac):
            den = base.lcm(den, x.den)
    out = []
    for x in values:
        if isinstance(x, Frac):
            out.append(x.num * base.quo(den, x.den))
        else:
            out.append(x * den)
    return den, out


def _val(backend, x):
    return backend.base.valuation(backend.prime, x)


def _frac(backend, num, den):
    f = Frac.make(backend.base, num, den)
    return f.num if backend.base.is_unit(f.den) and f.den == backend.base.one else f


def solvable(sys: LinearSystem, m):
    """(True, witness) or (False, None); every witness is checked by substitution."""
    if isinstance(m, ZeroModule):
        return True, {u: (m.backend.base.zero,) * sys.width for u in sys.unknowns}
    if not isinstance(m, (FreeModule, CyclicQuotient)):
        raise NotImplementedError(f"no evaluator for {m.describe()}")
    backend = m.backend
    base = backend.base
    k, n = len(sys.unknowns), len(sys.rhs)
    if n == 0:
        return True, {u: (base.zero,) * sys.width for u in sys.unknowns}
    P, diag, Q = diagonalize(base, sys.matrix, n)
    r = sum(1 for d in diag if not base.is_zero(d))
    witness_cols = []
    for comp in range(sys.width):
        b = [sys.rhs[j][comp] for j in range(n)]
        den, b = _local_den(backend, b) if backend.is_valuation else (base.one, b)
        c = [sum((b[i] * Q[i][j] for i in range(n)), base.zero) for j in range(n)]
        z = _solve_diagonal(diag, r, c, m)
        if z is None:
            return False, None
        z = z + [base.zero] * (k - len(z))
        y = [sum((z[i] * P[i][j] for i in range(k)), base.zero) for j in range(k)]
        if backend.is_valuation and den != base.one:
            y = [yy * Frac.make(base, base.one, den) for yy in y]
        witness_cols.append(y)
    witness = {u: tuple(col[i] for col in witness_cols) for i, u in enumerate(sys.unknowns)}
    if not check_witness(sys, witness, m):
        raise AssertionError("oracle produced a witness that fails substitution")
    return True, witness


def _solve_diagonal(diag, r, c, m):
    backend = m.backend
    base = backend.base
    z = []
    if isinstance(m, CyclicQuotient):
        vc = _val(backend, m.c)
        for i in range(r):
            vd, vb = _val(backend, diag[i]), _val(backend, c[i])
            if min(vd, vc) > vb:
                return None
            if vb >= vc:
                z.append(base.zero)
            else:
                z.append(_mod_quotient(backend, c[i], diag[i], m.c))
        if any(_val(backend, x) < vc for x in c[r:]):
            return None
        return z
    for i in range(r):
        if backend.is_valuation:
            if _val(backend, diag[i]) > _val(backend, c[i]):
                return None
            z.append(_frac(backend, c[i], diag[i]))
        else:
            if not base.divides(diag[i], c[i]):
                return None
            z.append(base.quo(c[i], diag[i]))
    if any(not base.is_zero(x) for x in c[r:]):
        return None
    return z


def _mod_quotient(backend, b, d, c):
    """A base-ring z with z*d = b modulo c, given v(d) <= v(b) < v(c)."""
    base = backend.base
    p = backend.prime
    k = _val(backend, d)
    pk = p ** k
    b1, d1 = base.quo(b, pk), base.quo(d, pk)
    # d1 is a local unit, hence invertible modulo c
    g, u, _ = base.gcd_bezout(d1, c)
    if not base.is_unit(g):
        raise AssertionError("local unit not invertible modulo c")
    return _reduce(base, b1 * u, c)


def _reduce(base, x, c):
    if isinstance(x, int):
        return x % abs(c)
    return x % c


def _equal_in(m, lhs, rhs) -> bool:
    backend = m.backend
    base = backend.base
    diff = lhs - rhs
    if isinstance(m, CyclicQuotient):
        num = diff.num if isinstance(diff, Frac) else diff
        return _val(backend, num) >= _val(backend, m.c)
    if isinstance(diff, Frac):
        return diff.is_zero()
    return base.is_zero(diff)


def check_witness(sys: LinearSystem, witness: dict, m) -> bool:
    base = m.backend.base
    for j, rhs in enumerate(sys.rhs):
        for comp in range(sys.width):
            acc = base.zero
            for i, u in enumerate(sys.unknowns):
                a = sys.matrix[i][j]
                if not base.is_zero(a):
                    acc = witness[u][comp] * a + acc
            if not _equal_in(m, acc, rhs[comp]):
                return False
    return True


def eval_pp(f: PPFormula, params: dict, m, max_unknowns: int = MAX_UNKNOWNS) -> bool:
    if isinstance(m, ZeroModule):
        return True
    return solvable(to_linear_system(f, params, m, max_unknowns), m)[0]


# pair indices in closed form

def _nf_parts(nf):
    if isinstance(nf, tuple):
        return nf
    return nf.a, nf.delta


def _subgroup_size(nf, m):
    """Position of the subgroup defined by x.a = 0 & V_delta(x) in m's chain of subgroups."""
    backend = m.backend
    base = backend.base
    a, delta = _nf_parts(nf)
    va = INF if base.is_zero(a) else _val(backend, a)
    dl = max(0, _val(backend, delta.num) - _val(backend, delta.den))
    if isinstance(m, CyclicQuotient):
        k = _val(backend, m.c)
        e = min(k, max(dl, k - min(va, k)))
        return k - e
    if isinstance(m, FreeModule):
        return -INF if va != INF else -dl
    if isinstance(m, FractionField):
        return 0 if va != INF else 1
    if isinstance(m, Prufer):
        return va
    if isinstance(m, ZeroModule):
        return 0
    raise TypeError(f"unknown module {m!r}")


def pair_index_nontrivial(phi, psi, m) -> bool:
    """True iff phi(m) strictly contains psi(m) & phi(m)."""
    if not m.backend.is_valuation:
        raise ValueError("pair indices are computed over valuation backends")
    return _subgroup_size(psi, m) < _subgroup_size(phi, m)


def module_from_selector(text: str, backend: BackendDescriptor):
    """``free:<rank>``, ``cyclic:<element>`` (or ``cyclic:<p>^<k>``), ``fraction_field``,
    ``prufer`` or ``zero``."""
    kind, _, arg = text.partition(":")
    if kind == "free":
        return FreeModule(backend, int(arg or 1))
    if kind == "cyclic":
        base_text, hat, exp = arg.rpartition("^")
        if hat and exp.strip().isdigit() and backend.base is ZZ:
            return CyclicQuotient(backend, backend.base.parse(base_text) ** int(exp))
        return CyclicQuotient(backend, backend.base.parse(arg))
    if kind == "fraction_field":
        return FractionField(backend)
    if kind == "prufer":
        return Prufer(backend)
    if kind == "zero":
        return ZeroModule(backend)
    raise ValueError(f"unknown module selector {text!r}")

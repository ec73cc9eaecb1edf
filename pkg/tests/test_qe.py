import random

import pytest

from bezoutqe.corpus import PPConfig, local_params, local_pp, one_var_pp
from bezoutqe.formula import PPFormula, normalize, print_formula
from bezoutqe.gamma import GammaElem
from bezoutqe.oracle import FreeModule, eval_pp
from bezoutqe.parse import parse_formula
from bezoutqe.qe import LocalOracle, NormalForm1, _steps, eliminate, normal_form_1var
from bezoutqe.ring import Poly, parse_backend

Z2 = parse_backend("z_loc:2")
QT_T = parse_backend("q_poly_loc:T")
T = Poly.T()


def qe(text, backend=Z2):
    return eliminate(parse_formula(text, backend), LocalOracle(backend))


def test_single_equation():
    assert print_formula(qe("E x . x*2 = y")) == "V[v(2)](y)"
    assert print_formula(qe("E x . x*(T) = y", QT_T)) == "V[v(T)](y)"


def test_equation_with_congruence():
    g = qe("E x . x*4 = y & V[v(8)](x*2 - z)")
    # V_{v(4)}(y) and V_{v(16)}(z*2 - y), up to sign and atom order
    expected = normalize(parse_formula("V[v(4)](y) & V[v(16)](z*2 - y)", Z2))
    assert set(g.atoms) == set(expected.atoms)


def test_vacuous_quantifier():
    assert print_formula(qe("E x . y*3 = 0")) == "y*3 = 0"


def test_output_keeps_free_variables():
    g = qe("E x . x*2 = y & x*4 = z")
    assert g.bound == ()
    assert g.free == ("y", "z")


def test_normal_form_examples():
    cmp = LocalOracle(Z2)
    two = GammaElem.make(Z2.ring, 2)
    assert normal_form_1var(parse_formula("x*4 = 0 & x*6 = 0", Z2), cmp) == \
        NormalForm1(2, GammaElem.unit(Z2.ring))
    assert normal_form_1var(parse_formula("V[v(4)](x*2)", Z2), cmp) == NormalForm1(0, two)
    empty = PPFormula((), (), declared=("x",))
    assert normal_form_1var(empty, cmp) == NormalForm1(0, GammaElem.unit(Z2.ring))


def test_normal_form_rejects_mixed_atoms():
    with pytest.raises(ValueError):
        normal_form_1var(parse_formula("x*2 = y", Z2), LocalOracle(Z2), "x")


def test_infinite_index_rejected():
    from bezoutqe.formula import Term, Vp
    from bezoutqe.gamma import Infinity
    with pytest.raises((ValueError, TypeError)):
        PPFormula((), (Vp(Infinity, Term.var("y", 1)),))


def _agree(f, g, backend, rng, n):
    for rank in (1, 2):
        m = FreeModule(backend, rank)
        for _ in range(n):
            params = local_params(rng, backend, sorted(set(f.free) | set(g.free)), rank)
            if eval_pp(f, params, m) != eval_pp(g, params, m):
                return False, params
    return True, None


@pytest.mark.parametrize("backend", [Z2, QT_T], ids=["z_loc:2", "q_poly_loc:T"])
def test_step_local_soundness(backend):
    # stopping the rewriter after any number of steps keeps the truth value
    rng = random.Random(11)
    cmp = LocalOracle(backend)
    for _ in range(25):
        f = normalize(local_pp(rng, backend, PPConfig(max_val=3)))
        n_steps = sum(1 for _ in _steps(f, cmp))
        prev = f
        for k in range(n_steps + 1):
            g = eliminate(f, cmp, max_steps=k)
            ok, params = _agree(prev, g, backend, rng, 4)
            assert ok, (print_formula(prev), print_formula(g), params)
            prev = g
        assert prev.bound == ()


@pytest.mark.parametrize("backend", [Z2, QT_T], ids=["z_loc:2", "q_poly_loc:T"])
def test_normal_form_shape_and_fixpoint(backend):
    rng = random.Random(12)
    cmp = LocalOracle(backend)
    for _ in range(40):
        f = one_var_pp(rng, backend)
        nf = normal_form_1var(f, cmp, "m")
        g = nf.to_formula("m")
        assert len(g.atoms) <= 2 and g.bound == ()
        assert eliminate(g, cmp) == g
        assert normal_form_1var(g, cmp, "m") == nf
        ok, params = _agree(f, g, backend, rng, 5)
        assert ok, (print_formula(f), print_formula(g), params)


def test_deterministic_output():
    rng = random.Random(4)
    fs = [local_pp(rng, Z2) for _ in range(20)]
    out1 = [print_formula(eliminate(f, LocalOracle(Z2))) for f in fs]
    out2 = [print_formula(eliminate(f, LocalOracle(Z2))) for f in fs]
    assert out1 == out2

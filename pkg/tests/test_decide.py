import random

import pytest
from decide_suite import GLOBAL, LOCAL, SUITE, verify_certificate

from bezoutqe.corpus import random_sentence
from bezoutqe.decide import (
    HYPOTHESIS, CapabilityError, DecisionProblem, DivDiv, DivTorsion, DNFTooLarge, Trivial,
    TorsionPair, decide, satisfiable_conjunct, to_pair_form,
)
from bezoutqe.formula import Not, Or
from bezoutqe.gamma import GammaElem
from bezoutqe.oracle import Prufer
from bezoutqe.parse import parse_formula, parse_sentence
from bezoutqe.qe import LocalOracle
from bezoutqe.ring import Poly, parse_backend

Z2 = parse_backend("z_loc:2")
QT = parse_backend(GLOBAL)
QT_T = parse_backend(LOCAL)
T = Poly.T()


def run(text, backend, **kw):
    return decide(DecisionProblem(parse_sentence(text, backend), backend), **kw)


def test_pair_form_examples():
    cmp = LocalOracle(Z2)
    pf = to_pair_form(parse_formula("m*4 = 0", Z2), parse_formula("m*2 = 0", Z2), cmp)
    assert pf == TorsionPair(4, 2)
    pf = to_pair_form(parse_formula("V[v(2)](m)", Z2), parse_formula("m*4 = 0 & V[v(2)](m)", Z2), cmp)
    assert pf == DivTorsion(GammaElem.make(Z2.ring, 2), 4)
    phi = parse_formula("E n . n*2 = m", Z2)
    assert to_pair_form(phi, phi, cmp) == Trivial()
    pf = to_pair_form(parse_formula("V[v(2)](m)", Z2), parse_formula("V[v(8)](m)", Z2), cmp)
    assert pf == DivDiv(GammaElem.make(Z2.ring, 2), GammaElem.make(Z2.ring, 8))


def test_pair_form_rejects_two_variables():
    with pytest.raises(ValueError):
        to_pair_form(parse_formula("m = k", Z2), parse_formula("m = 0", Z2), LocalOracle(Z2))


def test_satisfiable_conjunct_examples():
    r = QT_T.ring
    tp = TorsionPair(T * T, T)
    assert satisfiable_conjunct(tp, [], QT_T) is not None
    # E = K/A opens the torsion pair and has V_1 = V_T = E, so it closes DivDiv(1, T)
    m = satisfiable_conjunct(tp, [DivDiv(GammaElem.unit(r), GammaElem.make(r, T))], QT_T)
    assert m == Prufer(QT_T)
    assert satisfiable_conjunct(Trivial(), [], QT_T) is None
    with pytest.raises(CapabilityError):
        satisfiable_conjunct(tp, [], Z2)


def test_decide_examples():
    s = "Inv(E n. n*(T) = m | m = 0) >1"
    d = run(s, QT)
    assert d.verdict == "invalid"
    n = decide(DecisionProblem(Not(parse_sentence(s, QT)), QT))
    assert n.verdict == "invalid"
    assert n.certificate["countermodel"][0]["module"] != "zero"
    sigma = parse_sentence(s, QT)
    assert decide(DecisionProblem(Or(sigma, Not(sigma)), QT)).certificate == {"reason": "propositional tautology"}
    assert run("Inv(m*(T) = 0 | m*(T) = 0) >1", QT).verdict == "invalid"


def test_refuses_finite_residue_fields():
    for sel in ("z", "z_loc:2"):
        b = parse_backend(sel)
        with pytest.raises(CapabilityError) as e:
            run("Inv(m = 0 | m = 0) >1", b)
        assert HYPOTHESIS in str(e.value)


def test_pp_leaf_with_free_variable_rejected():
    with pytest.raises(ValueError):
        run("PP(m = 0)", QT)


def test_dnf_cap():
    lit = "Inv(m*(T) = 0 | m = 0) >1"
    s = " & ".join(f"({lit} | Inv(m*(T+{k}) = 0 | m = 0) >1)" for k in range(1, 7))
    with pytest.raises(DNFTooLarge):
        run(s, QT, dnf_cap=8)


@pytest.mark.parametrize("backend,text,expected", SUITE)
def test_suite_verdicts(backend, text, expected):
    b = parse_backend(backend)
    d = run(text, b)
    assert d.verdict == expected
    if not d.valid:
        verify_certificate(d, b)


@pytest.mark.parametrize("backend", [QT, QT_T], ids=[GLOBAL, LOCAL])
def test_coherence_on_random_sentences(backend):
    rng = random.Random(31)
    for _ in range(30):
        s = random_sentence(rng, backend, depth=2)
        d, n = decide(DecisionProblem(s, backend)), decide(DecisionProblem(Not(s), backend))
        assert not (d.valid and n.valid)
        for x in (d, n):
            if not x.valid:
                verify_certificate(x, backend)


def test_valuation_and_bezout_agree_on_powers_of_t():
    for backend, text, _ in SUITE:
        if backend != LOCAL or "T+" in text:
            continue
        local = run(text, QT_T).verdict
        assert run(text, QT).verdict == local, text


def test_certificate_json_shape():
    d = run("Inv(m*(T^2) = 0 | m*(T) = 0) >1", QT)
    js = d.to_json()
    assert js["verdict"] == "invalid"
    assert {"disjunct", "countermodel", "negation_disjunct"} <= set(js["certificate"])
    d = run("Inv(m*(T^2) = 0 | m*(T) = 0) =1", QT)
    entry = d.certificate["countermodel"][0]
    assert {"target", "guard", "prime", "module", "pair_form"} <= set(entry)

"""Recursive-descent parser for pp formulas and sentences."""
from __future__ import annotations

import re

from .formula import And, Eq, InvCondition, Not, Or, PPFormula, Term, Vp
from .gamma import GammaElem
from .ring import BackendDescriptor, Poly, RingParseError


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_VAR = re.compile(r"[a-z][a-z0-9]*")
_NUM = re.compile(r"\d+")


def strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


class _Parser:
    def __init__(self, text: str, backend: BackendDescriptor):
        self.s = text
        self.i = 0
        self.backend = backend
        self.base = backend.base

    # scanning helpers
    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self, lit: str) -> bool:
        self.ws()
        return self.s.startswith(lit, self.i)

    def accept(self, lit: str) -> bool:
        if self.peek(lit):
            self.i += len(lit)
            return True
        return False

    def expect(self, lit: str):
        if not self.accept(lit):
            self.fail(f"expected {lit!r}")

    def fail(self, msg: str):
        raise ParseError(msg, self.i)

    def at_end(self) -> bool:
        self.ws()
        return self.i >= len(self.s)

    def ident(self):
        self.ws()
        m = _IDENT.match(self.s, self.i)
        return m.group(0) if m else None

    def keyword(self, kw: str) -> bool:
        """Accept kw when it is a whole identifier."""
        if self.ident() == kw:
            self.i += len(kw)
            return True
        return False

    def variable(self) -> str:
        name = self.ident()
        if name is None:
            self.fail("expected a variable")
        if not _VAR.fullmatch(name):
            self.fail(f"unknown variable class {name!r}")
        self.i += len(name)
        return name

    def balanced(self) -> str:
        """Raw text inside a parenthesised group; the '(' is already consumed."""
        depth, start = 1, self.i
        while self.i < len(self.s):
            ch = self.s[self.i]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    raw = self.s[start:self.i]
                    self.i += 1
                    return raw
            self.i += 1
        self.fail("unbalanced parenthesis")

    def ring_value(self, raw: str, pos: int):
        try:
            return self.base.parse(raw)
        except RingParseError as e:
            raise ParseError(f"scalar not parseable in backend {self.backend}: {e}", pos) from None

    def scalar(self):
        self.ws()
        pos = self.i
        if self.accept("("):
            return self.ring_value(self.balanced(), pos)
        m = _NUM.match(self.s, self.i)
        if not m:
            self.fail("expected a scalar")
        self.i = m.end()
        raw = m.group(0)
        if isinstance(self.base.one, Poly) and self.peek("/"):
            save = self.i
            self.accept("/")
            self.ws()
            m2 = _NUM.match(self.s, self.i)
            if m2:
                self.i = m2.end()
                raw += "/" + m2.group(0)
            else:
                self.i = save
        return self.ring_value(raw, pos)

    # pp formulas
    def ppformula(self) -> PPFormula:
        bound = []
        save = self.i
        if self.keyword("E"):
            while not self.peek("."):
                v = self.variable()
                if v in bound:
                    self.fail(f"variable {v!r} bound twice")
                bound.append(v)
            self.expect(".")
            if not bound:
                self.i = save
                self.fail("quantifier without variables")
        atoms = [self.atom()]
        while self.accept("&"):
            atoms.append(self.atom())
        if len(atoms) == 1 and isinstance(atoms[0], Eq) and atoms[0].term.is_zero():
            atoms = []  # a lone "0 = 0" is how the empty conjunction prints
        return PPFormula(tuple(bound), tuple(atoms))

    def atom(self):
        if self.accept("V["):
            delta = self.gamma()
            self.expect("]")
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Vp(delta, t)
        lhs = self.term()
        self.expect("=")
        rhs = self.term()
        return Eq(lhs - rhs)

    def term(self) -> Term:
        sign = -1 if self.accept("-") else 1
        acc = self.mono().scale(sign)
        while True:
            if self.accept("+"):
                acc = acc + self.mono()
            elif self.accept("-"):
                acc = acc - self.mono()
            else:
                return acc

    def mono(self) -> Term:
        self.ws()
        if self.ident() is not None:
            name = self.variable()
            c = self.scalar() if self.accept("*") else self.base.one
            return Term.var(name, c)
        pos = self.i
        c = self.scalar()
        if not self.accept("*"):
            if self.base.is_zero(c):
                return Term()
            raise ParseError("constant terms other than 0 are not allowed", pos)
        name = self.variable()
        return Term.var(name, c)

    def gamma(self) -> GammaElem:
        acc = self.gfactor()
        while True:
            if self.accept("*"):
                acc = acc * self.gfactor()
            elif self.accept("/"):
                acc = acc / self.gfactor()
            else:
                return acc

    def gfactor(self) -> GammaElem:
        self.ws()
        pos = self.i
        if self.accept("("):
            g = self.gamma()
            self.expect(")")
            return g
        if not (self.keyword("v") and self.accept("(")):
            self.fail("expected v(...)")
        a = self.ring_value(self.balanced(), pos)
        ring = self.backend.ring
        if ring.is_zero(a):
            raise ParseError("index v(0) is not allowed", pos)
        return GammaElem.make(ring, a)

    # sentences
    def sentence(self):
        acc = self.conj()
        while self.accept("|"):
            acc = Or(acc, self.conj())
        return acc

    def conj(self):
        acc = self.unary()
        while self.accept("&"):
            acc = And(acc, self.unary())
        return acc

    def unary(self):
        if self.accept("!"):
            return Not(self.unary())
        pos = self.i
        if self.keyword("Inv"):
            self.expect("(")
            phi = self.ppformula()
            self.expect("|")
            psi = self.ppformula()
            self.expect(")")
            if self.accept(">"):
                gt1 = True
            elif self.accept("="):
                gt1 = False
            else:
                self.fail("expected '>1' or '=1'")
            self.expect("1")
            try:
                return InvCondition(phi, psi, gt1)
            except ValueError as e:
                raise ParseError(str(e), pos) from None
        if self.keyword("PP"):
            self.expect("(")
            f = self.ppformula()
            self.expect(")")
            return f
        if self.accept("("):
            s = self.sentence()
            self.expect(")")
            return s
        self.fail("expected a sentence")


def parse_formula(text: str, backend: BackendDescriptor) -> PPFormula:
    p = _Parser(strip_comments(text), backend)
    f = p.ppformula()
    if not p.at_end():
        p.fail("unexpected trailing input")
    return f


def parse_sentence(text: str, backend: BackendDescriptor):
    p = _Parser(strip_comments(text), backend)
    s = p.sentence()
    if not p.at_end():
        p.fail("unexpected trailing input")
    return s


def parse(text: str, backend: BackendDescriptor):
    """A pp formula, or failing that a Boolean sentence."""
    try:
        return parse_formula(text, backend)
    except ParseError as e1:
        try:
            return parse_sentence(text, backend)
        except ParseError as e2:
            raise (e1 if e1.pos >= e2.pos else e2) from None

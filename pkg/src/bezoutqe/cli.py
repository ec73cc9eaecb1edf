"""Command line front end: qe, decompose, decide, eval and cs subcommands."""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import fv
from .decide import DEFAULT_DNF_CAP, CapabilityError, DecisionProblem, DNFTooLarge, decide
from .formula import print_formula
from .oracle import MAX_UNKNOWNS, eval_pp, module_from_selector
from .parse import ParseError, _Parser, parse_formula, parse_sentence, strip_comments
from .qe import LocalOracle, eliminate, normal_form_1var
from .ring import BackendDescriptor, RingParseError, parse_backend

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_CAPABILITY = 0, 1, 2, 3


@dataclass(frozen=True)
class CliConfig:
    command: str
    backend: str
    text: str | None = None
    path: str | None = None
    fmt: str = "text"
    seed: int = 0
    dnf_cap: int = DEFAULT_DNF_CAP
    max_unknowns: int = MAX_UNKNOWNS
    module: str = "free:1"
    params: str = ""
    var: str | None = None
    check: int = 0

    def __post_init__(self):
        if self.dnf_cap < 1 or self.max_unknowns < 1:
            raise ValueError("caps must be positive")
        if self.fmt not in ("text", "json"):
            raise ValueError("format is text or json")

    def source(self) -> str:
        if self.text is not None:
            return self.text
        if self.path is None:
            raise ValueError("no input given")
        with open(self.path) as fh:
            return fh.read()


class CliParseError(Exception):
    pass


def _emit(out, cfg: CliConfig, text: str, payload):
    if cfg.fmt == "json":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def _parse_params(text: str, backend: BackendDescriptor) -> dict:
    """``y=6,z=4``; vectors as ``y=[1;2]``."""
    params = {}
    for item in filter(None, (s.strip() for s in _split_top(text))):
        name, sep, value = item.partition("=")
        if not sep:
            raise CliParseError(f"bad parameter {item!r}")
        value = value.strip()
        try:
            if value.startswith("[") and value.endswith("]"):
                params[name.strip()] = tuple(backend.base.parse(v) for v in value[1:-1].split(";"))
            else:
                params[name.strip()] = backend.base.parse(value)
        except RingParseError as e:
            raise CliParseError(str(e)) from None
    return params


def _split_top(text: str):
    depth, cur = 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            yield cur
            cur = ""
        else:
            cur += ch
    yield cur


def _cmd_qe(cfg, backend, out):
    if not backend.is_valuation:
        raise CapabilityError(f"qe needs a valuation backend (z_loc:p or q_poly_loc:p); "
                              f"use decompose for {backend}")
    f = parse_formula(cfg.source(), backend)
    cmp = LocalOracle(backend)
    g = eliminate(f, cmp)
    payload = {"input": print_formula(f), "output": print_formula(g)}
    text = print_formula(g)
    if cfg.var is not None:
        nf = normal_form_1var(f, cmp, cfg.var)
        payload["normal_form"] = {"a": backend.base.format(nf.a), "delta": str(nf.delta)}
        text = print_formula(nf.to_formula(cfg.var))
    if cfg.check:
        from .corpus import local_params
        from .oracle import FreeModule
        rng = random.Random(cfg.seed)
        agree = 0
        for _ in range(cfg.check):
            pr = local_params(rng, backend, f.free)
            agree += eval_pp(f, pr, FreeModule(backend)) == eval_pp(g, pr, FreeModule(backend))
        payload["check"] = {"samples": cfg.check, "agree": agree}
        text += f"\n# oracle agreement {agree}/{cfg.check}"
    _emit(out, cfg, text, payload)


def _cmd_decompose(cfg, backend, out):
    if backend.is_valuation:
        raise CapabilityError("decompose needs a global backend (z or q_poly)")
    g = fv.decompose(parse_formula(cfg.source(), backend), backend)
    _emit(out, cfg, str(g), g.to_json())


def _cmd_decide(cfg, backend, out):
    if not backend.residue_fields_infinite:
        decide(DecisionProblem(None, backend))  # raises the capability error
    d = decide(DecisionProblem(parse_sentence(cfg.source(), backend), backend), dnf_cap=cfg.dnf_cap)
    _emit(out, cfg, d.verdict + "\n" + json.dumps(d.certificate, sort_keys=True), d.to_json())


def _cmd_eval(cfg, backend, out):
    f = parse_formula(cfg.source(), backend)
    try:
        m = module_from_selector(cfg.module, backend)
    except RingParseError as e:
        raise CliParseError(str(e)) from None
    value = eval_pp(f, _parse_params(cfg.params, backend), m, cfg.max_unknowns)
    _emit(out, cfg, "true" if value else "false", {"value": value})


class _CsParser(_Parser):
    def expr(self):
        acc = self.inter()
        while self.accept("|"):
            acc = fv.cs_union(acc, self.inter())
        return acc

    def inter(self):
        acc = self.unary()
        while True:
            if self.accept("&"):
                acc = fv.cs_intersect(acc, self.unary())
            elif self.accept("-"):
                acc = fv.cs_difference(acc, self.unary())
            else:
                return acc

    def unary(self):
        ring = self.base
        if self.accept("!"):
            return fv.cs_complement(self.unary())
        if self.accept("("):
            s = self.expr()
            self.expect(")")
            return s
        for kw, make in (("Closed", fv.closed), ("Open", fv.open_)):
            if self.keyword(kw):
                self.expect("(")
                pos = self.i
                return make(ring, self.ring_value(self.balanced(), pos))
        if self.keyword("Whole"):
            return fv.whole(ring)
        if self.keyword("Empty"):
            return fv.empty(ring)
        self.fail("expected a constructible set")


def _cmd_cs(cfg, backend, out):
    if backend.is_valuation:
        raise CapabilityError("the constructible-set calculator needs a global backend")
    p = _CsParser(strip_comments(cfg.source()), backend)
    lhs = p.expr()
    if p.accept("<="):
        rhs = p.expr()
        if not p.at_end():
            p.fail("unexpected trailing input")
        value = fv.cs_subseteq(lhs, rhs)
        _emit(out, cfg, "true" if value else "false", {"value": value})
        return
    if not p.at_end():
        p.fail("unexpected trailing input")
    _emit(out, cfg, str(lhs), lhs.to_json())


_COMMANDS = {"qe": _cmd_qe, "decompose": _cmd_decompose, "decide": _cmd_decide,
             "eval": _cmd_eval, "cs": _cmd_cs}


def run(cfg: CliConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        try:
            backend = parse_backend(cfg.backend)
        except (ValueError, RingParseError) as e:
            raise CliParseError(str(e)) from None
        _COMMANDS[cfg.command](cfg, backend, out)
        return EXIT_OK
    except (ParseError, CliParseError) as e:
        err.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except CapabilityError as e:
        err.write(f"capability error: {e}\n")
        return EXIT_CAPABILITY
    except (ValueError, KeyError, DNFTooLarge, OSError) as e:
        err.write(f"error: {e}\n")
        return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bezoutqe", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--backend", required=True,
                        help="z, q_poly, z_loc:<prime> or q_poly_loc:<irreducible>")
        src = sp.add_mutually_exclusive_group(required=True)
        flag = {"decide": "--sentence", "cs": "--expr"}.get(name, "--formula")
        src.add_argument(flag, dest="text")
        src.add_argument("--file", dest="path")
        sp.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--dnf-cap", type=int, default=DEFAULT_DNF_CAP)
        sp.add_argument("--max-unknowns", type=int, default=MAX_UNKNOWNS)
        if name == "eval":
            sp.add_argument("--module", default="free:1")
            sp.add_argument("--params", default="")
        if name == "qe":
            sp.add_argument("--var", default=None, help="also print the one-variable normal form")
            sp.add_argument("--check", type=int, default=0,
                            help="compare against the oracle on this many random parameters")
    return ap


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    try:
        cfg = CliConfig(**args)
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

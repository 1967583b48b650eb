"""Command-line front end.  Exit codes: 0 pass, 1 verification failure, 2 usage error."""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional

from .calculus import NotSurjective, classify
from .cells import Cogroupoid, TraceMismatch, load_matrix, oq
from .comodules import coinvariants, spin_comodule, tensor_comodule
from .freealg import add_into
from .linalg import SingularMatrix
from .report import Report
from .rewrite import TruncationExceeded, normal_form
from .scalars import HalfPowerUnsupported, RootOfUnity, ScalarSyntaxError
from .suites import SUITES, run_suite
from .transport import (BasisEscape, DimensionUnstable, roundtrip_check, transport_calculus,
                        transport_cogroupoid)
from .calculus import inner_calculus
from .yd import yd_module


class UsageError(Exception):
    pass


def _epsilon(text: str) -> int:
    if text in ("+1", "1"):
        return 1
    if text == "-1":
        return -1
    raise argparse.ArgumentTypeError("epsilon must be +1 or -1")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bicov", description="Exact checks for O_q(SL_2), B(E,F) and their calculi.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, matrix=False):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--field", choices=["symbolic", "quadratic"],
                        help="override the field mode of the matrix file")
        if matrix:
            sp.add_argument("--matrix", help="matrix JSON file")
            sp.add_argument("--truncation", type=int, help="completion / cotensor degree bound")

    sp = sub.add_parser("nf", help="normal form of a polynomial")
    sp.add_argument("poly", help='e.g. "dab" or "a*d - q^-1*b*c"')
    sp.add_argument("--max-degree", type=int, default=6)
    common(sp, matrix=True)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True, choices=SUITES)
    sp.add_argument("--max-degree", type=int, default=4)
    common(sp, matrix=True)

    sp = sub.add_parser("coinv", help="coinvariants of V_n (x) V_m")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    common(sp)

    sp = sub.add_parser("classify", help="enumerate reduced calculi up to a dimension")
    sp.add_argument("--max-dim", type=int, required=True)
    sp.add_argument("--include-zero", action="store_true")
    common(sp)

    helps = {"transport": "move omega_n^eps from O_q(SL_2) to B(E) and verify it",
             "roundtrip": "check that transporting to B(E) and back is an isomorphism"}
    for name in ("transport", "roundtrip"):
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("--n", type=int, default=1)
        sp.add_argument("--m", type=int, help="must equal --n (only diagonal modules carry calculi)")
        sp.add_argument("--epsilon", type=_epsilon, default=-1, help="+1 or -1 (default -1)")
        common(sp, matrix=True)
    return p


def _load(args):
    path = getattr(args, "matrix", None)
    if path is None:
        return None, None
    with open(path) as fh:
        doc = json.load(fh)
    if args.field:
        doc = dict(doc)
        doc["field"] = dict(doc.get("field", {}), mode=args.field)
    return load_matrix(doc)


def _word_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            add_into(out, {w1 + w2: c1 * c2})
    return out


class _PolyParser:
    """Polynomials over a cell: scalar grammar plus generator names, e.g. ``q^-1*b*c + a^2d``."""

    def __init__(self, text: str, alphabet, field):
        self.field = field
        self.alphabet = alphabet
        names = sorted(alphabet.names, key=len, reverse=True)
        pat = "|".join(re.escape(n) for n in names)
        tok = re.compile(rf"\s*(?:(?P<gen>{pat})|(?P<num>\d+)|(?P<op>[sq+\-*/^()]))")
        self.toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = tok.match(text, pos)
            if m is None:
                raise ScalarSyntaxError(f"unexpected character {text[pos:].strip()[:1]!r}", pos)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind)))
            pos = m.end()
        self.toks.append(("end", ""))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        kind, v = self.toks[self.i]
        if value is not None and v != value:
            raise ScalarSyntaxError(f"expected {value!r}, found {v or 'end of input'!r}", self.i)
        self.i += 1
        return kind, v

    def parse(self) -> dict:
        out = self.expr()
        if self.peek()[0] != "end":
            raise ScalarSyntaxError(f"unexpected {self.peek()[1]!r}", self.i)
        return out

    def expr(self) -> dict:
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op = self.take()
            add_into(out, self.term(), self.field.one if op == "+" else -self.field.one)
        return out

    def term(self) -> dict:
        out = self.factor()
        while True:
            kind, v = self.peek()
            if v == "*":
                self.take()
                out = _word_mul(out, self.factor())
            elif v == "/":
                self.take()
                rhs = self.factor()
                if set(rhs) != {()}:
                    raise ScalarSyntaxError("can only divide by a nonzero scalar", self.i)
                out = {w: c / rhs[()] for w, c in out.items()}
            elif kind in ("gen", "num") or v in ("s", "q", "("):
                out = _word_mul(out, self.factor())
            else:
                return out

    def exponent(self) -> int:
        if self.peek()[1] != "^":
            return 1
        self.take()
        neg = self.peek()[1] == "-"
        if neg:
            self.take()
        kind, v = self.take()
        if kind != "num":
            raise ScalarSyntaxError("expected integer exponent", self.i)
        return -int(v) if neg else int(v)

    def power(self, base: dict, k: int) -> dict:
        if k < 0:
            if set(base) != {()}:
                raise ScalarSyntaxError("negative powers need a scalar base", self.i)
            return {(): base[()] ** k}
        out = {(): self.field.one}
        for _ in range(k):
            out = _word_mul(out, base)
        return out

    def factor(self) -> dict:
        f = self.field
        kind, v = self.take()
        if v == "-":
            return {w: -c for w, c in self.factor().items()}
        if kind == "num":
            return {(): f(int(v))} if int(v) else {}
        if kind == "gen":
            return self.power({(self.alphabet.index(v),): f.one}, self.exponent())
        if v == "q":
            return {(): f.q_pow(self.exponent())}
        if v == "s":
            if f.mode == "quadratic":
                raise HalfPowerUnsupported("'s' is not available in quadratic mode")
            return {(): f.s_pow(self.exponent())}
        if v == "(":
            inner = self.expr()
            self.take(")")
            return self.power(inner, self.exponent())
        raise ScalarSyntaxError(f"unexpected {v or 'end of input'!r}", self.i)


def parse_poly(text: str, alphabet, field) -> dict:
    return _PolyParser(text, alphabet, field).parse()


def cmd_nf(args) -> Report:
    E, cfg = _load(args)
    if E is None:
        H = oq()
        cell, field = H.cell, H.field
    else:
        field = E.field
        cog = Cogroupoid(field, {"E": E}, args.truncation or args.max_degree)
        cell = cog.cell("E", "E")
    terms = parse_poly(args.poly, cell.alphabet, field)
    deg = max((len(w) for w in terms), default=0)
    if deg > args.max_degree:
        raise TruncationExceeded(f"input degree {deg} exceeds --max-degree {args.max_degree}")
    nf = normal_form(cell.system, cell.poly(terms))
    rep = Report()
    rep.add("nf", "normal form", True, None, deg)
    rep.data.update({"input": args.poly, "normal_form": str(nf),
                     "rules": cell.system.format_rules()})
    return rep


def cmd_verify(args) -> Report:
    mats = None
    if args.matrix:
        with open(args.matrix) as fh:
            doc = json.load(fh)
        if args.field:
            doc["field"] = dict(doc.get("field", {}), mode=args.field)
        load_matrix(doc)  # validate early
        mats = [("doc", doc)]
    return run_suite(args.suite, jobs=args.jobs, max_degree=args.max_degree,
                     truncation=args.truncation, matrices=mats)


def cmd_coinv(args) -> Report:
    V = tensor_comodule(spin_comodule(args.n), spin_comodule(args.m))
    basis = coinvariants(V)
    rep = Report()
    rep.add("coinv", f"coinvariants of V_{args.n} (x) V_{args.m}", True)
    rep.data.update({"dim": len(basis), "labels": V.labels,
                     "basis": [{V.labels[k]: str(v) for k, v in sorted(b.items())} for b in basis]})
    return rep


def cmd_classify(args) -> Report:
    res = classify(args.max_dim, include_zero=args.include_zero)
    rep = Report()
    for r in res:
        rep.add("classify", f"calculus {r['parts']}", r.get("status", "pass"),
                {"dim": r["dim"], "kind": r["kind"], "rank": r.get("rank")}, r.get("degree_used"))
    rep.data["calculi"] = res
    rep.data["count"] = len(res)
    return rep


def _transport_setup(args):
    E, cfg = _load(args)
    if E is None:
        raise UsageError("--matrix is required")
    if args.m is not None and args.m != args.n:
        raise UsageError("--m must equal --n")
    cog = transport_cogroupoid(E, args.truncation or 6)
    V = yd_module(args.n, args.n, args.epsilon, cog.hopf("X"))
    sign = "+1" if args.epsilon == 1 else "-1"
    label = f"omega_{args.n}^{sign}"
    c = inner_calculus(V, coinvariants(V.comodule)[0], label=label, parts=((args.n, args.epsilon),))
    return E, cfg, cog, V, c


def cmd_transport(args) -> Report:
    E, cfg, cog, V, c = _transport_setup(args)
    eta, cot, rep = transport_calculus(c, "Y")
    W = eta.module
    rep.data.update({
        "E": [[str(x) for x in r] for r in E.rows],
        "field": cfg.to_json(),
        "tau": str((E.inverse() @ E.transpose()).trace()),
        "q": E.field.describe(),
        "dim_V": V.dim,
        "dim_W": cot.dim,
        "basis": [cot.format_element(b) for b in cot.basis],
        "actions": W.to_json()["actions"],
        "eta": eta.to_json(),
    })
    return rep


def cmd_roundtrip(args) -> Report:
    E, cfg, cog, V, c = _transport_setup(args)
    rep = roundtrip_check(V, "Y", calculus=c)
    rep.data.update({"E": [[str(x) for x in r] for r in E.rows], "field": cfg.to_json()})
    return rep


COMMANDS = {"nf": cmd_nf, "verify": cmd_verify, "coinv": cmd_coinv, "classify": cmd_classify,
            "transport": cmd_transport, "roundtrip": cmd_roundtrip}

USAGE_ERRORS = (UsageError, OSError, json.JSONDecodeError, KeyError, ScalarSyntaxError,
                RootOfUnity, TraceMismatch, SingularMatrix, HalfPowerUnsupported, ValueError)
RUN_FAILURES = (NotSurjective, BasisEscape, DimensionUnstable, TruncationExceeded)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return 2
    try:
        rep = COMMANDS[args.command](args)
    except RUN_FAILURES as exc:
        rep = Report()
        rep.add(args.command, type(exc).__name__, False, {"message": str(exc)})
    except USAGE_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())

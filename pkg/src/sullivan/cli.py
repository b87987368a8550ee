"""
Command-line front end.

Exit codes: 0 success/PASS, 1 FAIL, 2 usage or syntax error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .basis_change import combined_change, even_change, is_terminal, odd_change
from .derivation_homology import (
    WindowError,
    class_expression,
    bracket_on_homology,
    compute_homology,
    realization_probe,
    zero_divisor_check,
)
from .derivations import PreconditionError
from .formats import ModelValidationError, ParseError, load_model, parse_derivation
from .gottlieb import find_gottlieb
from .model import SullivanModel, check_bigrading, cohomology, validate_model

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    code: int
    text: List[str]
    fields: List[Tuple[str, str]] = field(default_factory=list)
    blocks: List[Tuple[str, str]] = field(default_factory=list)

    def render(self, fmt: str) -> str:
        if fmt == "text":
            return "\n".join(self.text) + "\n"
        out = [f"{k}: {v}" for k, v in self.fields]
        for name, body in self.blocks:
            out.append(f"```{name}")
            out.append(body)
            out.append("```")
        out.append(f"exit: {self.code}")
        return "\n".join(out) + "\n"


def _gen(m: SullivanModel, name: str):
    try:
        return m.gen(name)
    except KeyError:
        raise UsageError(f"no generator named {name!r}; generators: {', '.join(g.name for g in m.generators)}")


def _cap(m: SullivanModel, cap: Optional[int]) -> int:
    top = m.top_degree
    if cap is None:
        return top + 6
    if cap < top:
        raise UsageError(f"--cap {cap} is below the top generator degree {top}")
    return cap


# -- subcommands ----------------------------------------------------------------


def cmd_check(m: SullivanModel, args, locations=None) -> Outcome:
    bad = validate_model(m)
    text = [f"generators: {len(m.generators)}"]
    fields = [("command", "check"), ("generators", str(len(m.generators))), ("violations", str(len(bad)))]
    for i, v in enumerate(bad):
        where = f"{args.model}:{locations[i][0]}:{locations[i][1]}: " if locations else ""
        text.append(f"violation: {where}{v}")
        fields.append(("violation", f"{where}{v}"))
    text.append(f"valid: {'true' if not bad else 'false'}")
    code = EXIT_OK if not bad else EXIT_FAIL
    if all(g.weight is not None for g in m.generators) and m.generators:
        bg = check_bigrading(m)
        text.append(f"bigrading: {'true' if bg else 'false'}")
        fields.append(("bigrading", "true" if bg else "false"))
        if not bg:
            code = EXIT_FAIL
    else:
        text.append("bigrading: not checked (weights missing)")
        fields.append(("bigrading", "unchecked"))
    text.append("assumption: finitely generated cohomology is not checked")
    return Outcome(code, text, fields)


def cmd_cohomology(m: SullivanModel, args) -> Outcome:
    k = args.max if args.max is not None else _cap(m, None)
    if k < 0:
        raise UsageError("--max must be non-negative")
    rep = cohomology(m, k)
    text = [f"cohomology through degree {k} (exact through {rep.window})", "k dimC dimZ dimB dimH"]
    fields = [("command", "cohomology"), ("max", str(k)), ("window", str(rep.window))]
    blocks = []
    for c in rep.degrees:
        flag = " truncated" if c.truncated else ""
        text.append(f"{c.degree} {c.dim_chains} {c.dim_cocycles} {c.dim_coboundaries} {c.dim}{flag}")
        fields.append((f"H{c.degree}", f"{c.dim}{flag}"))
        for r in c.representatives:
            text.append(f"  [{r}]")
        if c.representatives:
            blocks.append((f"reps H{c.degree}", "\n".join(str(r) for r in c.representatives)))
    code = EXIT_OK if rep.window >= k else EXIT_INCONCLUSIVE
    return Outcome(code, text, fields, blocks)


def cmd_gottlieb(m: SullivanModel, args) -> Outcome:
    v = _gen(m, args.gen)
    cap = _cap(m, args.cap)
    cert = find_gottlieb(m, v, cap)
    code = {"witness": EXIT_OK, "infeasible": EXIT_FAIL}.get(cert.verdict, EXIT_INCONCLUSIVE)
    fields = [("command", "gottlieb"), ("generator", v.name), ("cap", str(cap)), ("verdict", cert.verdict)]
    blocks = []
    if cert.witness is not None:
        blocks.append(("witness", str(cert.witness)))
    if cert.certificate:
        blocks.append(("certificate", "\n".join(f"{c} * [{lab}]" for lab, c in cert.certificate)))
    if cert.note:
        fields.append(("note", cert.note))
    return Outcome(code, cert.render().splitlines(), fields, blocks)


def cmd_terminal(m: SullivanModel, args) -> Outcome:
    v = _gen(m, args.gen)
    t = is_terminal(m, v)
    text = [f"terminal: {'true' if t else 'false'}"]
    if not t:
        text += [f"occurs in d{w.name} = {m.dg(w)}" for w in m.generators if m.dg(w).contains(v)]
    if m.truncated:
        text.append(f"note: only generators through degree {m.complete_through} are known")
    return Outcome(EXIT_OK if t else EXIT_FAIL, text, [("command", "terminal"), ("generator", v.name), ("terminal", str(t).lower())])


def _theta(m, args, v):
    if args.theta:
        try:
            return parse_derivation(args.theta, m)
        except ParseError as exc:
            raise UsageError(f"--theta: {exc}")
    cert = find_gottlieb(m, v)
    if cert.witness is None:
        raise PreconditionError(f"{v.name}: no derivation cycle with value 1 ({cert.verdict})")
    return cert.witness


def cmd_basis_change(m: SullivanModel, args) -> Outcome:
    cap = _cap(m, args.cap)
    v = _gen(m, args.gen)
    try:
        if args.kind == "odd":
            rep = odd_change(m, v, _theta(m, args, v), cap)
        elif args.kind == "even":
            rep = even_change(m, v, _theta(m, args, v), cap)
        else:
            x = _gen(m, args.x) if args.x else None
            if not args.theta and x is None:
                raise UsageError("combined change needs --theta or --x")
            rep = combined_change(m, x, v, _theta(m, args, x), cap)
    except PreconditionError as exc:
        text = [f"basis-change {args.kind}", f"precondition failed: {exc}", "verdict: FAIL"]
        return Outcome(EXIT_FAIL, text, [("command", "basis-change"), ("kind", args.kind), ("precondition", str(exc)), ("verdict", "FAIL")])
    fields = [("command", "basis-change"), ("kind", args.kind), ("generator", v.name)]
    fields += [(f"{c.section}", f"{'PASS' if c.passed else 'FAIL'} {c.label}") for c in rep.checks]
    fields.append(("verdict", "PASS" if rep.passed else "FAIL"))
    blocks = [("phi", str(rep.phi)), ("differential", "\n".join(f"d {g.name} = {rep.new_model.dg(g)}" for g in rep.new_model.generators)), ("theta", str(rep.theta_new))]
    return Outcome(EXIT_OK if rep.passed else EXIT_FAIL, rep.render().splitlines(), fields, blocks)


def cmd_homology(m: SullivanModel, args) -> Outcome:
    cap = _cap(m, args.cap)
    lo = args.from_ if args.from_ is not None else 1
    hi = args.to if args.to is not None else cap
    if lo < 1 or hi < lo:
        raise UsageError(f"degree range {lo}..{hi} must satisfy 1 <= from <= to")
    rep = compute_homology(m, lo, hi)
    fields = [("command", "homology"), ("from", str(lo)), ("to", str(hi))]
    blocks = []
    for n in range(lo, hi + 1):
        s = rep[n]
        fields.append((f"H{n}", f"dimZ={s.dim_cycles} dimB={s.dim_boundaries} dimH={s.dim}"))
        if s.representatives:
            blocks.append((f"reps H{n}", "\n".join(map(str, s.representatives))))
    text = rep.render().splitlines()
    if args.bracket:
        for n in range(lo, hi + 1):
            for i, a in enumerate(rep[n].representatives):
                for k in range(n, hi + 1):
                    for j, b in enumerate(rep[k].representatives):
                        if (k, j) < (n, i):
                            continue
                        expr = class_expression(bracket_on_homology(rep, a, b), n + k)
                        text.append(f"[{a.name}, {b.name}] = {expr}")
                        fields.append((f"bracket {a.name} {b.name}", expr))
    return Outcome(EXIT_OK, text, fields, blocks)


def cmd_probe(m: SullivanModel, args) -> Outcome:
    _cap(m, args.cap)
    res = realization_probe(m, args.n)
    fields = [("command", "probe-s2n"), ("n", str(args.n))]
    fields += [("condition", f"{'PASS' if v else 'FAIL'} {k}") for k, v in res.conditions.items()]
    fields += [("obstruction", o) for o in res.obstructions]
    fields.append(("verdict", "PASS" if res.passed else "FAIL"))
    return Outcome(EXIT_OK if res.passed else EXIT_FAIL, res.render().splitlines(), fields)


def cmd_zero_divisor(m: SullivanModel, args) -> Outcome:
    _cap(m, args.cap)
    y = _gen(m, args.gen)
    res = zero_divisor_check(m, y)
    fields = [("command", "zero-divisor"), ("generator", y.name)]
    blocks = []
    if res.witness is not None:
        fields.append(("verdict", f"zero divisor in degree {res.witness_degree}"))
        blocks.append(("witness", str(res.witness)))
        code = EXIT_OK
    else:
        fields.append(("verdict", "no witness in window"))
        fields.append(("dimension bound", "PASS" if res.bound_ok else "FAIL"))
        code = EXIT_OK if res.bound_ok else EXIT_FAIL
    return Outcome(code, res.render().splitlines(), fields, blocks)


def cmd_verify(args) -> Outcome:
    from .regression import run_regression

    lines, ok = run_regression()
    fields = [("command", "verify-paper")]
    for ln in lines:
        if ln.startswith(("PASS ", "FAIL ")):
            fields.append(("check", ln))
    fields.append(("verdict", "PASS" if ok else "FAIL"))
    return Outcome(EXIT_OK if ok else EXIT_FAIL, lines, fields)


# -- parser -----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sullivan", description="Gottlieb elements and basis changes in Sullivan minimal models.")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_, model=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=["text", "structured"], default=argparse.SUPPRESS)
        if model:
            sp.add_argument("model", help="model file")
        return sp

    add("check", "validate a model and its lower grading")
    sp = add("cohomology", "cohomology dimensions and representatives")
    sp.add_argument("--max", type=int)
    sp = add("gottlieb", "decide whether a generator is Gottlieb")
    sp.add_argument("--gen", required=True)
    sp.add_argument("--cap", type=int)
    sp = add("terminal", "does a generator occur in no differential")
    sp.add_argument("--gen", required=True)
    sp = add("basis-change", "run and verify a change of basis")
    sp.add_argument("--kind", choices=["odd", "even", "combined"], required=True)
    sp.add_argument("--gen", required=True, help="x for odd, y for even, y0 for combined")
    sp.add_argument("--x", help="odd generator for the combined change")
    sp.add_argument("--theta", help="derivation literal, e.g. 'theta { deg 3; x -> 1 }'")
    sp.add_argument("--cap", type=int)
    sp = add("homology", "homology of the derivation complex")
    sp.add_argument("--from", dest="from_", type=int)
    sp.add_argument("--to", type=int)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--bracket", action="store_true", help="also print brackets of representatives")
    sp = add("probe-s2n", "check the two-class derivation homology pattern")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--cap", type=int)
    sp = add("zero-divisor", "search for classes commuting with the dual of an even generator")
    sp.add_argument("--gen", required=True)
    sp.add_argument("--cap", type=int)
    add("verify-paper", "run the built-in regression suite", model=False)
    return p


HANDLERS = {
    "check": cmd_check,
    "cohomology": cmd_cohomology,
    "gottlieb": cmd_gottlieb,
    "terminal": cmd_terminal,
    "basis-change": cmd_basis_change,
    "homology": cmd_homology,
    "probe-s2n": cmd_probe,
    "zero-divisor": cmd_zero_divisor,
}


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        fmt = args.format
        if args.command == "verify-paper":
            outcome = cmd_verify(args)
        else:
            try:
                m = load_model(args.model)
                outcome = HANDLERS[args.command](m, args)
            except ModelValidationError as exc:
                if args.command != "check":
                    err.write(f"{exc}\n")
                    return EXIT_FAIL
                outcome = cmd_check(exc.model, args, exc.locations)
            except OSError as exc:
                raise UsageError(f"cannot read {args.model}: {exc.strerror}")
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except PreconditionError as exc:
        err.write(f"precondition failed: {exc}\n")
        return EXIT_FAIL
    except WindowError as exc:
        err.write(f"inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE
    out.write(outcome.render(fmt))
    return outcome.code


def main(argv: Optional[List[str]] = None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

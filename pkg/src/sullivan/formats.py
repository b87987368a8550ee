"""
Text formats: model files and derivation literals.

Model file::

    model {
      generator u 2 weight 0
      generator x 3
      d u = 0
      d x = u^2
    }

``# ...`` starts a comment.  A weight may also be written ``[weight 0]``.
An optional ``complete_through K`` line marks a truncated model whose
generators are known only through degree K.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .algebra import Element, ExpressionError, Generator, parse_expression
from .derivations import Derivation
from .model import SullivanModel, validate_model


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = "<model>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source
        self.detail = message


class ModelValidationError(ParseError):
    def __init__(self, violations, line: int, column: int, source: str, model=None, locations=None):
        super().__init__(str(violations[0]), line, column, source)
        self.violations = violations
        self.model = model
        # one (line, column) per violation, pointing at the offending 'd' line
        self.locations = locations or [(line, column)] * len(violations)


_GEN = re.compile(r"generator\s+([A-Za-z_][A-Za-z0-9_]*)\s+(-?\d+)(?:\s+\[?\s*weight\s+(-?\d+)\s*\]?)?\s*$")
_DIFF = re.compile(r"d\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")
_CT = re.compile(r"complete_through\s+(\d+)\s*$")
_OPEN = re.compile(r"model(?:\s+([A-Za-z_][A-Za-z0-9_]*))?\s*\{\s*(\}?)\s*$")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_model(text: str, source: str = "<model>", validate: bool = True) -> SullivanModel:
    lines = text.splitlines()
    state = "start"
    gens: List[Generator] = []
    names: Dict[str, Generator] = {}
    diff_src: Dict[str, Tuple[int, int, str, int]] = {}
    diff_lines: Dict[str, int] = {}
    complete_through = None
    model_name = "model"
    last = 0
    for lineno, raw in enumerate(lines, 1):
        body = _strip(raw)
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip()) + 1
        body = body.strip()
        last = lineno
        if state == "start":
            mo = _OPEN.match(body)
            if not mo:
                raise ParseError("expected 'model {'", lineno, indent, source)
            model_name = mo.group(1) or "model"
            state = "done" if mo.group(2) else "body"
            continue
        if state == "done":
            raise ParseError("text after closing brace", lineno, indent, source)
        if body == "}":
            state = "done"
            continue
        if body.startswith("generator"):
            mo = _GEN.match(body)
            if not mo:
                raise ParseError("expected 'generator NAME DEGREE [weight W]'", lineno, indent, source)
            name, deg, w = mo.group(1), int(mo.group(2)), mo.group(3)
            if name in names:
                raise ParseError(f"generator {name!r} declared twice", lineno, indent, source)
            try:
                g = Generator(name, deg, None if w is None else int(w))
            except ValueError as exc:
                raise ParseError(str(exc), lineno, indent + body.index(mo.group(2)), source) from None
            gens.append(g)
            names[name] = g
            continue
        if body.startswith("complete_through"):
            mo = _CT.match(body)
            if not mo:
                raise ParseError("expected 'complete_through DEGREE'", lineno, indent, source)
            complete_through = int(mo.group(1))
            continue
        mo = _DIFF.match(body)
        if mo:
            name = mo.group(1)
            if name in diff_src:
                raise ParseError(f"differential of {name!r} given twice", lineno, indent, source)
            diff_src[name] = (lineno, indent + mo.start(2), mo.group(2), indent + mo.start(1))
            continue
        raise ParseError(f"cannot parse line: {body!r}", lineno, indent, source)
    if state == "start":
        raise ParseError("empty model file; expected 'model {'", 1, 1, source)
    if state == "body":
        raise ParseError("missing closing '}'", last + 1, 1, source)

    diff: Dict[Generator, Element] = {}
    for name, (lineno, col, expr, name_col) in diff_src.items():
        g = names.get(name)
        if g is None:
            raise ParseError(f"differential of undeclared generator {name!r}", lineno, name_col, source)
        if not expr.strip():
            raise ParseError("missing expression after '='", lineno, col, source)
        try:
            val = parse_expression(expr, names)
        except ExpressionError as exc:
            c = col + (exc.column - 1 if exc.column else 0)
            raise ParseError(str(exc).split(" (column")[0], lineno, c, source) from None
        diff[g] = val
        diff_lines[name] = lineno
    for g in gens:
        if g.name not in diff_src:
            raise ParseError(f"no 'd {g.name} = ...' line for generator {g.name}", last, 1, source)

    m = SullivanModel(gens, diff, complete_through=complete_through, name=model_name)
    if validate:
        bad = validate_model(m)
        if bad:
            locs = [diff_src[v.generator.name][:2] if v.generator.name in diff_src else (last, 1) for v in bad]
            raise ModelValidationError(bad, locs[0][0], locs[0][1], source, m, locs)
    return m


def load_model(path, validate: bool = True) -> SullivanModel:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_model(text, str(path), validate)


parse_model_file = load_model


def serialize_model(m: SullivanModel) -> str:
    out = ["model {" if m.name == "model" else f"model {m.name} {{"]
    for g in m.generators:
        w = "" if g.weight is None else f" weight {g.weight}"
        out.append(f"  generator {g.name} {g.degree}{w}")
    if m.complete_through is not None:
        out.append(f"  complete_through {m.complete_through}")
    for g in m.generators:
        out.append(f"  d {g.name} = {m.dg(g)}")
    out.append("}")
    return "\n".join(out) + "\n"


_DERIV = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*\{(.*)\}\s*$", re.S)


def parse_derivation(text: str, model_or_gens) -> Derivation:
    """Parse ``theta { deg 3; x -> 1; y -> x }``.

    The bare form ``x -> 1; y -> x`` is also accepted; its degree is read off
    the first value.
    """
    gens = getattr(model_or_gens, "generators", model_or_gens)
    table = {g.name: g for g in gens}
    mo = _DERIV.match(text)
    if mo:
        name, inner = mo.group(1), mo.group(2)
        offset = mo.start(2)
    elif "{" not in text and "->" in text:
        name, inner, offset = "theta", text, 0
    else:
        raise ParseError("expected 'NAME { deg N; g -> expr; ... }'", 1, 1, "<derivation>")
    degree: Optional[int] = None
    values: Dict[Generator, Element] = {}
    pos = 0
    for chunk in inner.split(";"):
        col = offset + pos + 1 + (len(chunk) - len(chunk.lstrip()))
        pos += len(chunk) + 1
        item = chunk.strip()
        if not item:
            continue
        if item.startswith("deg"):
            dm = re.fullmatch(r"deg\s+(-?\d+)", item)
            if not dm:
                raise ParseError("expected 'deg N'", 1, col, "<derivation>")
            degree = int(dm.group(1))
            continue
        if "->" not in item:
            raise ParseError(f"expected 'g -> expr', got {item!r}", 1, col, "<derivation>")
        lhs, rhs = item.split("->", 1)
        g = table.get(lhs.strip())
        if g is None:
            raise ParseError(f"unknown generator {lhs.strip()!r}", 1, col, "<derivation>")
        if g in values:
            raise ParseError(f"value on {g.name} given twice", 1, col, "<derivation>")
        try:
            values[g] = parse_expression(rhs, table)
        except ExpressionError as exc:
            raise ParseError(str(exc), 1, col, "<derivation>") from None
    if degree is None:
        nonzero = [(g, v) for g, v in values.items() if v]
        if mo or not nonzero:
            raise ParseError("missing 'deg N'", 1, 1, "<derivation>")
        g, v = nonzero[0]
        degree = g.degree - v.degree
    try:
        return Derivation(degree, values, name)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1, "<derivation>") from None

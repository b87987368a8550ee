"""
Free graded-commutative algebras over the rationals.

Elements of the free algebra on a set of graded generators are stored as
finite maps from canonical monomials to nonzero ``Fraction`` coefficients.
A monomial is a tuple of ``(Generator, exponent)`` pairs sorted by the
canonical generator order (degree, then name); odd generators occur with
exponent 1 only.  Reordering a product into canonical form picks up the
Koszul sign, which is folded into the coefficient.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

Coefficient = Union[int, Fraction]


class Generator:
    """A free generator of positive degree, optionally carrying a lower weight."""

    __slots__ = ("name", "degree", "weight", "key", "_hash")

    def __init__(self, name: str, degree: int, weight: Optional[int] = None):
        if not isinstance(degree, int) or degree < 2:
            raise ValueError(
                f"generator {name!r} has degree {degree}; simply connected models need degree >= 2"
            )
        if weight is not None and weight < 0:
            raise ValueError(f"generator {name!r} has negative weight {weight}")
        self.name = name
        self.degree = degree
        self.weight = weight
        self.key = (degree, name)
        self._hash = hash(self.key)

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1

    def with_weight(self, weight: Optional[int]) -> "Generator":
        return Generator(self.name, self.degree, weight)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Generator):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Generator") -> bool:
        return self.key < other.key

    def __repr__(self):
        return f"Generator({self.name!r}, {self.degree})"

    def __str__(self):
        return self.name


Monomial = Tuple[Tuple[Generator, int], ...]

ONE: Monomial = ()


def mono_degree(m: Monomial) -> int:
    return sum(g.degree * e for g, e in m)


def mono_length(m: Monomial) -> int:
    """Word length: total number of generator factors."""
    return sum(e for _, e in m)


def mono_weight(m: Monomial) -> int:
    total = 0
    for g, e in m:
        if g.weight is None:
            raise ValueError(f"generator {g.name} carries no weight")
        total += g.weight * e
    return total


def mono_mul(m1: Monomial, m2: Monomial) -> Tuple[int, Optional[Monomial]]:
    """Product of canonical monomials as ``(sign, monomial)``; monomial None means zero."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    odd_left = sum(1 for g, _ in m1 if g.degree & 1)
    swaps = 0
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1.key == g2.key:
            if g1.degree & 1:
                return 0, None
            out.append((g1, e1 + e2))
            i += 1
            j += 1
        elif g1.key < g2.key:
            out.append(m1[i])
            if g1.degree & 1:
                odd_left -= 1
            i += 1
        else:
            if g2.degree & 1:
                swaps += odd_left
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return (-1 if swaps & 1 else 1), tuple(out)


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in m)


def mono_sort_key(m: Monomial):
    return tuple((g.key, e) for g, e in m)


def _frac_str(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Element:
    """A homogeneous element of the free graded-commutative algebra.

    Treat instances as immutable.  The zero element has no fixed degree
    (``degree`` is None) and is compatible with every degree.
    """

    __slots__ = ("terms", "degree", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Coefficient]] = None, *, _trusted=False):
        if _trusted:
            clean = terms
        else:
            clean = {}
            for m, c in (terms or {}).items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        degree = None
        for m in clean:
            dm = mono_degree(m)
            if degree is None:
                degree = dm
            elif dm != degree:
                raise ValueError(f"inhomogeneous element: degrees {degree} and {dm}")
        self.terms: Dict[Monomial, Fraction] = clean
        self.degree: Optional[int] = degree
        self._hash = None

    # constructors

    @classmethod
    def zero(cls) -> "Element":
        return cls({}, _trusted=True)

    @classmethod
    def one(cls) -> "Element":
        return cls({ONE: Fraction(1)}, _trusted=True)

    @classmethod
    def scalar(cls, c: Coefficient) -> "Element":
        c = Fraction(c)
        return cls({ONE: c} if c else {}, _trusted=True)

    @classmethod
    def gen(cls, g: Generator, power: int = 1) -> "Element":
        if power == 0:
            return cls.one()
        if g.odd and power > 1:
            return cls.zero()
        return cls({((g, power),): Fraction(1)}, _trusted=True)

    @classmethod
    def monomial(cls, m: Monomial, c: Coefficient = 1) -> "Element":
        c = Fraction(c)
        return cls({m: c} if c else {}, _trusted=True)

    @classmethod
    def from_accumulator(cls, acc: Dict[Monomial, Fraction]) -> "Element":
        return cls({m: c for m, c in acc.items() if c}, _trusted=True)

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def generators(self):
        """Set of generators occurring in some monomial."""
        return {g for m in self.terms for g, _ in m}

    def contains(self, g: Generator) -> bool:
        return any(h == g for m in self.terms for h, _ in m)

    def scalar_value(self) -> Optional[Fraction]:
        """The coefficient if this is a scalar (degree 0 or zero), else None."""
        if not self.terms:
            return Fraction(0)
        if self.degree == 0:
            return self.terms[ONE]
        return None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: mono_sort_key(mc[0]))

    # arithmetic

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            other = Element.scalar(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return Element(acc)

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            other = Element.scalar(other)
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element({m: -c for m, c in self.terms.items()}, _trusted=True)

    def scale(self, c: Coefficient) -> "Element":
        c = Fraction(c)
        if not c:
            return Element.zero()
        return Element({m: c * v for m, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other) -> "Element":
        if not isinstance(other, Element):
            return self.scale(other)
        if not self.terms or not other.terms:
            return Element.zero()
        acc: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, m = mono_mul(m1, m2)
                if m is None:
                    continue
                v = c1 * c2 if sign > 0 else -(c1 * c2)
                acc[m] = acc.get(m, 0) + v
        return Element.from_accumulator(acc)

    def __rmul__(self, other) -> "Element":
        return self.scale(other)

    def __pow__(self, k: int) -> "Element":
        result = Element.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Element):
            if isinstance(other, (int, Fraction)):
                return self == Element.scalar(other)
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            neg = c < 0
            a = -c if neg else c
            if not m:
                body = _frac_str(a)
            elif a == 1:
                body = mono_str(m)
            else:
                body = f"{_frac_str(a)}*{mono_str(m)}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Element({str(self)!r})"


def multiply(a: Element, b: Element) -> Element:
    return a * b


def product(factors: Iterable[Element]) -> Element:
    result = Element.one()
    for f in factors:
        result = result * f
    return result


def is_decomposable(chi: Element) -> bool:
    """True iff every monomial has word length at least two."""
    return all(mono_length(m) >= 2 for m in chi.terms)


def split_word_length(chi: Element) -> Tuple[Element, Element]:
    """Split into (word length <= 1 part, word length >= 2 part)."""
    low, high = {}, {}
    for m, c in chi.terms.items():
        (low if mono_length(m) <= 1 else high)[m] = c
    return Element(low, _trusted=True), Element(high, _trusted=True)


def linear_part(chi: Element) -> Element:
    return Element({m: c for m, c in chi.terms.items() if mono_length(m) == 1}, _trusted=True)


def _remove_factor(m: Monomial, x: Generator) -> Tuple[int, Monomial, int]:
    """Remove all copies of ``x`` from ``m``.

    Returns (exponent of x, remaining monomial, number of odd factors before x).
    """
    rest = []
    exp = 0
    odd_before = 0
    for g, e in m:
        if g == x:
            exp = e
        else:
            if exp == 0 and g.degree & 1:
                odd_before += 1
            rest.append((g, e))
    return exp, tuple(rest), odd_before


def decompose_odd(chi: Element, x: Generator) -> Tuple[Element, Element]:
    """Write ``chi = x*A + B`` with A, B free of the odd generator ``x``."""
    if not x.odd:
        raise ValueError(f"{x.name} is even; use decompose_even")
    a, b = {}, {}
    for m, c in chi.terms.items():
        exp, rest, odd_before = _remove_factor(m, x)
        if exp:
            a[rest] = -c if odd_before & 1 else c
        else:
            b[m] = c
    return Element(a, _trusted=True), Element(b, _trusted=True)


def decompose_even(chi: Element, y: Generator) -> Tuple[Element, ...]:
    """Coefficients ``(chi_0, ..., chi_k)`` with ``chi = sum y^i chi_i``, each free of y."""
    if y.odd:
        raise ValueError(f"{y.name} is odd; use decompose_odd")
    parts: Dict[int, Dict[Monomial, Fraction]] = {}
    for m, c in chi.terms.items():
        exp, rest, _ = _remove_factor(m, y)
        parts.setdefault(exp, {})[rest] = c
    if not parts:
        return (Element.zero(),)
    top = max(parts)
    return tuple(Element(parts.get(i, {}), _trusted=True) for i in range(top + 1))


def decompose_by_generator(chi: Element, x: Generator):
    """x-adic split: ``(A, B)`` with chi = x*A + B for odd x, else the power coefficients."""
    if x.odd:
        return decompose_odd(chi, x)
    return decompose_even(chi, x)


def substitute(chi: Element, images: Mapping[Generator, Element]) -> Element:
    """Apply the algebra map sending each generator g to images.get(g, g)."""
    result = Element.zero()
    for m, c in chi.terms.items():
        term = Element.scalar(c)
        for g, e in m:
            img = images.get(g)
            term = term * (Element.gen(g, e) if img is None else img ** e)
        result = result + term
    return result


# -- expression grammar ------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|(\*)|([+-])|(\S))")


class ExpressionError(ValueError):
    def __init__(self, message: str, column: Optional[int] = None):
        super().__init__(message if column is None else f"{message} (column {column})")
        self.column = column


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            break
        num, name, caret, star, sign, bad = mt.groups()
        col = mt.start(mt.lastindex) + 1
        if bad is not None:
            raise ExpressionError(f"unexpected character {bad!r}", col)
        kind = "num" if num else "name" if name else "^" if caret else "*" if star else "sign"
        out.append((kind, num or name or caret or star or sign, col))
        pos = mt.end()
    return out


def parse_expression(text: str, generators: Union[Mapping[str, Generator], Sequence[Generator]]) -> Element:
    """Parse ``-1*u*v*x + 3/2*u^2*z`` against a generator table."""
    if not isinstance(generators, Mapping):
        generators = {g.name: g for g in generators}
    toks = _tokens(text)
    if not toks:
        raise ExpressionError("empty expression", 1)
    result = Element.zero()
    i = 0
    first = True
    while i < len(toks):
        sign = 1
        if toks[i][0] == "sign":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ExpressionError("expected '+' or '-'", toks[i][2])
        first = False
        term = Element.scalar(sign)
        expect_factor = True
        while expect_factor:
            if i >= len(toks):
                raise ExpressionError("expression ends in the middle of a term", len(text) + 1)
            kind, val, col = toks[i]
            if kind == "num":
                factor = Element.scalar(Fraction(val))
                i += 1
            elif kind == "name":
                g = generators.get(val)
                if g is None:
                    raise ExpressionError(f"unknown generator {val!r}", col)
                i += 1
                power = 1
                if i < len(toks) and toks[i][0] == "^":
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num" or "/" in toks[i + 1][1]:
                        raise ExpressionError("exponent must be a non-negative integer", toks[i][2])
                    power = int(toks[i + 1][1])
                    i += 2
                factor = Element.gen(g, power)
            else:
                raise ExpressionError(f"unexpected {val!r}", col)
            term = term * factor
            if i < len(toks) and toks[i][0] == "*":
                i += 1
            else:
                expect_factor = False
        try:
            result = result + term
        except ValueError as exc:
            raise ExpressionError(str(exc), toks[min(i, len(toks) - 1)][2]) from None
    return result

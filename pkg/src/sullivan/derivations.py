"""
Derivations of free graded-commutative algebras.

A derivation of degree n lowers degree by n and satisfies

    theta(a*b) = theta(a)*b + (-1)^(|a|*n) * a*theta(b).

It is stored by its values on generators.  The differential of a model is
the derivation of degree -1.  The bracket is the graded commutator

    [theta, phi] = theta.phi - (-1)^(|theta|*|phi|) phi.theta,

so that [theta, theta] = 2 theta.theta for odd theta, and D = [d, -].
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .algebra import (
    Element,
    Generator,
    Monomial,
    decompose_odd,
    mono_degree,
)


class PreconditionError(ValueError):
    """An operation was called on inputs outside its hypotheses."""


class NilpotenceError(RuntimeError):
    def __init__(self, generator: Generator, bound: int):
        super().__init__(
            f"derivation is not nilpotent on generator {generator.name} within {bound} iterations"
        )
        self.generator = generator
        self.bound = bound


class Derivation:
    """A derivation of the given (lowering) degree, determined by generator values."""

    __slots__ = ("degree", "values", "name", "_cache")

    def __init__(self, degree: int, values: Optional[Mapping[Generator, Element]] = None, name: str = "theta"):
        self.degree = degree
        self.name = name
        clean: Dict[Generator, Element] = {}
        for g, val in (values or {}).items():
            if not isinstance(val, Element):
                val = Element.scalar(val)
            if not val:
                continue
            if val.degree != g.degree - degree:
                raise ValueError(
                    f"value on {g.name} has degree {val.degree}, expected {g.degree - degree}"
                )
            clean[g] = val
        self.values = clean
        self._cache: Dict[Monomial, Element] = {}

    @classmethod
    def zero(cls, degree: int) -> "Derivation":
        return cls(degree, {})

    @classmethod
    def dual(cls, g: Generator, value: Union[Element, int] = 1, degree: Optional[int] = None) -> "Derivation":
        """The derivation (g, value): sends g to value and every other generator to 0."""
        if not isinstance(value, Element):
            value = Element.scalar(value)
        if degree is None:
            degree = g.degree - (value.degree or 0) if value else g.degree
        return cls(degree, {g: value})

    def __getitem__(self, g: Generator) -> Element:
        return self.values.get(g, Element.zero())

    def support(self) -> List[Generator]:
        return sorted(self.values, key=lambda g: g.key)

    def is_zero(self) -> bool:
        return not self.values

    def __bool__(self):
        return bool(self.values)

    # evaluation

    def _on_monomial(self, m: Monomial) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        if not m:
            res = Element.zero()
        else:
            (g, e), rest = m[0], m[1:]
            val = self.values.get(g)
            head = Element.gen(g, e)
            if val is None:
                first = Element.zero()
            elif e == 1:
                first = val
            else:
                first = val * Element.gen(g, e - 1) * e
            if rest:
                rest_el = Element.monomial(rest)
                res = first * rest_el
                tail = self._on_monomial(rest)
                if tail:
                    term = head * tail
                    if (g.degree * e * self.degree) & 1:
                        term = -term
                    res = res + term
            else:
                res = first
        self._cache[m] = res
        return res

    def __call__(self, chi: Union[Element, Generator]) -> Element:
        if isinstance(chi, Generator):
            return self[chi]
        acc: Dict[Monomial, Fraction] = {}
        for m, c in chi.terms.items():
            for m2, c2 in self._on_monomial(m).terms.items():
                acc[m2] = acc.get(m2, 0) + c * c2
        return Element.from_accumulator(acc)

    # linear structure

    def _check_same_degree(self, other: "Derivation"):
        if self.degree != other.degree and self.values and other.values:
            raise ValueError(f"cannot add derivations of degrees {self.degree} and {other.degree}")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._check_same_degree(other)
        deg = self.degree if self.values else other.degree
        vals = dict(self.values)
        for g, v in other.values.items():
            vals[g] = vals[g] + v if g in vals else v
        return Derivation(deg, vals, self.name)

    def __neg__(self) -> "Derivation":
        return Derivation(self.degree, {g: -v for g, v in self.values.items()}, self.name)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-other)

    def scale(self, c) -> "Derivation":
        return Derivation(self.degree, {g: v.scale(c) for g, v in self.values.items()}, self.name)

    def __mul__(self, c) -> "Derivation":
        return self.scale(c)

    __rmul__ = __mul__

    def times(self, chi: Element) -> "Derivation":
        """The derivation chi*theta: v -> chi * theta(v)."""
        if not chi:
            return Derivation.zero(self.degree)
        return Derivation(self.degree - chi.degree, {g: chi * v for g, v in self.values.items()}, self.name)

    def restrict(self, gens: Iterable[Generator]) -> "Derivation":
        keep = set(gens)
        return Derivation(self.degree, {g: v for g, v in self.values.items() if g in keep}, self.name)

    def renamed(self, name: str) -> "Derivation":
        return Derivation(self.degree, self.values, name)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        if not self.values and not other.values:
            return True
        return self.degree == other.degree and self.values == other.values

    def __hash__(self):
        return hash((self.degree, frozenset(self.values.items())))

    def __str__(self):
        parts = [f"deg {self.degree}"]
        for g in self.support():
            parts.append(f"{g.name} -> {self.values[g]}")
        return f"{self.name} {{ " + "; ".join(parts) + " }"

    def __repr__(self):
        return f"Derivation({str(self)!r})"


def compose_apply(theta: Derivation, phi: Derivation, chi: Element) -> Element:
    return theta(phi(chi))


def bracket(theta: Derivation, phi: Derivation) -> Derivation:
    """Graded commutator theta.phi - (-1)^(|theta||phi|) phi.theta."""
    deg = theta.degree + phi.degree
    if not theta.values or not phi.values:
        return Derivation.zero(deg)
    odd = (theta.degree * phi.degree) & 1
    vals = {}
    for g in sorted(set(theta.values) | set(phi.values), key=lambda g: g.key):
        a = theta(phi[g])
        b = phi(theta[g])
        vals[g] = a + b if odd else a - b
    return Derivation(deg, vals)


def differential_D(model, theta: Derivation) -> Derivation:
    """D(theta) = [d, theta] = d.theta - (-1)^n theta.d."""
    return bracket(model.d, theta).renamed(f"D{theta.name}")


def is_cycle(model, theta: Derivation) -> bool:
    return differential_D(model, theta).is_zero()


def split_relative(theta: Derivation, x: Generator, model=None) -> Tuple[Derivation, Derivation]:
    """Split theta(w) = x*theta1(w) + theta0(w) on the generators w != x.

    Both parts are derivations of the subalgebra generated by the other
    generators; theta1 has degree |theta| + |x|.
    """
    if not x.odd:
        raise PreconditionError(f"split_relative needs an odd generator, {x.name} has degree {x.degree}")
    gens = model.generators if model is not None else theta.values.keys()
    t1, t0 = {}, {}
    for w in gens:
        if w == x:
            continue
        a, b = decompose_odd(theta[w], x)
        t1[w] = a
        t0[w] = b
    return Derivation(theta.degree + x.degree, t1, "theta1"), Derivation(theta.degree, t0, "theta0")


def power_series(theta: Derivation, chi: Element, bound: int = 64, coeff=None, label=None) -> Element:
    """sum_k coeff(k) * theta^k(chi), iterating until theta^k(chi) = 0."""
    total = Element.zero()
    term = chi
    k = 0
    while term:
        c = coeff(k) if coeff else Fraction(1)
        total = total + (term * c if not isinstance(c, Element) else c * term)
        k += 1
        if k > bound:
            raise NilpotenceError(label, bound)
        term = theta(term)
    return total


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def exp_locally_nilpotent(psi: Derivation, generators: Optional[Iterable[Generator]] = None, bound: int = 64):
    """exp(psi) = sum psi^k / k! for a degree-0 derivation nilpotent on each generator."""
    from .morphism import AlgebraMorphism

    if psi.degree != 0 and psi.values:
        raise PreconditionError(f"exp needs a degree-0 derivation, got degree {psi.degree}")
    gens = sorted(set(generators or ()) | set(psi.values), key=lambda g: g.key)
    images = {}
    for g in gens:
        images[g] = power_series(
            psi, Element.gen(g), bound, coeff=lambda k: Fraction(1, _factorial(k)), label=g
        )
    return AlgebraMorphism(gens, images)


# -- coordinates on spaces of derivations -------------------------------------


def derivation_basis(generators, n: int, enumerate_basis) -> List[Tuple[Generator, Monomial]]:
    """Basis (w, m) of Der_n: the derivation sending w to the monomial m, |m| = |w| - n."""
    out = []
    gens = sorted(generators, key=lambda g: g.key)
    for w in gens:
        k = w.degree - n
        if k < 0:
            continue
        for m in enumerate_basis(gens, k).monomials:
            out.append((w, m))
    return out


def derivation_from_coordinates(basis: List[Tuple[Generator, Monomial]], vec, degree: int, name="theta") -> Derivation:
    vals: Dict[Generator, Dict[Monomial, Fraction]] = {}
    for i, c in vec.items():
        w, m = basis[i]
        vals.setdefault(w, {})[m] = c
    return Derivation(degree, {w: Element(t) for w, t in vals.items()}, name)


def derivation_coordinates(theta: Derivation, index: Mapping[Tuple[Generator, Monomial], int]):
    out = {}
    for w, val in theta.values.items():
        for m, c in val.terms.items():
            i = index.get((w, m))
            if i is None:
                raise ValueError(f"derivation value {w.name} -> {val} lies outside the coordinate space")
            out[i] = c
    return out

"""
Degree-preserving algebra endomorphisms of a free graded-commutative algebra.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional

from .algebra import Element, Generator, Monomial, linear_part
from .derivations import Derivation
from .linalg import Infeasible, SparseMatrix, solve_affine


class AlgebraMorphism:
    """Algebra map determined by generator images; unlisted generators are fixed."""

    def __init__(self, generators: Iterable[Generator], images: Mapping[Generator, Element]):
        self.generators = tuple(sorted(set(generators) | set(images), key=lambda g: g.key))
        self.images: Dict[Generator, Element] = {}
        for g in self.generators:
            img = images.get(g)
            if img is None:
                continue
            if img and img.degree != g.degree:
                raise ValueError(f"image of {g.name} has degree {img.degree}, expected {g.degree}")
            if img != Element.gen(g):
                self.images[g] = img
        self._cache: Dict[Monomial, Element] = {}
        self._inverse: Optional["AlgebraMorphism"] = None

    @classmethod
    def identity(cls, generators: Iterable[Generator] = ()) -> "AlgebraMorphism":
        return cls(generators, {})

    def __getitem__(self, g: Generator) -> Element:
        img = self.images.get(g)
        return Element.gen(g) if img is None else img

    def is_identity(self) -> bool:
        return not self.images

    def _on_monomial(self, m: Monomial) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        res = Element.one()
        for g, e in m:
            res = res * (self[g] ** e)
        self._cache[m] = res
        return res

    def __call__(self, chi: Element) -> Element:
        if isinstance(chi, Generator):
            return self[chi]
        acc: Dict[Monomial, Fraction] = {}
        for m, c in chi.terms.items():
            for m2, c2 in self._on_monomial(m).terms.items():
                acc[m2] = acc.get(m2, 0) + c * c2
        return Element.from_accumulator(acc)

    def compose(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """self after other."""
        gens = set(self.generators) | set(other.generators)
        return AlgebraMorphism(gens, {g: self(other[g]) for g in gens})

    def inverse(self) -> "AlgebraMorphism":
        """Inverse, built degree by degree.

        On V^k the map is L + h with L linear and h decomposable in lower
        generators, so phi^{-1}(v) = u - phi^{-1}(phi(u) - v) with u = L^{-1} v.
        """
        if self._inverse is not None:
            return self._inverse
        inv: Dict[Generator, Element] = {}
        partial = AlgebraMorphism(self.generators, {})
        by_degree: Dict[int, List[Generator]] = {}
        for g in self.generators:
            by_degree.setdefault(g.degree, []).append(g)
        for k in sorted(by_degree):
            gens = by_degree[k]
            idx = {g: i for i, g in enumerate(gens)}
            cols = []
            for g in gens:
                lin = linear_part(self[g])
                col = {}
                for m, c in lin.terms.items():
                    h = m[0][0]
                    if h not in idx:
                        raise ValueError(f"image of {g.name} has a linear term in unknown generator {h.name}")
                    col[idx[h]] = c
                cols.append(col)
            A = SparseMatrix.from_columns(cols, len(gens))
            new = {}
            for g in gens:
                sol = solve_affine(A, {idx[g]: Fraction(1)})
                if isinstance(sol, Infeasible) or sol.kernel:
                    raise ValueError(f"morphism is not invertible: linear part singular in degree {k}")
                u = Element({((gens[j], 1),): c for j, c in sol.particular.items()})
                rest = self(u) - Element.gen(g)
                new[g] = u - partial(rest)
            inv.update(new)
            partial = AlgebraMorphism(self.generators, inv)
        self._inverse = partial
        partial._inverse = self
        return partial

    def conjugate(self, theta: Derivation, generators: Optional[Iterable[Generator]] = None) -> Derivation:
        """phi^{-1} . theta . phi as a derivation."""
        inv = self.inverse()
        gens = generators if generators is not None else self.generators
        return Derivation(theta.degree, {g: inv(theta(self[g])) for g in gens}, theta.name)

    def __eq__(self, other):
        if not isinstance(other, AlgebraMorphism):
            return NotImplemented
        gens = set(self.generators) | set(other.generators)
        return all(self[g] == other[g] for g in gens)

    def __str__(self):
        if not self.images:
            return "id"
        return "; ".join(f"{g.name} -> {self.images[g]}" for g in sorted(self.images, key=lambda g: g.key))

    def __repr__(self):
        return f"AlgebraMorphism({str(self)!r})"

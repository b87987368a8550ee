"""
Sullivan minimal models (free graded-commutative algebra plus differential).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from .algebra import Element, Generator, is_decomposable, mono_weight
from .derivations import Derivation, PreconditionError
from .linalg import EchelonSpace, enumerate_basis, image_basis, kernel_basis, matrix_of


class SullivanModel:
    """A free graded-commutative algebra on finitely many generators with a differential.

    ``complete_through`` records a truncation: when set to c, every generator
    of degree <= c is present but higher generators may be missing.  None
    means the generator list is the whole model.
    """

    def __init__(
        self,
        generators: Iterable[Generator],
        differential: Optional[Mapping[Generator, Element]] = None,
        top_cohomology: Optional[int] = None,
        complete_through: Optional[int] = None,
        name: str = "model",
    ):
        gens = sorted(generators, key=lambda g: g.key)
        names = set()
        for g in gens:
            if g.name in names:
                raise ValueError(f"duplicate generator name {g.name!r}")
            names.add(g.name)
        self.generators = tuple(gens)
        self.by_name = {g.name: g for g in gens}
        diff = {}
        for g, val in (differential or {}).items():
            if g not in self.by_name.values():
                raise ValueError(f"differential given for unknown generator {g.name}")
            if val:
                diff[g] = val
        self.differential: Dict[Generator, Element] = diff
        self.top_cohomology = top_cohomology
        self.complete_through = complete_through
        self.name = name
        self._d: Optional[Derivation] = None

    @property
    def d(self) -> Derivation:
        if self._d is None:
            # bypass the degree check so that malformed models can still be validated
            dd = Derivation(-1, {}, "d")
            dd.values = dict(self.differential)
            self._d = dd
        return self._d

    def dg(self, g: Generator) -> Element:
        return self.differential.get(g, Element.zero())

    def gen(self, name: str) -> Generator:
        try:
            return self.by_name[name]
        except KeyError:
            raise KeyError(f"no generator named {name!r}") from None

    def __getitem__(self, name: str) -> Generator:
        return self.gen(name)

    @property
    def top_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    @property
    def truncated(self) -> bool:
        return self.complete_through is not None

    def replace(self, differential=None, generators=None, **kw) -> "SullivanModel":
        return SullivanModel(
            self.generators if generators is None else generators,
            self.differential if differential is None else differential,
            kw.get("top_cohomology", self.top_cohomology),
            kw.get("complete_through", self.complete_through),
            kw.get("name", self.name),
        )

    def __eq__(self, other):
        if not isinstance(other, SullivanModel):
            return NotImplemented
        return (
            self.generators == other.generators
            and all(g.weight == h.weight for g, h in zip(self.generators, other.generators))
            and self.differential == other.differential
            and self.complete_through == other.complete_through
        )

    def __repr__(self):
        body = ", ".join(f"{g.name}{g.degree}" for g in self.generators)
        return f"SullivanModel({body})"


@dataclass(frozen=True)
class Violation:
    kind: str  # "degree" | "minimality" | "d_squared" | "unknown_generator"
    generator: Generator
    message: str

    def __str__(self):
        return f"{self.kind} violation at {self.generator.name}: {self.message}"


def validate_model(m: SullivanModel) -> List[Violation]:
    out = []
    known = set(m.generators)
    for g in m.generators:
        dg = m.dg(g)
        if not dg:
            continue
        stray = dg.generators() - known
        if stray:
            out.append(Violation("unknown_generator", g, f"d{g.name} mentions {sorted(h.name for h in stray)}"))
            continue
        if dg.degree != g.degree + 1:
            out.append(Violation("degree", g, f"|d{g.name}| = {dg.degree}, expected {g.degree + 1}"))
            continue
        if not is_decomposable(dg):
            out.append(Violation("minimality", g, f"d{g.name} = {dg} has a linear term"))
    if out:
        return out
    for g in m.generators:
        dd = m.d(m.dg(g))
        if dd:
            out.append(Violation("d_squared", g, f"d(d{g.name}) = {dd}"))
    return out


def check_bigrading(m: SullivanModel) -> bool:
    """d(V_0) = 0 and d(V_i) lies in lower weight i - 1."""
    missing = [g.name for g in m.generators if g.weight is None]
    if missing:
        raise PreconditionError(f"generators without weights: {', '.join(missing)}")
    for g in m.generators:
        dg = m.dg(g)
        if g.weight == 0:
            if dg:
                return False
            continue
        if any(mono_weight(mono) != g.weight - 1 for mono in dg.terms):
            return False
    return True


@dataclass
class CohomologyDegree:
    degree: int
    dim_chains: int
    dim_cocycles: int
    dim_coboundaries: int
    representatives: List[Element]
    truncated: bool = False

    @property
    def dim(self) -> int:
        return self.dim_cocycles - self.dim_coboundaries


@dataclass
class CohomologyReport:
    max_degree: int
    window: int
    degrees: List[CohomologyDegree] = field(default_factory=list)

    def dims(self) -> Dict[int, int]:
        return {c.degree: c.dim for c in self.degrees}

    def __getitem__(self, k: int) -> CohomologyDegree:
        return self.degrees[k]

    def top_nonzero(self) -> Optional[int]:
        """Highest degree inside the window with nonzero cohomology."""
        nz = [c.degree for c in self.degrees if c.dim and not c.truncated]
        return max(nz) if nz else None


def cohomology_window(m: SullivanModel, max_degree: int) -> int:
    # generators of degree <= c span a sub-DGA whose cohomology agrees with the
    # full model through degree c
    if m.complete_through is None:
        return max_degree
    return min(max_degree, m.complete_through)


def differential_matrix(m: SullivanModel, k: int):
    return matrix_of(m.d, enumerate_basis(m, k), enumerate_basis(m, k + 1))


def cohomology(m: SullivanModel, max_degree: int) -> CohomologyReport:
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    window = cohomology_window(m, max_degree)
    report = CohomologyReport(max_degree, window)
    prev = None  # matrix of d: degree k-1 -> k
    for k in range(max_degree + 1):
        cur = differential_matrix(m, k)
        basis = cur.domain
        kernel = kernel_basis(cur.matrix)
        space = EchelonSpace()
        nb = 0
        if prev is not None:
            _, img = image_basis(prev.matrix)
            for v in img:
                space.add(v)
            nb = len(img)
        reps = []
        for v in kernel:
            if space.add(v):
                reps.append(basis.element(v))
        report.degrees.append(
            CohomologyDegree(k, len(basis), len(kernel), nb, reps, truncated=k > window)
        )
        prev = cur
    return report


def cohomology_dims(m: SullivanModel, max_degree: int) -> Dict[int, int]:
    return cohomology(m, max_degree).dims()


def attach_square_killers(m: SullivanModel, evens: Sequence[Generator]) -> SullivanModel:
    """Adjoin odd a_z with d(a_z) = z^2 for each listed even cocycle generator z."""
    if not evens:
        return m
    gens = list(m.generators)
    diff = dict(m.differential)
    for z in evens:
        if z not in m.generators:
            raise PreconditionError(f"{z.name} is not a generator of the model")
        if z.odd:
            raise PreconditionError(f"{z.name} has odd degree {z.degree}")
        if m.dg(z):
            raise PreconditionError(f"{z.name} is not a cocycle: d{z.name} = {m.dg(z)}")
        name = f"a_{z.name}"
        if name in m.by_name or any(g.name == name for g in gens):
            raise PreconditionError(f"generator name {name} already in use")
        a = Generator(name, 2 * z.degree - 1)
        gens.append(a)
        diff[a] = Element.gen(z, 2)
    return SullivanModel(gens, diff, None, m.complete_through, m.name)


def tensor(a: SullivanModel, b: SullivanModel, name: str = "model") -> SullivanModel:
    clash = set(a.by_name) & set(b.by_name)
    if clash:
        raise ValueError(f"generator names used twice: {sorted(clash)}")
    diff = dict(a.differential)
    diff.update(b.differential)
    ct = [c for c in (a.complete_through, b.complete_through) if c is not None]
    return SullivanModel(list(a.generators) + list(b.generators), diff, None, min(ct) if ct else None, name)

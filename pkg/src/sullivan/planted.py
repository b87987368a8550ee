"""
Random models with known ground truth, for property suites.

Planted instances start from a split model (A(g), 0) (x) (AW, d), where the
dual derivation (g, 1) is a cycle, and hide the splitting under a random
automorphism exp(psi).  psi is a degree-0 derivation sending each generator
to decomposables and to linear terms in earlier generators of the same
degree, so it is locally nilpotent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra import Element, Generator, mono_length
from .derivations import Derivation, exp_locally_nilpotent
from .linalg import enumerate_basis, kernel_basis, matrix_of
from .model import SullivanModel, tensor
from .morphism import AlgebraMorphism


def _coeff(rng: random.Random, r: int = 2) -> int:
    c = 0
    while c == 0:
        c = rng.randint(-r, r)
    return c


def _cocycles(cur: SullivanModel, k: int):
    dom = enumerate_basis(cur, k)
    cod = enumerate_basis(cur, k + 1)
    return dom, kernel_basis(matrix_of(cur.d, dom, cod).matrix)


def random_minimal_model(
    rng: random.Random,
    n_gens: int,
    max_degree: int = 12,
    prefix: str = "w",
    zero_prob: float = 0.2,
    degrees: Optional[Sequence[int]] = None,
) -> SullivanModel:
    """Generators added in increasing degree; each dw is a random cocycle of the model built so far.

    Without explicit ``degrees``, the first two generators get small degree
    and later ones are placed, when possible, in a degree where the current
    model has cocycles, so that most differentials are nonzero.
    """
    gens: List[Generator] = []
    diff = {}
    lo = 2
    for i in range(n_gens):
        cur = SullivanModel(gens, diff)
        if degrees is not None:
            k = sorted(degrees)[i]
        elif i < 2 or rng.random() < zero_prob:
            k = rng.randint(lo, min(max_degree, lo + 2))
        else:
            options = [j for j in range(lo, max_degree + 1) if _cocycles(cur, j + 1)[1]]
            k = rng.choice(options[:4]) if options else rng.randint(lo, max_degree)
        lo = k
        g = Generator(f"{prefix}{i + 1}", k)
        val = Element.zero()
        if gens and rng.random() >= zero_prob:
            dom, cocycles = _cocycles(cur, k + 1)
            if cocycles:
                for vec in rng.sample(cocycles, min(len(cocycles), rng.randint(1, 2))):
                    val = val + dom.element(vec).scale(_coeff(rng))
        gens.append(g)
        if val:
            diff[g] = val
    return SullivanModel(gens, diff)


def random_monomial_model(rng: random.Random, n_gens: int, max_degree: int = 12, prefix: str = "m") -> SullivanModel:
    """Every differential is zero or a single monomial cocycle."""
    degrees = sorted(rng.randint(2, max_degree) for _ in range(n_gens))
    gens: List[Generator] = []
    diff = {}
    for i, k in enumerate(degrees):
        g = Generator(f"{prefix}{i + 1}", k)
        cur = SullivanModel(gens, diff)
        if gens and rng.random() < 0.7:
            monos = [mo for mo in enumerate_basis(cur, k + 1).monomials if not cur.d(Element.monomial(mo))]
            if monos:
                diff[g] = Element.monomial(rng.choice(monos), _coeff(rng, 1))
        gens.append(g)
    return SullivanModel(gens, diff)


def random_scramble(
    rng: random.Random,
    m: SullivanModel,
    fixed: Sequence[Generator] = (),
    density: float = 0.85,
    max_terms: int = 2,
    favor: Optional[Generator] = None,
) -> AlgebraMorphism:
    """exp of a random locally nilpotent degree-0 derivation (zero on ``fixed``).

    With ``favor``, terms involving that generator are preferred so that it
    gets mixed into the other generators.
    """
    gens = list(m.generators)
    vals = {}
    for i, v in enumerate(gens):
        if v in fixed or rng.random() > density:
            continue
        candidates = [mo for mo in enumerate_basis(gens[:i], v.degree).monomials if mono_length(mo) >= 2]
        candidates += [((h, 1),) for h in gens[:i] if h.degree == v.degree]
        if not candidates:
            continue
        picks = rng.sample(candidates, min(len(candidates), rng.randint(1, max_terms)))
        if favor is not None:
            hits = [mo for mo in candidates if any(h == favor for h, _ in mo)]
            if hits and rng.random() < 0.6:
                picks[0] = rng.choice(hits)
        val = Element.zero()
        for mo in dict.fromkeys(picks):
            val = val + Element.monomial(mo, _coeff(rng))
        vals[v] = val
    return exp_locally_nilpotent(Derivation(0, vals, "psi"), gens)


def conjugate_model(m: SullivanModel, phi: AlgebraMorphism) -> SullivanModel:
    inv = phi.inverse()
    return m.replace(differential={g: inv(m.d(phi[g])) for g in m.generators})


@dataclass
class PlantedInstance:
    model: SullivanModel
    generator: Generator
    theta: Derivation
    split_model: SullivanModel
    phi: AlgebraMorphism
    seed: int


def planted_gottlieb(
    seed: int,
    parity: str,
    n_other: Optional[int] = None,
    max_degree: int = 12,
    keep_cocycle: bool = False,
) -> PlantedInstance:
    """(A(g), 0) (x) random model, scrambled; theta is the transported (g, 1)."""
    rng = random.Random(seed)
    if n_other is None:
        n_other = rng.randint(2, 6)
    if parity == "odd":
        gdeg = rng.choice([3, 5, 7])
    elif parity == "even":
        gdeg = rng.choice([2, 4, 6])
    else:
        raise ValueError("parity must be 'odd' or 'even'")
    g = Generator("g", gdeg)
    W = random_minimal_model(rng, n_other, max_degree)
    split = tensor(SullivanModel([g]), W)
    phi = random_scramble(rng, split, fixed=(g,) if keep_cocycle else (), favor=g)
    m = conjugate_model(split, phi)
    theta = phi.conjugate(Derivation.dual(g, 1), split.generators)
    return PlantedInstance(m, g, theta, split, phi, seed)


def odd_even_base(a: int = 1, b: int = 1, y_scale: Fraction = Fraction(1)) -> Tuple[SullivanModel, Derivation]:
    """u, v even; dx = uv, dz = v^2, dy = c(-uvx + u^2 z); theta = (x,1) + (y, c x)."""
    u, v = Generator("u", 2 * a), Generator("v", 2 * b)
    x = Generator("x", 2 * a + 2 * b - 1)
    z = Generator("z", 4 * b - 1)
    y = Generator("y", 4 * a + 4 * b - 2)
    U, V, X, Z = (Element.gen(t) for t in (u, v, x, z))
    c = Fraction(y_scale)
    m = SullivanModel([u, v, x, z, y], {x: U * V, z: V * V, y: (-(U * V * X) + U * U * Z).scale(c)})
    theta = Derivation(x.degree, {x: Element.one(), y: X.scale(c)})
    return m, theta


@dataclass
class BothParitiesInstance:
    model: SullivanModel
    x: Generator
    y0: Generator
    theta_a: Derivation
    seed: int


def planted_both_parities(seed: int, n_other: Optional[int] = None) -> BothParitiesInstance:
    """Base with theta_b(y0) = 1 (y0 scaled by 1/2), tensored with a random model and scrambled."""
    rng = random.Random(seed)
    a, b = rng.choice([(1, 1), (1, 2), (2, 1)])
    base, theta = odd_even_base(a, b, Fraction(1, 2))
    if n_other is None:
        n_other = rng.randint(0, 3)
    W = random_minimal_model(rng, n_other, 10) if n_other else SullivanModel([])
    m0 = tensor(base, W)
    phi = random_scramble(rng, m0)
    m = conjugate_model(m0, phi)
    theta_a = phi.conjugate(theta, m0.generators)
    return BothParitiesInstance(m, base.gen("x"), base.gen("y"), theta_a, seed)


@dataclass
class MonomialInstance:
    model: SullivanModel
    x: Generator
    theta: Derivation
    seed: int


def monomial_gottlieb_instance(seed: int) -> MonomialInstance:
    """Odd Gottlieb x with dx = uv, tensored with a random monomial model, scrambled away from u, v, x."""
    rng = random.Random(seed)
    a, b = rng.choice([(1, 1), (1, 2), (2, 1)])
    base, theta = odd_even_base(a, b)
    extra = random_monomial_model(rng, rng.randint(0, 3), 10)
    m0 = tensor(base, extra)
    fixed = [base.gen("u"), base.gen("v"), base.gen("x")]
    phi = random_scramble(rng, m0, fixed=fixed)
    m = conjugate_model(m0, phi)
    return MonomialInstance(m, base.gen("x"), phi.conjugate(theta, m0.generators), seed)


def random_monomial_gottlieb(seed: int, max_tries: int = 200) -> MonomialInstance:
    """Random model with every differential a monomial and an odd Gottlieb x with dx != 0.

    Draws from one seeded stream until some odd generator with nonzero dx
    admits a derivation cycle with value 1; the first such x is returned.
    """
    from .gottlieb import find_gottlieb

    rng = random.Random(seed)
    for _ in range(max_tries):
        m = random_monomial_model(rng, rng.randint(3, 6), 12)
        for g in m.generators:
            if g.odd and m.dg(g):
                cert = find_gottlieb(m, g)
                if cert.witness is not None:
                    return MonomialInstance(m, g, cert.witness, seed)
    raise RuntimeError(f"no monomial Gottlieb instance found for seed {seed}")

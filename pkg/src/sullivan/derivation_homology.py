"""
Homology of the derivation complex (Der(AV), D) of a finite model, the
bracket on it, and probes built on top of it.

Der_n has the basis (w, m): the derivation sending the generator w to the
monomial m with |m| = |w| - n.  D maps Der_n to Der_{n-1}.  Degree slices are
independent and may be computed on a thread pool (``SULLIVAN_THREADS``);
results are always assembled in degree order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Element, Generator, Monomial, linear_part, mono_length
from .basis_change import BasisChangeReport, combined_change, is_terminal
from .derivations import (
    Derivation,
    PreconditionError,
    bracket,
    derivation_basis,
    derivation_coordinates,
    derivation_from_coordinates,
    differential_D,
)
from .linalg import (
    AffineSolution,
    EchelonSpace,
    SparseMatrix,
    enumerate_basis,
    image_basis,
    kernel_basis,
    solve_affine,
)
from .model import SullivanModel


class WindowError(ValueError):
    """The requested degrees are not certified by the available generators."""


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("SULLIVAN_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class DerivationSpace:
    degree: int
    basis: List[Tuple[Generator, Monomial]]
    index: Dict[Tuple[Generator, Monomial], int]

    def __len__(self):
        return len(self.basis)

    def derivation(self, vec, name="theta") -> Derivation:
        return derivation_from_coordinates(self.basis, vec, self.degree, name)

    def coordinates(self, theta: Derivation):
        return derivation_coordinates(theta, self.index)


def derivation_space(m: SullivanModel, n: int) -> DerivationSpace:
    basis = derivation_basis(m.generators, n, enumerate_basis)
    return DerivationSpace(n, basis, {b: i for i, b in enumerate(basis)})


def D_matrix(m: SullivanModel, n: int) -> Tuple[DerivationSpace, DerivationSpace, SparseMatrix]:
    """Matrix of D: Der_n -> Der_{n-1}."""
    dom = derivation_space(m, n)
    cod = derivation_space(m, n - 1)
    cols = []
    for w, mono in dom.basis:
        e = Derivation(n, {w: Element.monomial(mono)})
        cols.append(cod.coordinates(differential_D(m, e)))
    return dom, cod, SparseMatrix.from_columns(cols, len(cod))


@dataclass
class HomologySlice:
    degree: int
    dim_chains: int
    dim_cycles: int
    dim_boundaries: int
    representatives: List[Derivation]
    boundaries: List[Tuple[Derivation, Derivation]]  # (preimage, boundary)
    space: DerivationSpace = field(repr=False)
    echelon: EchelonSpace = field(repr=False)

    @property
    def dim(self) -> int:
        return self.dim_cycles - self.dim_boundaries

    def classify(self, theta: Derivation) -> Optional[List[Fraction]]:
        """Coordinates of the class of a cycle in the representative basis (None if not a cycle combination)."""
        if not theta:
            return [Fraction(0)] * self.dim
        if theta.degree != self.degree:
            raise ValueError(f"derivation of degree {theta.degree} classified in degree {self.degree}")
        res, tag = self.echelon.reduce(self.space.coordinates(theta), with_tag=True)
        if res:
            return None
        nb = self.dim_boundaries
        return [-tag.get(nb + i, Fraction(0)) for i in range(self.dim)]

    def is_boundary(self, theta: Derivation) -> bool:
        c = self.classify(theta)
        return c is not None and not any(c)


@dataclass
class DerivationHomologyReport:
    model: SullivanModel
    lo: int
    hi: int
    slices: Dict[int, HomologySlice]

    def __getitem__(self, n: int) -> HomologySlice:
        if n not in self.slices:
            self.slices[n] = _slice(self.model, n)
        return self.slices[n]

    def dims(self) -> Dict[int, int]:
        return {n: self.slices[n].dim for n in range(self.lo, self.hi + 1)}

    def render(self) -> str:
        out = [
            "derivation homology",
            "convention: Der_1 is the full space of degree-1 derivations",
            f"window: {self.lo}..{self.hi} (finite model, exact)",
            "n dimDer dimZ dimB dimH",
        ]
        for n in range(self.lo, self.hi + 1):
            s = self.slices[n]
            out.append(f"{n} {s.dim_chains} {s.dim_cycles} {s.dim_boundaries} {s.dim}")
            for r in s.representatives:
                out.append(f"  {r}")
        return "\n".join(out)


def _slice(m: SullivanModel, n: int, mats=None) -> HomologySlice:
    dom, _cod, Dn = mats[n] if mats else D_matrix(m, n)
    dom_up, _, Dup = mats[n + 1] if mats else D_matrix(m, n + 1)
    cycles = kernel_basis(Dn)
    pivots, images = image_basis(Dup)
    space = EchelonSpace()
    boundaries = []
    for j, v in zip(pivots, images):
        space.add(v)
        pre = dom_up.derivation({j: Fraction(1)}, "eta")
        boundaries.append((pre, dom.derivation(v, "beta")))
    reps = []
    for v in cycles:
        if space.add(v):
            reps.append(dom.derivation(v, f"h{n}_{len(reps) + 1}"))
    return HomologySlice(n, len(dom), len(cycles), len(images), reps, boundaries, dom, space)


def _check_window(m: SullivanModel):
    if m.complete_through is not None:
        raise WindowError(
            f"model is only known through degree {m.complete_through}; derivations take values on "
            "every generator, so no derivation degree is certified.  Supply the complete generator list."
        )


def compute_homology(m: SullivanModel, lo: int = 1, hi: Optional[int] = None) -> DerivationHomologyReport:
    _check_window(m)
    if hi is None:
        hi = max(lo, m.top_degree)
    if lo < 1 or hi < lo:
        raise ValueError(f"degree range {lo}..{hi} must satisfy 1 <= lo <= hi")
    needed = list(range(lo, hi + 2))
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        mats = dict(zip(needed, pool.map(lambda k: D_matrix(m, k), needed)))
    slices = {n: _slice(m, n, mats) for n in range(lo, hi + 1)}
    return DerivationHomologyReport(m, lo, hi, slices)


def bracket_on_homology(report: DerivationHomologyReport, alpha: Derivation, beta: Derivation):
    """Class of [alpha, beta] in the representative basis of its degree."""
    gamma = bracket(alpha, beta)
    n = alpha.degree + beta.degree
    if n < 1:
        raise WindowError(f"bracket lands in degree {n}")
    coords = report[n].classify(gamma)
    if coords is None:
        raise ValueError("bracket of the given derivations is not a cycle; inputs must be cycles")
    return coords


def class_expression(coords: Sequence[Fraction], n: int) -> str:
    parts = []
    for i, c in enumerate(coords):
        if not c:
            continue
        name = f"[h{n}_{i + 1}]"
        body = name if abs(c) == 1 else f"{abs(c)}*{name}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# -- exactness and the partner term ---------------------------------------------


@dataclass
class PartnerCheck:
    z: Generator
    v: Generator
    eta: Derivation
    partner: Element  # v* with dz containing v*v*
    value: Optional[Fraction]  # eta(v*)
    expected: Optional[int]
    ok: bool


def solve_boundary(m: SullivanModel, theta: Derivation):
    """eta with D(eta) = theta, or None if theta does not bound."""
    n = theta.degree
    dom, cod, Dm = D_matrix(m, n + 1)
    res = solve_affine(Dm, cod.coordinates(theta))
    if not isinstance(res, AffineSolution):
        return None
    eta = dom.derivation(res.particular, "eta")
    assert differential_D(m, eta) == theta
    return eta


def partner_check(m: SullivanModel, z: Generator, v: Generator, eta: Derivation) -> PartnerCheck:
    """Given D(eta) = (z, v) + theta' with theta'(z) = 0, locate the v*v* term of dz.

    With dz = v*P + (terms free of v), comparing linear parts of
    D(eta)(z) = v forces eta(P) = -(-1)^(|eta|(1+|v|)) when |v| != |eta|.
    """
    dz = m.dg(z)
    quad = Element({mo: c for mo, c in dz.terms.items() if mono_length(mo) == 2})
    partner = Element.zero()
    for mo, c in quad.terms.items():
        gens = [g for g, e in mo for _ in range(e)]
        if v not in gens:
            continue
        i = gens.index(v)
        other = gens[1 - i]
        # move v to the front
        sign = -1 if (i == 1 and v.odd and other.odd) else 1
        partner = partner + Element.gen(other).scale(c * sign)
    val = eta(partner).scalar_value() if partner else Fraction(0)
    if v.degree != eta.degree:
        expected = -((-1) ** ((eta.degree * (1 + v.degree)) % 2))
        ok = val == expected
    else:
        expected = None
        ok = bool(val)
    return PartnerCheck(z, v, eta, partner, val, expected, ok)


# -- realization probe --------------------------------------------------------------


@dataclass
class ProbeResult:
    n: int
    conditions: Dict[str, bool]
    lines: List[str]
    combined: Optional[BasisChangeReport] = None
    obstructions: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def failed(self) -> List[str]:
        return [k for k, v in self.conditions.items() if not v]

    def render(self) -> str:
        out = [f"probe-s2n n={self.n}"]
        out.extend(self.lines)
        for k, v in self.conditions.items():
            out.append(f"{'PASS' if v else 'FAIL'} {k}")
        for o in self.obstructions:
            out.append(f"obstruction: {o}")
        out.append(f"failed: {', '.join(self.failed()) if self.failed() else 'none'}")
        out.append(f"verdict: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(out)


def realization_probe(m: SullivanModel, n: int) -> ProbeResult:
    """Test the derivation-homology pattern <theta_a, [theta_a, theta_a]> with |theta_a| = 2n-1."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_window(m)
    a_deg, b_deg = 2 * n - 1, 4 * n - 2
    hi = max(b_deg, m.top_degree)
    rep = compute_homology(m, 1, hi)
    lines = [f"window: 1..{hi}"]
    cond: Dict[str, bool] = {}
    sa = rep[a_deg]
    cond[f"(i) dim H_{a_deg} = 1"] = sa.dim == 1
    theta_a = sa.representatives[0] if sa.dim == 1 else None
    theta_b = None
    if theta_a is not None:
        for g in m.generators:
            c = theta_a[g].scalar_value()
            if g.degree == a_deg and c:
                theta_a = theta_a.scale(1 / c).renamed("theta_a")
                break
        lines.append(f"theta_a = {theta_a}")
        theta_b = bracket(theta_a, theta_a).renamed("theta_b")
        coords = rep[b_deg].classify(theta_b)
        cond[f"(ii) [theta_a, theta_a] is not a boundary"] = coords is not None and any(coords)
        lines.append(f"[theta_a, theta_a] = {class_expression(coords or [], b_deg)}")
    else:
        cond["(ii) [theta_a, theta_a] is not a boundary"] = False
    others = [k for k in range(1, hi + 1) if k not in (a_deg, b_deg) and rep[k].dim]
    cond["(iii) H vanishes in the other window degrees"] = not others
    if others:
        lines.append("nonzero elsewhere: " + ", ".join(f"H_{k} = {rep[k].dim}" for k in others))
    y0 = None
    if theta_b is not None:
        for g in m.generators:
            if g.degree == b_deg and theta_b[g].scalar_value():
                y0 = g
                break
    cond[f"(iv) some y0 in V^{b_deg} has theta_b(y0) != 0"] = y0 is not None
    result = ProbeResult(n, cond, lines)
    if y0 is not None:
        c = theta_b[y0].scalar_value()
        lines.append(f"y0 = {y0.name}, theta_b(y0) = {c}")
        work, ta, y = m, theta_a, y0
        if c != 1:
            from .morphism import AlgebraMorphism

            scale = AlgebraMorphism(m.generators, {y0: Element.gen(y0).scale(Fraction(1) / c)})
            inv = scale.inverse()
            work = m.replace(differential={g: inv(m.d(scale[g])) for g in m.generators})
            ta = scale.conjugate(theta_a, m.generators)
            lines.append(f"rescaled {y0.name} by 1/{c}")
        try:
            comb = combined_change(work, None, y, ta)
            result.combined = comb
            lines.append(f"combined change: {'PASS' if comb.passed else 'FAIL'}")
            new = comb.new_model
            for v in new.generators:
                if v.degree >= y.degree or v == y or new.dg(v):
                    continue
                cyc = Derivation(y.degree - v.degree, {y: Element.gen(v)})
                if not differential_D(new, cyc).is_zero():
                    continue
                eta = solve_boundary(new, cyc)
                if eta is None:
                    k = cyc.degree
                    if k not in (a_deg, b_deg):
                        result.obstructions.append(f"({y.name}, {v.name}) is a non-bounding cycle in degree {k}")
                else:
                    pc = partner_check(new, y, v, eta)
                    lines.append(
                        f"({y.name}, {v.name}) = D(eta): partner {pc.partner}, eta(partner) = {pc.value}"
                    )
                    if not pc.ok:
                        result.obstructions.append(f"partner check failed for ({y.name}, {v.name})")
        except PreconditionError as exc:
            lines.append(f"combined change not applicable: {exc}")
    return result


# -- zero divisors ----------------------------------------------------------------------


@dataclass
class ZeroDivisorResult:
    y: Generator
    witness: Optional[Derivation]
    witness_degree: Optional[int]
    bound_ok: Optional[bool]
    lines: List[str]

    def render(self) -> str:
        out = [f"zero-divisor {self.y.name}"] + self.lines
        if self.witness is not None:
            out.append(f"witness: {self.witness}")
            out.append(f"verdict: zero divisor (witness in degree {self.witness_degree})")
        else:
            out.append("no witness in window")
            out.append(f"dimension bound: {'PASS' if self.bound_ok else 'FAIL'}")
        return "\n".join(out)


def zero_divisor_check(m: SullivanModel, y: Generator, report: Optional[DerivationHomologyReport] = None) -> ZeroDivisorResult:
    if y.odd:
        raise PreconditionError(f"{y.name} must have even degree")
    if m.dg(y):
        raise PreconditionError(f"d{y.name} = {m.dg(y)} is not zero")
    if not is_terminal(m, y):
        raise PreconditionError(f"{y.name} occurs in a differential; the model is not split along it")
    _check_window(m)
    theta = Derivation.dual(y, 1).renamed("theta")
    two_m = y.degree
    hi = m.top_degree
    if report is None:
        report = compute_homology(m, 1, max(hi, two_m))
    lines = [f"theta = {theta}", f"window: 1..{report.hi}"]
    for n in range(1, report.hi + 1):
        s = report[n]
        if not s.dim:
            continue
        target = report[n + two_m]
        cols = []
        for r in s.representatives:
            c = target.classify(bracket(theta, r))
            cols.append({i: v for i, v in enumerate(c) if v})
        A = SparseMatrix.from_columns(cols, target.dim)
        ker = kernel_basis(A)
        theta_coords = s.classify(theta) if n == two_m else None
        excl = EchelonSpace()
        if theta_coords:
            excl.add({i: v for i, v in enumerate(theta_coords) if v})
        for k in ker:
            if excl.add(k):
                wit = Derivation.zero(n)
                for i, c in k.items():
                    wit = wit + s.representatives[i].scale(c)
                return ZeroDivisorResult(y, wit.renamed("beta"), n, None, lines)
    ok = True
    for n in range(two_m, report.hi + 1):
        allowed = 1 if n == two_m else 0
        if report[n].dim > allowed:
            ok = False
            lines.append(f"dim H_{n} = {report[n].dim} exceeds {allowed}")
    return ZeroDivisorResult(y, None, None, ok, lines)

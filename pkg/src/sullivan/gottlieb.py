"""
Detection of Gottlieb generators and the structural checks built on them.

A generator v of degree n is Gottlieb when some derivation cycle theta of
degree n has theta(v) = 1.  Unknowns are the coordinates of theta in Der_n;
D(theta) = 0 is linear and theta(v) = 1 is one affine row, so detection is a
single exact affine solve.  Infeasibility comes with a left certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .algebra import ONE, Element, Generator, mono_str
from .basis_change import even_change, is_terminal, odd_change
from .derivation_homology import D_matrix
from .derivations import Derivation, PreconditionError, differential_D
from .linalg import AffineSolution, SparseMatrix, check_solution, solve_affine
from .model import SullivanModel, cohomology


@dataclass
class GottliebCertificate:
    generator: Generator
    verdict: str  # "witness" | "infeasible" | "inconclusive"
    cap: int
    witness: Optional[Derivation] = None
    certificate: List[Tuple[str, Fraction]] = field(default_factory=list)
    note: str = ""

    @property
    def is_gottlieb(self) -> Optional[bool]:
        return {"witness": True, "infeasible": False}.get(self.verdict)

    def render(self) -> str:
        out = [f"gottlieb {self.generator.name}", f"cap: {self.cap}", f"verdict: {self.verdict}"]
        if self.witness is not None:
            out.append(f"witness: {self.witness}")
        if self.certificate:
            out.append("certificate (combination of constraint rows, summing to 0 = 1):")
            for label, c in self.certificate:
                out.append(f"  {c} * [{label}]")
        if self.note:
            out.append(f"note: {self.note}")
        return "\n".join(out)


def find_gottlieb(m: SullivanModel, v: Generator, cap: Optional[int] = None) -> GottliebCertificate:
    if v not in m.generators:
        raise PreconditionError(f"{v.name} is not a generator of the model")
    top = m.top_degree
    if cap is None:
        cap = top
    if cap < top:
        raise ValueError(f"cap {cap} is below the top generator degree {top}")
    n = v.degree
    dom, cod, Dn = D_matrix(m, n)
    labels = [f"D(theta)({g.name}) at {mono_str(mo)}" for g, mo in cod.basis] + [f"theta({v.name}) = 1"]
    fix = dom.index[(v, ONE)]

    def solve(keep):
        rows = [dict(Dn.rows[i]) for i in keep] + [{fix: Fraction(1)}]
        A = SparseMatrix(len(rows), len(dom), rows)
        b = {len(rows) - 1: Fraction(1)}
        res = solve_affine(A, b)
        if not check_solution(A, b, res):
            raise AssertionError("affine solve failed verification")
        return res, list(keep) + [len(labels) - 1]

    res, row_ids = solve(range(len(cod.basis)))
    if isinstance(res, AffineSolution):
        theta = dom.derivation(res.particular, "theta")
        if not differential_D(m, theta).is_zero() or theta[v] != 1:
            raise AssertionError("witness failed re-verification")
        if m.complete_through is not None:
            return GottliebCertificate(
                v, "inconclusive", cap, theta,
                note=f"witness found on generators through degree {m.complete_through}; "
                "higher generators could obstruct its extension",
            )
        return GottliebCertificate(v, "witness", cap, theta)
    note = ""
    if m.complete_through is not None:
        # rows of D(theta)(g) with |g| - n <= c involve only values theta(h) of degree <= c,
        # which no missing generator can enter; only those rows give a conclusive certificate
        c = m.complete_through
        safe = [i for i, (g, _mo) in enumerate(cod.basis) if g.degree - n <= c]
        res_safe, safe_ids = solve(safe)
        if isinstance(res_safe, AffineSolution):
            return GottliebCertificate(
                v, "inconclusive", cap, None,
                note=f"obstruction needs generators of degree > {c + n}, where missing generators "
                "could add unknowns",
            )
        res, row_ids = res_safe, safe_ids
        note = "infeasible already on the known generators, hence for every completion"
    cert = [(labels[row_ids[i]], c) for i, c in sorted(res.certificate.items())]
    return GottliebCertificate(v, "infeasible", cap, None, cert, note)


def halperin_split(m: SullivanModel, v: Generator, theta: Optional[Derivation] = None, cap: Optional[int] = None):
    """Split off (A(v), 0) along a Gottlieb cocycle generator v; returns the basis change report."""
    if v not in m.generators:
        raise PreconditionError(f"{v.name} is not a generator of the model")
    if m.dg(v):
        raise PreconditionError(f"d{v.name} = {m.dg(v)}; splitting needs a cocycle generator")
    if theta is None:
        cert = find_gottlieb(m, v)
        if cert.witness is None:
            raise PreconditionError(f"{v.name} is not a Gottlieb element ({cert.verdict})")
        theta = cert.witness
    rep = odd_change(m, v, theta, cap) if v.odd else even_change(m, v, theta, cap)
    rep.add("split", f"{v.name} occurs in no differential", is_terminal(rep.new_model, v))
    rep.add("split", f"d'({v.name}) = 0", not rep.new_model.dg(v))
    return rep


def monomial_factors(chi: Element) -> List[Tuple[Generator, int]]:
    if len(chi.terms) != 1:
        raise PreconditionError(f"{chi} is not a single monomial")
    (mono,) = chi.terms
    return list(mono)


def lemma_w1_check(m: SullivanModel, x: Generator) -> bool:
    """For dx = w1*...*wk a monomial (factors in increasing degree), d(w1) = 0."""
    factors = monomial_factors(m.dg(x))
    if not factors:
        raise PreconditionError(f"d{x.name} is a scalar")
    w1 = factors[0][0]
    return not m.dg(w1)


@dataclass
class TwoNVerdict:
    status: str  # "satisfied" | "violation" | "inconclusive"
    x_degree: int
    N: Optional[int]
    N_is_lower_bound: bool
    detail: str = ""

    def render(self) -> str:
        bound = f"N >= {self.N}" if self.N_is_lower_bound else f"N = {self.N}"
        return f"2N check: |x| = {self.x_degree}, {bound}: {self.status}" + (f" ({self.detail})" if self.detail else "")


def check_2N_monomial(
    m: SullivanModel,
    x: Generator,
    N: Optional[int] = None,
    cap: Optional[int] = None,
    witness: Optional[Derivation] = None,
) -> TwoNVerdict:
    """|x| < 2N for an odd Gottlieb generator x with monomial dx."""
    if not x.odd:
        raise PreconditionError(f"{x.name} has even degree")
    monomial_factors(m.dg(x))
    if witness is None:
        cert = find_gottlieb(m, x)
        if cert.verdict == "infeasible":
            raise PreconditionError(f"{x.name} is not a Gottlieb element")
        if cert.verdict != "witness":
            return TwoNVerdict("inconclusive", x.degree, N, N is None, "Gottlieb property not certified")
        witness = cert.witness
    elif not (differential_D(m, witness).is_zero() and witness[x] == 1):
        raise PreconditionError("supplied derivation is not a cycle with theta(x) = 1")
    if N is not None:
        ok = x.degree < 2 * N
        return TwoNVerdict("satisfied" if ok else "violation", x.degree, N, False)
    if cap is None:
        cap = m.top_degree + 6
    low = cohomology(m, cap).top_nonzero() or 0
    if x.degree < 2 * low:
        return TwoNVerdict("satisfied", x.degree, low, True, f"cohomology computed through degree {cap}")
    return TwoNVerdict("inconclusive", x.degree, low, True, f"top degree not certified beyond {cap}")

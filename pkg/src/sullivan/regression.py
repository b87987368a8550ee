"""
Built-in regression suite: fixed models plus seeded planted instances.

Output is a deterministic list of lines (no timings, no hash-ordered data).
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from .algebra import Element, Generator, parse_expression
from .basis_change import combined_change, even_change, is_terminal, odd_change
from .derivation_homology import bracket_on_homology, compute_homology
from .derivations import Derivation, differential_D
from .gottlieb import check_2N_monomial, find_gottlieb, halperin_split, lemma_w1_check
from .model import SullivanModel, attach_square_killers, cohomology, validate_model
from .planted import (
    monomial_gottlieb_instance,
    odd_even_base,
    planted_both_parities,
    planted_gottlieb,
)

SEEDS = 10


def worked_model() -> Tuple[SullivanModel, Derivation]:
    """u2, v2, x3, z3, y6 with dx = uv, dz = v^2, dy = -uvx + u^2 z; theta = (x,1) + (y,x)."""
    return odd_even_base(1, 1)


def s2_model() -> SullivanModel:
    e, f = Generator("e", 2), Generator("f", 3)
    return SullivanModel([e, f], {f: Element.gen(e, 2)})


def nonterminal_model() -> Tuple[SullivanModel, Derivation]:
    """g2, a2, c3, b5 with dc = a^2, db = g a^2: g is Gottlieb via (g,1) + (b,c) but occurs in db."""
    g, a, c, b = Generator("g", 2), Generator("a", 2), Generator("c", 3), Generator("b", 5)
    gens = [g, a, c, b]
    P = lambda s: parse_expression(s, gens)
    m = SullivanModel(gens, {c: P("a^2"), b: P("g*a^2")})
    return m, Derivation(2, {g: Element.one(), b: P("c")})


def run_regression() -> Tuple[List[str], bool]:
    lines: List[str] = []
    ok_all = True

    def check(label: str, ok: bool):
        nonlocal ok_all
        ok_all &= bool(ok)
        lines.append(f"{'PASS' if ok else 'FAIL'} {label}")

    m, theta = worked_model()
    x, y = m.gen("x"), m.gen("y")
    lines.append("== worked example")
    check("model validates", not validate_model(m))
    check("D(theta) = 0", differential_D(m, theta).is_zero())
    check("theta(dy) = -uv", theta(m.dg(y)) == parse_expression("-u*v", m.generators))
    check("x is Gottlieb (witness found)", find_gottlieb(m, x).verdict == "witness")
    check("y is terminal", is_terminal(m, y))
    check("x is not terminal", not is_terminal(m, x))
    check("y is Gottlieb (witness found)", find_gottlieb(m, y).verdict == "witness")
    for g in ("u", "v", "z"):
        check(f"{g} is not Gottlieb (certificate)", find_gottlieb(m, m.gen(g)).verdict == "infeasible")
    check("dim H^4 = 1", cohomology(m, 4).dims()[4] == 1)
    check("odd change at x verifies", odd_change(m, x, theta, 10).passed)
    check("first factor of dx is a cocycle", lemma_w1_check(m, x))
    check("|x| < 2N", check_2N_monomial(m, x, cap=10, witness=theta).status == "satisfied")
    hom = compute_homology(m, 3, 3)
    check("theta is a non-bounding cycle", bool(hom[3].classify(theta)) and any(hom[3].classify(theta)))

    lines.append("== two-sphere model")
    s2 = s2_model()
    e, f = s2.gen("e"), s2.gen("f")
    check("cohomology through 6 is Q in degrees 0, 2", cohomology(s2, 6).dims() == {0: 1, 1: 0, 2: 1, 3: 0, 4: 0, 5: 0, 6: 0})
    check("f is Gottlieb", find_gottlieb(s2, f).verdict == "witness")
    check("e is not Gottlieb", find_gottlieb(s2, e).verdict == "infeasible")
    h = compute_homology(s2, 1, 4)
    check("derivation homology dims (0, 0, 1, 0)", [h[n].dim for n in range(1, 5)] == [0, 0, 1, 0])
    rep = h[3].representatives[0]
    check("representative is (f,1)", rep == Derivation.dual(f, 1))
    check("[(f,1), (f,1)] = 0 in homology", not any(bracket_on_homology(h, rep, rep)))
    z = Generator("z", 2)
    ext = attach_square_killers(SullivanModel([z]), [z])
    check("square killer on A(z2) gives the two-sphere model", cohomology(ext, 8).dims() == cohomology(s2, 8).dims() and not validate_model(ext))

    lines.append("== non-terminal even Gottlieb generator")
    nm, nt = nonterminal_model()
    g = nm.gen("g")
    check("model validates", not validate_model(nm))
    check("(g,1) + (b,c) is a cycle with value 1 on g", differential_D(nm, nt).is_zero() and nt[g] == 1)
    check("g occurs in db", not is_terminal(nm, g))
    check("after the even change g is terminal", even_change(nm, g, nt).passed)

    lines.append("== two-parity example")
    tm, ta = odd_even_base(1, 1, Fraction(1, 2))
    check("combined change verifies", combined_change(tm, None, tm.gen("y"), ta, 12).passed)

    lines.append(f"== planted instances, seeds 0..{SEEDS - 1}")
    counts = {"odd": 0, "even": 0, "split": 0, "combined": 0, "monomial": 0}
    original_terminal = 0
    for s in range(SEEDS):
        p = planted_gottlieb(s, "odd")
        counts["odd"] += odd_change(p.model, p.generator, p.theta).passed
        q = planted_gottlieb(1000 + s, "even")
        counts["even"] += even_change(q.model, q.generator, q.theta).passed
        original_terminal += is_terminal(q.model, q.generator)
        r = planted_gottlieb(2000 + s, "odd" if s % 2 else "even", keep_cocycle=True)
        counts["split"] += halperin_split(r.model, r.generator, r.theta).passed
        b = planted_both_parities(3000 + s)
        counts["combined"] += combined_change(b.model, b.x, b.y0, b.theta_a).passed
        mi = monomial_gottlieb_instance(4000 + s)
        counts["monomial"] += lemma_w1_check(mi.model, mi.x) and check_2N_monomial(mi.model, mi.x, witness=mi.theta, cap=12).status == "satisfied"
    for k, v in counts.items():
        check(f"{k}: {v}/{SEEDS}", v == SEEDS)
    lines.append(f"info: even generator terminal in the scrambled basis: {original_terminal}/{SEEDS}")
    lines.append(f"summary: {sum(l.startswith('FAIL') for l in lines)} failed of {sum(l.startswith(('PASS', 'FAIL')) for l in lines)}")
    return lines, ok_all

from fractions import Fraction

import pytest

from sullivan.algebra import Element, Generator, parse_expression
from sullivan.basis_change import choose_x, combined_change, even_change, indecomposable_extraction, is_terminal, odd_change
from sullivan.derivations import Derivation, PreconditionError, bracket
from sullivan.model import SullivanModel
from sullivan.planted import odd_even_base, planted_both_parities, planted_gottlieb
from sullivan.regression import nonterminal_model


def test_odd_change_on_worked_example():
    m, theta = odd_even_base()
    rep = odd_change(m, m.gen("x"), theta, cap=12)
    assert rep.passed, rep.render()
    # theta = x*theta1 with theta0 = 0, so phi is the identity
    assert rep.phi.is_identity()
    lam = rep.components["lambda"]
    assert lam == Derivation(6, {m.gen("y"): Element.one()})
    assert lam == bracket(theta, theta).scale(Fraction(1, 2)).restrict([g for g in m.generators if g.name != "x"])


@pytest.mark.parametrize("seed", range(10))
def test_odd_change_on_planted(seed):
    p = planted_gottlieb(seed, "odd")
    rep = odd_change(p.model, p.generator, p.theta, cap=p.model.top_degree + 1)
    assert rep.passed, rep.render()
    labels = {c.section for c in rep.checks}
    assert {"a", "b", "c", "splitting", "follow-up", "conjugation", "model"} <= labels


@pytest.mark.parametrize("seed", range(10))
def test_even_change_on_planted(seed):
    p = planted_gottlieb(1000 + seed, "even")
    rep = even_change(p.model, p.generator, p.theta, cap=p.model.top_degree + 1)
    assert rep.passed, rep.render()
    assert is_terminal(rep.new_model, p.generator)


def test_even_change_makes_generator_terminal():
    m, theta = nonterminal_model()
    g = m.gen("g")
    rep = even_change(m, g, theta)
    assert rep.passed
    assert str(rep.phi[m.gen("b")]) == "-g*c + b"
    assert rep.new_model.dg(m.gen("b")).is_zero()
    assert not is_terminal(m, g) and is_terminal(rep.new_model, g)


def test_series_replaces_exponential_when_theta_hits_y():
    y, w = Generator("y", 2), Generator("w", 6)
    m = SullivanModel([y, w])
    theta = Derivation(2, {y: Element.one(), w: Element.gen(y, 2)})
    rep = even_change(m, y, theta)
    assert rep.passed, rep.render()
    assert "series" in rep.construction and rep.notes
    # w - y*y^2 + y^2*(2y)/2 - y^3*2/6, while exp(psi)(w) = w - y^3
    assert rep.phi[w] == parse_expression("w - 1/3*y^3", [y, w])
    assert rep.theta_new[w].is_zero()


def test_odd_change_preconditions():
    m, theta = odd_even_base()
    with pytest.raises(PreconditionError):
        odd_change(m, m.gen("x"), Derivation.dual(m.gen("x"), 1))  # not a cycle
    with pytest.raises(PreconditionError):
        odd_change(m, m.gen("y"), Derivation.dual(m.gen("y"), 1))  # even
    with pytest.raises(PreconditionError):
        even_change(m, m.gen("x"), theta)


def test_combined_change_on_rescaled_example():
    m, theta_a = odd_even_base(1, 1, Fraction(1, 2))
    y0 = m.gen("y")
    assert bracket(theta_a, theta_a)[y0] == 1
    x, lin = choose_x(m, theta_a, y0)
    assert x == m.gen("x") and lin == Element.gen(x)
    rep = combined_change(m, None, y0, theta_a, cap=12)
    assert rep.passed, rep.render()
    assert any(c.section.startswith("odd stage") for c in rep.checks)


def test_combined_change_rejects_unscaled_example():
    m, theta = odd_even_base()
    with pytest.raises(PreconditionError):
        combined_change(m, None, m.gen("y"), theta)  # theta_b(y) = 2


@pytest.mark.parametrize("seed", range(8))
def test_combined_change_on_planted(seed):
    inst = planted_both_parities(seed)
    rep = combined_change(inst.model, inst.x, inst.y0, inst.theta_a, cap=inst.model.top_degree)
    assert rep.passed, rep.render()


def test_indecomposable_extraction():
    gens = [Generator("u", 2), Generator("v", 2), Generator("s", 4)]
    lin, dec = indecomposable_extraction(parse_expression("s - u*v + 2*u^2", gens))
    assert str(lin) == "s" and str(dec) == "-u*v + 2*u^2"


def test_report_render():
    m, theta = odd_even_base()
    text = odd_change(m, m.gen("x"), theta).render()
    assert text.splitlines()[0] == "basis-change odd" and text.endswith("verdict: PASS")

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from sullivan.algebra import Element, Generator, parse_expression
from sullivan.derivations import Derivation, PreconditionError, differential_D
from sullivan.basis_change import is_terminal
from sullivan.gottlieb import check_2N_monomial, find_gottlieb, halperin_split, lemma_w1_check, monomial_factors
from sullivan.model import SullivanModel, cohomology_dims
from sullivan.planted import monomial_gottlieb_instance, odd_even_base, planted_gottlieb, random_minimal_model
from sullivan.regression import nonterminal_model, s2_model


def test_worked_example_verdicts():
    m, theta = odd_even_base()
    cx = find_gottlieb(m, m.gen("x"))
    assert cx.verdict == "witness" and cx.witness == theta
    cy = find_gottlieb(m, m.gen("y"))
    assert cy.verdict == "witness" and cy.witness == Derivation.dual(m.gen("y"), 1)
    for name in "uvz":
        c = find_gottlieb(m, m.gen(name))
        assert c.verdict == "infeasible" and c.certificate and c.is_gottlieb is False


def test_two_sphere_certificate():
    m = s2_model()
    e, f = m.gen("e"), m.gen("f")
    ce = find_gottlieb(m, e)
    assert ce.verdict == "infeasible"
    assert ce.certificate == [("D(theta)(f) at e", Fraction(1, 2)), ("theta(e) = 1", Fraction(1))]
    assert find_gottlieb(m, f).witness == Derivation.dual(f, 1)


def test_cap_below_top_degree_rejected():
    m, _ = odd_even_base()
    with pytest.raises(ValueError):
        find_gottlieb(m, m.gen("x"), cap=5)


def test_truncated_model_verdicts():
    m, _ = odd_even_base()
    t = m.replace(generators=[g for g in m.generators if g.degree <= 3], differential={g: m.dg(g) for g in m.generators if g.degree <= 3}, complete_through=5)
    # (x,1) is a cycle on the degree <= 3 generators, but the missing y could obstruct it
    c = find_gottlieb(t, t.gen("x"))
    assert c.verdict == "inconclusive" and c.witness is not None
    assert find_gottlieb(t, t.gen("u")).verdict == "infeasible"


def test_truncated_obstruction_above_the_window_is_inconclusive():
    e, b = Generator("e", 2), Generator("b", 7)
    m = SullivanModel([e, b], {b: Element.gen(e, 4)})
    assert find_gottlieb(m, e).verdict == "infeasible"
    # theta(b) has degree 5 > 4, where a missing generator could supply a value
    t = m.replace(complete_through=4)
    assert find_gottlieb(t, e).verdict == "inconclusive"
    assert find_gottlieb(m.replace(complete_through=5), e).verdict == "infeasible"


def test_render_lists_certificate_rows():
    m = s2_model()
    text = find_gottlieb(m, m.gen("e")).render()
    assert "verdict: infeasible" in text and "1/2 * [D(theta)(f) at e]" in text


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 100_000))
def test_detection_agrees_with_rank_oracle(seed):
    rng = random.Random(seed)
    m = random_minimal_model(rng, rng.randint(1, 5), 9)
    M, gens = oracle.Model.from_sullivan(m)
    for i, g in enumerate(gens):
        c = find_gottlieb(m, g)
        assert (c.verdict == "witness") == oracle.is_gottlieb(M, i)
        if c.witness is not None:
            assert differential_D(m, c.witness).is_zero() and c.witness[g] == 1


@pytest.mark.parametrize("seed", range(6))
def test_planted_generator_is_detected(seed):
    p = planted_gottlieb(seed, "odd" if seed % 2 else "even")
    assert find_gottlieb(p.model, p.generator).verdict == "witness"


@pytest.mark.parametrize("seed", range(10))
def test_split_removes_cocycle_generator(seed):
    p = planted_gottlieb(500 + seed, "odd" if seed % 2 else "even", keep_cocycle=True)
    rep = halperin_split(p.model, p.generator, cap=p.model.top_degree + 2)
    assert rep.passed, rep.render()
    new = rep.new_model
    assert not any(new.dg(w).contains(p.generator) for w in new.generators)
    assert cohomology_dims(new, 12) == cohomology_dims(p.model, 12)


def test_split_preconditions():
    m, _ = odd_even_base()
    with pytest.raises(PreconditionError):
        halperin_split(m, m.gen("x"))  # dx != 0
    with pytest.raises(PreconditionError):
        halperin_split(m, m.gen("u"))  # not Gottlieb


def test_even_gottlieb_need_not_be_terminal():
    m, theta = nonterminal_model()
    g = m.gen("g")
    assert differential_D(m, theta).is_zero() and theta[g] == 1
    assert find_gottlieb(m, g).verdict == "witness"
    assert not is_terminal(m, g)


def test_first_factor_cocycle_and_degree_bound_on_worked_example():
    m, theta = odd_even_base()
    x = m.gen("x")
    assert monomial_factors(m.dg(x)) == [(m.gen("u"), 1), (m.gen("v"), 1)]
    assert lemma_w1_check(m, x)
    v = check_2N_monomial(m, x)
    assert v.status == "satisfied" and v.N_is_lower_bound and v.N >= 2
    assert check_2N_monomial(m, x, N=1).status == "violation"
    assert check_2N_monomial(m, x, N=2).status == "satisfied"
    with pytest.raises(PreconditionError):
        check_2N_monomial(m, m.gen("y"))  # even
    with pytest.raises(PreconditionError):
        check_2N_monomial(m, m.gen("z"), witness=theta)  # not a witness for z


def test_first_factor_check_needs_monomial():
    m, _ = odd_even_base()
    with pytest.raises(PreconditionError):
        lemma_w1_check(m, m.gen("y"))


@pytest.mark.parametrize("seed", range(8))
def test_monomial_family(seed):
    inst = monomial_gottlieb_instance(seed)
    assert lemma_w1_check(inst.model, inst.x)
    assert check_2N_monomial(inst.model, inst.x, witness=inst.theta).status == "satisfied"

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from sullivan.algebra import Element, Generator
from sullivan.derivation_homology import (
    WindowError,
    bracket_on_homology,
    class_expression,
    compute_homology,
    partner_check,
    realization_probe,
    solve_boundary,
    zero_divisor_check,
)
from sullivan.derivations import Derivation, PreconditionError, differential_D
from sullivan.model import SullivanModel
from sullivan.planted import odd_even_base, random_minimal_model
from sullivan.regression import s2_model


def test_two_sphere_homology():
    m = s2_model()
    e, f = m.gen("e"), m.gen("f")
    rep = compute_homology(m, 1, 4)
    assert rep.dims() == {1: 0, 2: 0, 3: 1, 4: 0}
    assert rep[3].representatives == [Derivation.dual(f, 1)]
    assert differential_D(m, Derivation.dual(e, 1)) == Derivation(1, {f: Element.gen(e).scale(-2)})
    M, _ = oracle.Model.from_sullivan(m)
    assert oracle.derivation_homology_dims(M, 1, 4) == rep.dims()


def test_two_sphere_bracket_vanishes():
    m = s2_model()
    rep = compute_homology(m, 1, 6)
    r = rep[3].representatives[0]
    assert bracket_on_homology(rep, r, r) == []  # H_6 = 0
    assert class_expression([], 6) == "0"


def test_worked_example_homology_against_oracle():
    m, theta = odd_even_base()
    rep = compute_homology(m, 1, 6)
    assert [rep[n].dim for n in range(1, 7)] == [2, 0, 1, 2, 0, 1]
    M, _ = oracle.Model.from_sullivan(m)
    assert oracle.derivation_homology_dims(M, 1, 6) == rep.dims()
    coords = rep[3].classify(theta)
    assert coords is not None and any(coords)
    assert not rep[3].is_boundary(theta)


def test_boundaries_classify_to_zero():
    m, _ = odd_even_base()
    rep = compute_homology(m, 1, 4)
    eta = Derivation(2, {m.gen("u"): Element.one()})
    b = differential_D(m, eta)
    assert rep[1].is_boundary(b)
    assert not any(rep[1].classify(b))
    assert rep[1].classify(Derivation.dual(m.gen("x"), Element.gen(m.gen("u")))) is None  # not a cycle


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 100_000))
def test_random_models_match_dense_oracle(seed):
    rng = random.Random(seed)
    m = random_minimal_model(rng, rng.randint(1, 5), 8)
    hi = min(m.top_degree, 8)
    rep = compute_homology(m, 1, hi)
    M, _ = oracle.Model.from_sullivan(m)
    assert oracle.derivation_homology_dims(M, 1, hi) == rep.dims()


def test_thread_count_does_not_change_results(monkeypatch):
    m, _ = odd_even_base()
    monkeypatch.setenv("SULLIVAN_THREADS", "1")
    one = compute_homology(m, 1, 6).render()
    monkeypatch.setenv("SULLIVAN_THREADS", "4")
    assert compute_homology(m, 1, 6).render() == one


def test_truncated_models_are_refused():
    m = s2_model().replace(complete_through=3)
    with pytest.raises(WindowError):
        compute_homology(m, 1, 3)


def test_degree_range_checked():
    with pytest.raises(ValueError):
        compute_homology(s2_model(), 0, 3)


def test_partner_with_odd_eta():
    a, c, z = Generator("a", 2), Generator("c", 3), Generator("z", 4)
    m = SullivanModel([a, c, z], {z: Element.gen(a) * Element.gen(c)})
    eta = Derivation(3, {c: Element.one()})
    assert differential_D(m, eta) == Derivation(2, {z: Element.gen(a)})
    pc = partner_check(m, z, a, eta)
    assert pc.partner == Element.gen(c) and pc.value == 1 and pc.expected == 1 and pc.ok


def test_partner_with_even_eta():
    a, b, z = Generator("a", 2), Generator("b", 4), Generator("z", 5)
    m = SullivanModel([a, b, z], {z: Element.gen(a) * Element.gen(b)})
    eta = solve_boundary(m, Derivation(3, {z: Element.gen(a)}))
    pc = partner_check(m, z, a, eta)
    assert pc.value == -1 and pc.expected == -1 and pc.ok


def test_partner_with_equal_degrees_only_needs_nonzero():
    m = s2_model()
    e, f = m.gen("e"), m.gen("f")
    eta = solve_boundary(m, Derivation(1, {f: Element.gen(e)}))
    assert eta == Derivation(2, {e: Element.scalar(Fraction(-1, 2))})
    pc = partner_check(m, f, e, eta)
    assert pc.expected is None and pc.ok
    assert solve_boundary(m, Derivation.dual(f, 1)) is None


def test_probe_fails_on_two_sphere():
    res = realization_probe(s2_model(), 1)
    assert not res.passed
    assert len(res.failed()) == 4


def test_probe_on_two_parity_example():
    m, _ = odd_even_base(1, 1, Fraction(1, 2))
    res = realization_probe(m, 2)
    assert res.failed() == ["(iii) H vanishes in the other window degrees"]
    assert res.combined is not None and res.combined.passed
    assert res.obstructions == [
        "(y, u) is a non-bounding cycle in degree 4",
        "(y, v) is a non-bounding cycle in degree 4",
    ]


def test_probe_rescales_top_generator():
    m, _ = odd_even_base()
    res = realization_probe(m, 2)
    assert any(line.startswith("rescaled y") for line in res.lines)
    assert res.combined is not None and res.combined.passed


def test_zero_divisor_witness():
    y, g = Generator("y", 2), Generator("g", 3)
    res = zero_divisor_check(SullivanModel([y, g]), y)
    assert res.witness == Derivation.dual(g, 1) and res.witness_degree == 3


def test_zero_divisor_absent_for_single_generator():
    y = Generator("y", 2)
    res = zero_divisor_check(SullivanModel([y]), y)
    assert res.witness is None and res.bound_ok


def test_zero_divisor_preconditions():
    m = s2_model()
    with pytest.raises(PreconditionError):
        zero_divisor_check(m, m.gen("f"))
    with pytest.raises(PreconditionError):
        zero_divisor_check(m, m.gen("e"))  # occurs in df


def test_zero_differential_homology_is_whole_derivation_space():
    u = Generator("u", 2)
    m = SullivanModel([u])
    rep = compute_homology(m, 1, 4)
    assert rep.dims() == {1: 0, 2: 1, 3: 0, 4: 0}
    assert all(rep[n].dim_boundaries == 0 for n in range(1, 5))

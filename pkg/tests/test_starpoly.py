import logging
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfamily.numrep import (
    NumericRep,
    evaluate_poly,
    oracle_agreement,
    oracle_reps,
    rep_two_projection_path,
    sample_magic_rep,
    sample_rep,
)
from qfamily.starpoly import (
    GaussianRational,
    Gen,
    Preset,
    Presentation,
    StarPoly,
    Verdict,
    eliminate,
    eq_mod,
    normal_form,
    poly_adjoint,
    poly_mul,
    reduce_word,
)

from strategies import coeffs, normal_form_random_order, polys, presentations, random_ideal_element, relation_polys

P22 = Presentation(2, 2)


def g(x, k, pres=P22):
    return StarPoly.gen(pres, x, k)


def reps_for(pres, dims=(2, 3, 4), seeds=range(3)):
    if pres.preset is Preset.MAGIC_SQUARE:
        return [sample_magic_rep(pres.n, d * pres.n, s) for d in dims for s in seeds]
    return [sample_rep(pres.m, pres.n, max(d, pres.n), s) for d in dims for s in seeds]


def test_gaussian_product_matches_complex_arithmetic():
    a = StarPoly.scalar(P22, GaussianRational(2, 1))
    b = StarPoly.scalar(P22, GaussianRational(1, -1))
    prod = poly_mul(a, b)
    assert complex(prod.terms[()]) == (2 + 1j) * (1 - 1j)
    assert prod.render() == "(3-i)"


def test_free_product_concatenates_words():
    p = poly_mul(g(0, 0), g(1, 0))
    assert list(p.terms) == [(Gen(0, 0), Gen(1, 0))]


@pytest.mark.parametrize(
    "value, text",
    [
        (GaussianRational(3), "3"),
        (GaussianRational(Fraction(-1, 2)), "-1/2"),
        (GaussianRational(0, 2), "2i"),
        (GaussianRational(0, -1), "-i"),
        (GaussianRational(3, -1), "(3-i)"),
        (GaussianRational(0), "0"),
    ],
)
def test_coefficient_rendering(value, text):
    assert value.render() == text


def test_polynomial_rendering():
    p = g(0, 0) - g(0, 1).scale(2) + StarPoly.one(P22)
    assert p.render() == "1 + c[0,0] - 2·c[0,1]"
    assert StarPoly.zero(P22).render() == "0"
    assert (g(0, 0) * g(1, 1)).render() == "c[0,0]·c[1,1]"


def test_row_orthogonal_product_is_zero():
    assert normal_form(g(0, 0) * g(0, 1)).is_zero()
    # independent numeric confirmation
    for rep in reps_for(P22):
        assert np.linalg.norm(rep.gen(0, 0) @ rep.gen(0, 1)) < 1e-12


def test_idempotent_collapse():
    assert normal_form(g(0, 0) * g(0, 0)) == g(0, 0)


def test_different_rows_do_not_commute():
    a, b = g(0, 0) * g(1, 1), g(1, 1) * g(0, 0)
    assert eq_mod(a, b) is Verdict.NOT_EQUAL
    rep = rep_two_projection_path(np.pi / 4)
    assert np.linalg.norm(evaluate_poly(a, rep) - evaluate_poly(b, rep)) > 0.1


def test_row_sum_is_one():
    assert eq_mod(g(0, 0) + g(0, 1), StarPoly.one(P22)) is Verdict.EQUAL


def test_magic_equality_is_proved_but_inequality_is_not():
    M = Presentation(2, 2, Preset.MAGIC_SQUARE)
    assert eq_mod(g(0, 0, M) * g(1, 0, M), StarPoly.zero(M)) is Verdict.EQUAL
    # needs a column pass after the row pass
    assert eq_mod(g(0, 0, M), g(1, 1, M)) is Verdict.EQUAL
    assert eq_mod(g(0, 0, M), g(0, 1, M)) is Verdict.INCONCLUSIVE
    M3 = Presentation(3, 3, Preset.MAGIC_SQUARE)
    # true (3x3 magic unitaries commute) but out of reach of elimination
    assert eq_mod(g(0, 0, M3) * g(1, 1, M3), g(1, 1, M3) * g(0, 0, M3)) is Verdict.INCONCLUSIVE


def test_magic_requires_square():
    with pytest.raises(ValueError, match="m == n"):
        Presentation(2, 3, Preset.MAGIC_SQUARE)


def test_mismatched_presentations_rejected():
    with pytest.raises(ValueError):
        eq_mod(g(0, 0), StarPoly.gen(Presentation(2, 3), 0, 0))


def test_generator_bounds_checked():
    with pytest.raises(ValueError, match="outside"):
        StarPoly.gen(P22, 2, 0)


@given(polys())
def test_adjoint_is_an_involution(p):
    assert poly_adjoint(poly_adjoint(p)) == p


@given(st.data())
def test_adjoint_reverses_products(data):
    pres = data.draw(presentations())
    a, b = data.draw(polys(pres)), data.draw(polys(pres))
    assert poly_adjoint(a * b) == poly_adjoint(b) * poly_adjoint(a)


@given(polys())
def test_normal_form_idempotent(p):
    nf = normal_form(p)
    assert normal_form(nf) == nf


@settings(max_examples=200)
@given(polys(), st.randoms(use_true_random=False))
def test_normal_form_independent_of_rewrite_order(p, rnd):
    assert normal_form_random_order(p, rnd) == normal_form(p)


@given(st.data())
def test_eq_mod_is_an_equivalence(data):
    pres = data.draw(presentations(preset=Preset.ALL_MAPS))
    a, b, c = (data.draw(polys(pres)) for _ in range(3))
    assert eq_mod(a, a) is Verdict.EQUAL
    assert eq_mod(a, b) is eq_mod(b, a)
    if eq_mod(a, b) is Verdict.EQUAL and eq_mod(b, c) is Verdict.EQUAL:
        assert eq_mod(a, c) is Verdict.EQUAL


@given(st.data())
def test_eq_mod_congruence(data):
    pres = data.draw(presentations())
    a, b, c = (data.draw(polys(pres, max_len=3)) for _ in range(3))
    if eq_mod(a, b) is Verdict.EQUAL:
        assert eq_mod(a * c, b * c) is Verdict.EQUAL
        assert eq_mod(c * a, c * b) is Verdict.EQUAL
        assert eq_mod(a.adjoint(), b.adjoint()) is Verdict.EQUAL


@pytest.mark.parametrize("preset", list(Preset))
def test_relations_are_equal_to_zero(preset):
    pres = Presentation(3, 3, preset)
    for rel in relation_polys(pres):
        assert eq_mod(rel, StarPoly.zero(pres)) is Verdict.EQUAL


@settings(max_examples=80)
@given(st.data())
def test_eq_mod_sound_against_representations(data):
    pres = data.draw(presentations(max_m=2, max_n=3))
    a, b = data.draw(polys(pres, max_len=3)), data.draw(polys(pres, max_len=3))
    verdict = eq_mod(a, b)
    outcome = oracle_agreement(a, b, verdict, oracle_reps(pres.m, pres.n, pres.preset))
    assert outcome != "disagree"
    # with these seeds every distinct pair drawn here is separated
    assert outcome == "agree"


def test_unseparated_is_logged(caplog):
    # a rank-one rep in which both rows coincide cannot tell c[0,0] from c[1,0]
    pres = Presentation(2, 2)
    mats = np.zeros((2, 2, 1, 1), dtype=complex)
    mats[:, 0] = 1.0
    rep = NumericRep(2, 2, 1, mats)
    with caplog.at_level(logging.WARNING, logger="qfamily.numrep"):
        assert oracle_agreement(g(0, 0), g(1, 0), Verdict.NOT_EQUAL, [rep]) == "unseparated"
    assert "unseparated" in caplog.text
    assert oracle_agreement(g(0, 0), g(0, 0), Verdict.EQUAL, [rep]) == "agree"
    assert oracle_agreement(g(0, 0), g(0, 1), Verdict.EQUAL, [rep]) == "disagree"


def test_ideal_elements_vanish():
    rng = random.Random(11)
    pres = Presentation(3, 3)
    for _ in range(200):
        assert eq_mod(random_ideal_element(pres, rng), StarPoly.zero(pres)) is Verdict.EQUAL


def test_magic_ideal_elements_never_unequal():
    rng = random.Random(12)
    pres = Presentation(3, 3, Preset.MAGIC_SQUARE)
    verdicts = [eq_mod(random_ideal_element(pres, rng), StarPoly.zero(pres)) for _ in range(200)]
    assert Verdict.NOT_EQUAL not in verdicts
    assert verdicts.count(Verdict.EQUAL) >= 180
    two = Presentation(2, 2, Preset.MAGIC_SQUARE)
    assert all(eq_mod(random_ideal_element(two, rng), StarPoly.zero(two)) is Verdict.EQUAL for _ in range(100))


def test_eliminate_removes_last_column():
    p = g(0, 1) * g(1, 1)
    e = eliminate(p)
    assert all(gen.k != 1 for w in e.terms for gen in w)
    assert e.render() == "1 - c[0,0] - c[1,0] + c[0,0]·c[1,0]"


def test_reduce_word_examples():
    w = (Gen(0, 0), Gen(0, 0), Gen(1, 1), Gen(1, 1), Gen(0, 0))
    assert reduce_word(w, Preset.ALL_MAPS) == (Gen(0, 0), Gen(1, 1), Gen(0, 0))
    assert reduce_word((Gen(0, 0), Gen(1, 0)), Preset.MAGIC_SQUARE) is None
    assert reduce_word((), Preset.ALL_MAPS) == ()


@given(coeffs, coeffs)
def test_coefficients_form_a_field(a, b):
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
    assert (a + b) - b == a
    if b:
        assert (a / b) * b == a

import os
import sys

import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from config.settings import PRODUCT_FORM_MAX_N
from services.dyadic import ONE, ZERO, Dyadic
from services.errors import WordError
from services.plmap import PLMap
from services.qembed import d, standard_chain
from services.tbar import IDENTITY, Z, compose, invert, power
from services.words import (
    Atom, Convention, Word, calibrate_convention, calibration_report, commutator, conjugate,
    evaluate, multiply, named, named_report, parse, parse_runs, power_word, relator_report, s_expr, s_word,
    t_clauses, t_expr, t_word, tn_report,
)

D = Dyadic.parse


def test_parse_and_reduce():
    assert parse("a A").is_identity()
    assert str(parse("a^-2 B^2")) == "A A B B"
    assert str(parse("b a^2 B")) == "b a a B"
    assert parse("A^-1") == parse("a")
    assert len(parse("  ")) == 0


def test_parse_runs_keeps_exponents():
    assert parse_runs("a^3 b B^2 a^-1") == [("a", 3), ("b", -1), ("a", -1)]
    assert parse_runs("a^5 A^5") == []
    assert parse_runs("b a^2 A^2 b") == [("b", 2)]
    assert parse_runs("a^3000000") == [("a", 3000000)]


def test_evaluate_large_exponents_without_expanding():
    # a^4 = b^3 = z
    assert evaluate("a^3000000") == power(Z, 750000)
    assert evaluate("b^-3000001 a^4000004") == compose(Z, invert(evaluate("b")))
    assert evaluate("a^4000001") == evaluate(parse("a")) * power(Z, 1000000)


@pytest.mark.parametrize("text", ["c", "ab", "a^x", "a^", "1"])
def test_parse_rejects_bad_tokens(text):
    with pytest.raises(WordError):
        parse(text)


def test_word_operations():
    a, b = parse("a"), parse("b")
    assert str(conjugate(a, b)) == "B a b"
    assert len(commutator(a, b)) == 4
    assert multiply(a, ~a).is_identity()
    assert power_word(parse("a b"), -2) == parse("B A B A")
    assert parse("b a a B").to_json() == ["b", "a", "a", "B"]
    assert Word.from_json(["b", "a", "a", "B"]) == parse("b a^2 B")


def test_evaluate_examples():
    assert evaluate("b b b") == Z
    assert evaluate("a a a a B B B") == IDENTITY
    assert evaluate("") == IDENTITY
    assert evaluate("b b b").eval(ZERO) == ONE


def test_relators_hold():
    report = relator_report()
    assert report.passed, report.first_failure()
    names = [c.name for c in report.checks]
    assert "(ba)^5 = b^9" in names and "b^3 = z" in names


def test_relators_hold_in_both_conventions():
    assert relator_report(Convention.FLIPPED).passed


def test_mutated_relator_fails():
    report = relator_report(inject_fault=True)
    assert not report.passed
    assert report.first_failure().name == "a^5 = b^3"


def test_named_elements():
    p, q, r = (evaluate(named(x)) for x in "pqr")
    assert p.eval(D("1/4")) == D("1/4")
    assert p.restrict(ZERO, D("1/2")) == PLMap([("0", "0"), ("1/2", "1/2")])
    assert q.restrict(ZERO, D("3/8")) == PLMap([("0", "0"), ("3/8", "3/4")])
    assert r.eval(D("1/2")) == D("3/8")
    assert named_report().passed
    with pytest.raises(WordError):
        named("s")


def test_flipped_convention_breaks_p():
    p = evaluate(named("p"), Convention.FLIPPED)
    assert p.eval(ZERO) == D("1/4")
    assert not named_report(Convention.FLIPPED).passed


def test_calibration_picks_default():
    assert calibrate_convention() is Convention.DEFAULT
    assert calibration_report().passed


def test_t_words():
    assert str(t_word(3)) == "b b a B A B A b"
    q2 = power_word(named("q"), 2)
    assert t_word(4) == multiply(conjugate(t_word(3), q2), conjugate(named("r"), q2))
    t5 = evaluate(t_expr(5))
    start = d(4) + d(5)
    assert start == D("1/64") + D("1/1024")
    assert t5.restrict(start, ONE) == PLMap([(start, start), (ONE, ONE)])
    with pytest.raises(WordError):
        t_expr(2)


@pytest.mark.parametrize("n", range(3, 9))
def test_t_clauses(n):
    for name, ok, detail in t_clauses(evaluate(t_expr(n)), n):
        assert ok, f"{name}: {detail}"


def test_tn_report():
    assert tn_report(5).passed


def test_s_words():
    assert str(s_word(1)) == "b b b"
    assert str(s_word(2)) == "b a a B"
    assert str(s_word(3)) == "B a b A A b a b A B"
    with pytest.raises(WordError):
        s_expr(PRODUCT_FORM_MAX_N + 1, "product")
    with pytest.raises(WordError):
        s_expr(0)
    with pytest.raises(WordError):
        s_expr(3, "sideways")


@pytest.mark.parametrize("n", [4, 5])
def test_product_and_closed_forms_agree(n):
    assert evaluate(s_expr(n, "product")) == evaluate(s_expr(n, "closed"))


def test_flat_and_structured_evaluation_agree():
    for n in range(1, 5):
        assert evaluate(s_word(n)) == evaluate(s_expr(n))
    assert evaluate(t_word(5)) == evaluate(t_expr(5))


@pytest.fixture(scope="module")
def geometric6():
    return standard_chain(6)


@pytest.mark.parametrize("n", range(1, 7))
def test_words_realize_geometric_chain(n, geometric6):
    assert evaluate(s_expr(n)) == geometric6.element(n)


letters = st.tuples(st.sampled_from("ab"), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=12).map(Word)


@settings(max_examples=300, deadline=None)
@given(words, words)
def test_evaluate_is_a_homomorphism(u, v):
    assert evaluate(u * v) == compose(evaluate(u), evaluate(v))
    assert evaluate(u * v, Convention.FLIPPED) == compose(evaluate(v, Convention.FLIPPED), evaluate(u, Convention.FLIPPED))
    assert evaluate(~u) == invert(evaluate(u))


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_free_reduction_keeps_the_element(u, v):
    # Atom * Atom is evaluated without reducing across the junction
    assert evaluate(Atom(u) * Atom(v)) == evaluate(u * v)
    assert evaluate(Atom(u) * Atom(~u)) == IDENTITY

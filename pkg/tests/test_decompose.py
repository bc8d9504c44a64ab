import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcfl import mu as M
from bcfl.cfgwords import words_up_to
from bcfl.decompose import EMPTY_EXPR, decompose, recompose, scattered_bcfg_to_expr, wellordered_bcfg_to_expr
from bcfl.errors import NormalFormViolation
from bcfl.grammar import parse_grammar
from bcfl.sampler import SampleConfig, sample
from bcfl.transform import finite_fragment, remove_useless
from bcfl.words import is_well_ordered, parse_term, rank
from oracles import random_normal_form_grammar, step_cost, uncovered

SMALL = SampleConfig(max_finite_depth=2, max_lasso_length=2, max_term_size=5)
# compiled expressions spend about two rules per loop step of the source
BIG = SampleConfig(max_finite_depth=8, max_lasso_length=6, max_term_size=8)


def test_cfl_over_linear():
    d = decompose(parse_grammar("rules S -> a S b | X; X -> c X | c; accept buchi {X};"))
    assert d.nodes["S"].kind == "cfl" and d.nodes["S"].refs == ("X",)
    assert set(d.nodes["S"].grammar.alphabet) == {"a", "b", "c", "X"}
    assert d.nodes["X"].kind == "linear" and d.nodes["X"].refs == ()
    assert d.order() == ["X", "S"]


def test_single_linear_node():
    d = decompose(parse_grammar("rules S -> a S b | T; T -> c S; accept buchi {S};"))
    assert d.nodes["S"].is_linear and d.nodes["S"].refs == ()
    assert set(d.nodes["S"].grammar.nonterminals) == {"S", "T"}


def test_chain_of_heights():
    d = decompose(parse_grammar("rules S -> a S | T; T -> T b | U; U -> c; accept buchi {S};"))
    assert d.nodes["S"].refs == ("T",) and d.nodes["T"].refs == ("U",) and d.nodes["U"].refs == ()
    assert d.order() == ["U", "T", "S"]


def test_normal_form_required():
    with pytest.raises(NormalFormViolation):
        decompose(parse_grammar("rules S -> S S | a; accept buchi {S};"))
    with pytest.raises(NormalFormViolation):
        wellordered_bcfg_to_expr(parse_grammar("rules S -> S a; accept buchi {S};"))


def test_extraction_examples():
    assert M.format_expr(wellordered_bcfg_to_expr(parse_grammar("rules S -> a S; accept buchi {S};"))) == "a^w"
    e = wellordered_bcfg_to_expr(parse_grammar("rules S -> a S b | eps; accept buchi {};"))
    assert words_up_to(finite_fragment(M.compile_to_bcfg(e)), 8) == {tuple("a" * n + "b" * n) for n in range(5)}
    empty = parse_grammar("rules S -> a S; accept buchi {};")
    assert wellordered_bcfg_to_expr(empty) == EMPTY_EXPR == scattered_bcfg_to_expr(empty)
    ab = scattered_bcfg_to_expr(parse_grammar("rules S -> a S b; accept buchi {S};"))
    assert sample(M.compile_to_bcfg(ab)) == {parse_term("a^w b^-w")}


def test_t2_prime_round_trip_keeps_ranks():
    g = M.compile_to_bcfg(M.parse_expr("mu x.(a^w x b^-w + eps)"))
    h = M.compile_to_bcfg(scattered_bcfg_to_expr(g))
    ranks = {rank(t) for t in sample(h, SampleConfig(max_finite_depth=5, max_term_size=10))}
    assert ranks == {0, 1}


def _round_trip(g, well_ordered):
    e = (wellordered_bcfg_to_expr if well_ordered else scattered_bcfg_to_expr)(g)
    assert M.is_closed(e)
    if well_ordered:
        assert M.is_plain_omega(e)
    h = M.compile_to_bcfg(e)
    assert words_up_to(finite_fragment(g), 8) == words_up_to(finite_fragment(h), 8)
    big = replace(BIG, max_lasso_length=max(BIG.max_lasso_length, SMALL.max_lasso_length * step_cost(h)))
    assert not uncovered(sample(g, SMALL), sample(h, big))
    assert not uncovered(sample(h, SMALL), sample(g, big))
    return h


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_extraction_round_trip(seed, well_ordered):
    g = random_normal_form_grammar(random.Random(seed), well_ordered, 4, 8)
    h = _round_trip(g, well_ordered)
    if well_ordered:
        assert all(is_well_ordered(t) for t in sample(h, SMALL))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_recompose_restores_useful_grammar(seed):
    g = random_normal_form_grammar(random.Random(seed), False, 4, 8)
    r = recompose(decompose(g))
    clean = remove_useless(g)
    assert set(r.rules) == set(clean.rules) and r.designated == clean.designated

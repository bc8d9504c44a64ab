import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcfl import rank as R
from bcfl.cfgwords import words_up_to
from bcfl.decompose import decompose
from bcfl.errors import NormalFormViolation, NotLinear
from bcfl.grammar import Grammar, is_linear, parse_grammar
from bcfl.mu import compile_to_bcfg, parse_expr
from bcfl.sampler import SampleConfig, sample
from bcfl.words import letter_profile, rank
from oracles import random_grammar, random_normal_form_grammar

CFG = lambda text: parse_grammar(text).replace(acceptance=None)  # noqa: E731
S = frozenset


def test_occurrence_sets_examples():
    assert R.occurrence_sets_cfg(CFG("rules S -> a S b | eps;")) == {S(), S("ab")}
    assert R.occurrence_sets_cfg(CFG("rules S -> a;")) == {S("a")}
    assert R.occurrence_sets_cfg(CFG("rules S -> a S | b;")) == {S("b"), S("ab")}


def test_gamma_linear_examples():
    assert R.gamma_linear(parse_grammar("rules S -> a S; accept buchi {S};")) == {(S(), S("a"))}
    assert R.gamma_linear(parse_grammar("rules S -> a S b; accept buchi {S};")) == {(S(), S("ab"))}
    assert R.gamma_linear(parse_grammar("rules S -> c; accept buchi {};")) == {(S("c"), S())}
    with pytest.raises(NotLinear):
        R.gamma_linear(parse_grammar("rules S -> S S | a; accept buchi {S};"))


@pytest.mark.parametrize("expr,expected", [
    ("a", [0]),
    ("mu x.(a^w x b^w + eps)", [0, 1]),
    ("(mu x.(a^w x b^w + eps))^w", [0, 1, 2]),
    ("mu y.(mu x.(a^w x b^w + eps) y c + eps)", [0, 1]),
    ("(a^w >< b^-w)^w", [2]),
    ("((a >< b)* (b >< a))^w", [1]),
    ("mu x.(a^w x b^-w + eps)", [0, 1]),
])
def test_rrange_examples(expr, expected):
    rep = R.rank_report(compile_to_bcfg(parse_expr(expr)))
    assert sorted(rep.rrange) == expected
    assert rep.rmax == max(expected) and rep.rmin == min(expected) == rep.rmin_shortcut


def test_empty_language():
    rep = R.rank_report(parse_grammar("rules S -> a S; accept buchi {};"))
    assert rep.rrange == frozenset()
    assert rep.to_dict()["rmax"] == "-inf" and rep.to_dict()["rmin"] == "inf"
    assert rep.rmin_shortcut == float("inf")


def test_infinite_letter_with_finitely_many_nonempty_copies():
    # c^w with L_c = {b, (a^w)^w}: finitely many nonempty... here every copy
    # is nonempty, so mixing gives b^w (rank 1), a tail of (a^w)^w copies after
    # finitely many b's or vice versa (rank 2), and infinitely many (a^w)^w (rank 3)
    g = parse_grammar("rules S -> C S; C -> b | D; D -> E D; E -> a E; accept buchi {S, D, E};")
    assert R.rrange(g) == {1, 2, 3}
    seen = {rank(t) for t in sample(g, SampleConfig(max_nesting=3, max_term_size=10))}
    assert seen == {1, 2, 3}


def test_normal_form_required():
    with pytest.raises(NormalFormViolation):
        R.rank_report(parse_grammar("rules S -> S S | a; accept buchi {S};"))


def test_json_shape():
    d = R.rank_report(compile_to_bcfg(parse_expr("mu x.(a^w x b^w + eps)"))).to_dict()
    assert d["schema"] == 1 and d["rrange"] == [0, 1] and d["rmax"] == 1 and d["rmin"] == 0
    assert all(isinstance(v, list) for v in d["perNode"].values())


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_occurrence_sets_match_enumeration(seed):
    rng = random.Random(seed)
    nts, rules = random_grammar(rng, rng.randint(1, 3), rng.randint(1, 6), alphabet=("a", "b", "c"))
    k = Grammar(tuple(nts), ("a", "b", "c"), tuple(rules), "S", None)
    brute = {S(w) for w in words_up_to(k, 10)}
    assert R.occurrence_sets_cfg(k) == brute


def _corpus(seed):
    return random_normal_form_grammar(random.Random(seed), False, 4, 8)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_sampled_ranks_lie_in_rrange(seed):
    g = _corpus(seed)
    rep = R.rank_report(g)
    terms = sample(g, SampleConfig(max_finite_depth=3, max_lasso_length=3, max_term_size=7, max_nesting=3))
    for t in terms:
        assert rank(t) in rep.rrange, str(t)
    assert rep.rmin_shortcut == min(rep.rrange, default=float("inf"))
    if rep.rrange:
        assert rep.rmax == max(rep.rrange) and rep.rmin == min(rep.rrange)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_node_invariants(seed):
    g = _corpus(seed)
    dag = decompose(g)
    rep = R.rank_report(g)
    assert set(rep.per_node) == set(dag.order())
    for name in dag.order():
        node, own = dag.nodes[name], rep.per_node[name]
        if node.is_linear and not node.refs:
            assert own <= {0, 1}
        children = [max(rep.per_node[c], default=0) for c in node.refs if rep.per_node[c]]
        if own:
            assert max(own) <= 1 + max(children, default=0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_gamma_contains_sampled_profiles(seed):
    g = _corpus(seed)
    if not is_linear(g):
        return
    gamma = R.gamma_linear(g)
    for t in sample(g, SampleConfig(max_finite_depth=3, max_lasso_length=3, max_term_size=7)):
        assert letter_profile(t) in gamma, str(t)

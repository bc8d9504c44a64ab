import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcfl import kleene as K
from bcfl.cfgwords import words_up_to
from bcfl.errors import IdentityCycle, NotLinear, NotWellOrdered
from bcfl.grammar import Buchi, Grammar, parse_grammar
from bcfl.sampler import SampleConfig, sample
from bcfl.words import canonical, finite_letters, parse_term, rank
from oracles import linear_member_infinite, random_grammar

pair_words = st.lists(st.sampled_from("ab"), max_size=3).map(tuple)
pairs = st.tuples(pair_words, pair_words)


def test_pair_product_examples():
    assert K.pair_product((("a",), ("b",)), (("c",), ("d",))) == (("a", "c"), ("d", "b"))
    p = (("a",), ("b", "b"))
    assert K.pair_product(K.IDENTITY, p) == p
    assert K.apply_pair((("a",), ("b",)), parse_term("c^w")) == parse_term("a c^w b")


@given(pairs, pairs, pairs)
def test_monoid_laws(p, q, r):
    assert K.pair_product(K.pair_product(p, q), r) == K.pair_product(p, K.pair_product(q, r))
    assert K.pair_product(p, K.IDENTITY) == p == K.pair_product(K.IDENTITY, p)


def test_omega_power_samples():
    v = K.pairs((("a",), ("b",)))
    assert K.omega_power_sample(v, [], [(("a",), ("b",))]) == parse_term("a^w b^-w")
    left = K.pairs((("a",), ()), (("b", "b"), ()))
    assert K.omega_power_sample(left, [(("a",), ())], [(("b", "b"), ())]) == parse_term("a (b b)^w")
    right = K.pairs(((), ("a",)))
    assert K.omega_power_sample(right, [], [((), ("a",))]) == parse_term("a^-w")
    with pytest.raises(IdentityCycle):
        K.omega_power_sample(K.ONE, [], [K.IDENTITY])


def test_kleene_examples():
    rep = K.linear_bcfg_to_kleene(parse_grammar("rules S -> a S b | c; accept buchi {};"))
    assert rep.summands == ()
    assert words_up_to(rep.finite_part, 5) == {("c",), ("a", "c", "b"), ("a", "a", "c", "b", "b")}
    rep = K.linear_bcfg_to_kleene(parse_grammar("rules S -> a S; accept buchi {S};"))
    assert [(str(u), str(v)) for u, v in rep.summands] == [("{(eps,eps)}", "{(a,eps)}")]
    rep = K.linear_bcfg_to_kleene(parse_grammar("rules S -> a S b; accept buchi {S};"))
    assert [(str(u), str(v)) for u, v in rep.summands] == [("{(eps,eps)}", "{(a,b)}")]
    with pytest.raises(NotLinear):
        K.linear_bcfg_to_kleene(parse_grammar("rules S -> S S | a; accept buchi {S};"))


def test_wellordered_specialize():
    rep = K.linear_bcfg_to_kleene(parse_grammar("rules S -> a S; accept buchi {S};"))
    [(k0, k1)] = K.wellordered_specialize(rep)
    assert K.regex_matches(k0, []) and K.regex_matches(k1, ["a"])
    with pytest.raises(NotWellOrdered):
        K.wellordered_specialize(K.OmegaRepr(rep.finite_part, ((K.ONE, K.pairs(((), ("b",)))),)))
    rep = K.OmegaRepr(rep.finite_part, ((K.pairs((("c",), ())), K.pairs((("a", "b"), ()))),))
    [(k0, k1)] = K.wellordered_specialize(rep)
    assert str(k0) == "c" and str(k1) == "ab"


def test_printing():
    e = K.union(K.star(K.pairs((("a",), ("b",)))), K.pairs((("c",), ())))
    assert "*" in str(e) and "+" in str(e) and "(c,eps)" in str(e)


# ---------------------------------------------------------------------------
# expressions: contains vs enumeration, regex vs enumeration

def pair_exprs():
    base = st.lists(pairs, min_size=0, max_size=3).map(lambda ps: K.pairs(*ps))
    return st.recursive(base, lambda c: st.one_of(
        st.tuples(c, c).map(lambda t: K.union(*t)),
        st.tuples(c, c).map(lambda t: K.product(*t)),
        c.map(K.star)), max_leaves=5)


@settings(max_examples=150, deadline=None)
@given(pair_exprs(), st.lists(pairs, max_size=4))
def test_contains_agrees_with_enumeration(e, probes):
    members = K.enumerate_pairs(e, 5)
    for p in members:
        assert K.contains(e, p)
    for p in probes:
        if len(p[0]) + len(p[1]) <= 5:
            assert K.contains(e, p) == (p in members)
    assert K.is_empty(e) == (not K.enumerate_pairs(e, 12))


left_pairs = pair_words.map(lambda u: (u, ()))


def left_exprs():
    base = st.lists(left_pairs, min_size=0, max_size=3).map(lambda ps: K.pairs(*ps))
    return st.recursive(base, lambda c: st.one_of(
        st.tuples(c, c).map(lambda t: K.union(*t)),
        st.tuples(c, c).map(lambda t: K.product(*t)),
        c.map(K.star)), max_leaves=5)


@settings(max_examples=100, deadline=None)
@given(left_exprs())
def test_regex_projection_matches_first_components(e):
    r = K.project_first(e)
    for n in range(5):
        for w in itertools.product("ab", repeat=n):
            assert K.regex_matches(r, w) == K.contains(e, (w, ()))


# ---------------------------------------------------------------------------
# linear grammars: representation against the grammar


def _linear(seed):
    rng = random.Random(seed)
    nts, rules = random_grammar(rng, rng.randint(1, 3), rng.randint(1, 5), linear=True)
    des = frozenset(x for x in nts if rng.random() < 0.6)
    return Grammar(tuple(nts), ("a", "b"), tuple(rules), "S", Buchi(des))


def _repr_terms(rep, n=4, k=2):
    """Lasso terms of the representation, from pairs of total length <= n."""

    def short(ps):
        return {p for p in ps if len(p[0]) + len(p[1]) <= n}

    out = set()
    for u, v in rep.summands:
        us = K.enumerate_pairs(u, n)
        vs = K.enumerate_pairs(v, n)
        cycles = set(vs)
        for _ in range(k - 1):
            cycles |= short(K.pair_product(a, b) for a in cycles for b in vs)
        # a V-sequence may open with other V pairs before its periodic part
        prefixes = short(K.pair_product(a, b) for a in us for b in cycles | {K.IDENTITY})
        for pu in prefixes:
            for c in cycles:
                if c != K.IDENTITY:
                    out.add(canonical(K.apply_pair(pu, K.omega_power_of_pair(c))))
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_summand_words_belong_to_grammar(seed):
    g = _linear(seed)
    rep = K.linear_bcfg_to_kleene(g)
    for t in _repr_terms(rep, 3, 2):
        assert rank(t) <= 1
        assert linear_member_infinite(g, t), str(t)
    finite = words_up_to(rep.finite_part, 6)
    for t in sample(g, SampleConfig(max_finite_depth=4, max_term_size=6)):
        w = finite_letters(t)
        if w is not None:
            assert w in finite


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_sampled_lassos_are_covered(seed):
    g = _linear(seed)
    rep = K.linear_bcfg_to_kleene(g)
    cfg = SampleConfig(max_finite_depth=3, max_lasso_length=2, max_term_size=5, max_nesting=1)
    covered = _repr_terms(rep, 8, 3)
    for t in sample(g, cfg):
        if finite_letters(t) is None:
            assert t in covered, str(t)

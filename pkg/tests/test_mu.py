import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcfl import mu as M
from bcfl.errors import OpenOmegaOperand, ParseError
from bcfl.grammar import infinite_productive
from bcfl.sampler import SampleConfig, sample
from bcfl.words import classify, is_well_ordered, parse_term
from oracles import step_cost, uncovered

T0 = "mu x.(a^w x b^w + eps)"


def test_parse_t0():
    e = M.parse_expr(T0)
    assert isinstance(e, M.Mu) and e.var == "x"
    assert M.is_closed(e) and M.is_plain_omega(e)
    assert M.format_expr(e) == T0


def test_empty_expression_denotes_nothing():
    e = M.parse_expr("mu x.x")
    assert M.fixpoint_iterate(e, 5) == frozenset()
    g = M.compile_to_bcfg(e)
    assert g.start not in infinite_productive(g)


def test_open_omega_operand():
    with pytest.raises(OpenOmegaOperand) as info:
        M.parse_expr("(a^w x)^w")
    assert info.value.variable == "x"


@pytest.mark.parametrize("text", ["mu x.(a", "a +", "(a >< b) c", "mu .a", "a ><"])
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        M.parse_expr(text)


def test_wellordered_dialect_rejects_reversed_powers():
    with pytest.raises(ParseError):
        M.parse_expr("a^-w", dialect="wellordered")
    assert M.is_plain_omega(M.parse_expr("(a b)^w", dialect="wellordered"))


@pytest.mark.parametrize("text", [T0, "mu x.x", "(a^w >< b^-w)^w", "mu x.(a^w x b^-w + eps)",
                                  "mu x.((a + b c) x + eps)", "((a >< b)* (c >< eps))^w"])
def test_roundtrip_exact(text):
    assert M.format_expr(M.parse_expr(text)) == text


def test_fixpoint_examples():
    t0 = M.parse_expr(T0)
    assert M.fixpoint_iterate(t0, 3) == {parse_term(s) for s in ["eps", "a^w b^w", "a^w a^w b^w b^w"]}
    assert M.fixpoint_iterate(M.parse_expr("a"), 1) == {parse_term("a")}


def test_compile_examples():
    cfg = SampleConfig(max_finite_depth=5, max_term_size=12)
    got = sample(M.compile_to_bcfg(M.parse_expr(T0)), cfg)
    shapes = {parse_term(" ".join(["a^w"] * n + ["b^w"] * n) or "eps"): n for n in range(6)}
    assert got <= shapes.keys() and {0, 1, 2} <= {shapes[t] for t in got}
    star = sample(M.compile_to_bcfg(M.parse_expr("mu x.((a + b c) x + eps)")), SampleConfig(max_finite_depth=4, max_term_size=4))
    assert parse_term("b c a") in star and parse_term("b a") not in star
    pair = sample(M.compile_to_bcfg(M.parse_expr("(a^w >< b^-w)^w")))
    assert pair == {parse_term("(a^w)^w (b^-w)^-w")}


# ---------------------------------------------------------------------------
# random closed expressions


def exprs(scattered=True, var="x"):
    leaf = st.sampled_from([M.Letter("a"), M.Letter("b"), M.EPS])

    def grow(c):
        ops = [st.tuples(c, c).map(lambda t: M.Sum(*t)),
               st.tuples(c, c).map(lambda t: M.Cat(*t)),
               c.filter(M.is_closed).map(M.omega_of),
               # a recursive binder: mu x.(c x + eps) style bodies
               st.tuples(c, c).map(lambda t: M.Mu(var, M.Sum(M.Cat(t[0], M.Cat(M.Var(var), t[1])), M.EPS)))]
        if scattered:
            ops.append(c.filter(M.is_closed).map(M.neg_omega_of))
            ops.append(st.tuples(c, c).filter(lambda t: M.is_closed(t[0]) and M.is_closed(t[1]))
                       .map(lambda t: M.OmegaOfPair(M.PStar(M.Cross(*t)))))
        return st.one_of(*ops)

    return st.recursive(leaf, grow, max_leaves=6).filter(M.is_closed)


@settings(max_examples=150, deadline=None)
@given(exprs())
def test_random_roundtrip(e):
    assert M.parse_expr(M.format_expr(e)) == e


@settings(max_examples=100, deadline=None)
@given(exprs())
def test_fixpoint_monotone(e):
    assert M.fixpoint_iterate(e, 2, max_size=6) <= M.fixpoint_iterate(e, 3, max_size=6)


@settings(max_examples=100, deadline=None)
@given(exprs())
def test_compilation_agrees_with_fixpoint(e):
    # both sides are under-approximations; each side at small bounds must be
    # reproduced by the other at larger bounds, with slack on the size caps
    # since canonical forms can be smaller than the derivations producing them
    g = M.compile_to_bcfg(e)
    small_fix = M.fixpoint_iterate(e, 2, cycle=1, prefix=1, max_size=4)
    big_smp = sample(g, SampleConfig(max_finite_depth=8, max_lasso_length=max(3, step_cost(g) + 1),
                                     max_term_size=7, max_nesting=3))
    assert not uncovered(small_fix, big_smp), uncovered(small_fix, big_smp)
    small_smp = sample(g, SampleConfig(max_finite_depth=2, max_lasso_length=1, max_term_size=3, max_nesting=3))
    big_fix = M.fixpoint_iterate(e, 5, cycle=2, prefix=2, max_size=6)
    assert not uncovered(small_smp, big_fix), uncovered(small_smp, big_fix)


@settings(max_examples=100, deadline=None)
@given(exprs(scattered=False))
def test_plain_expressions_compile_to_well_ordered(e):
    g = M.compile_to_bcfg(e)
    for t in sample(g, SampleConfig(max_finite_depth=3, max_term_size=6)):
        assert is_well_ordered(t), (M.format_expr(e), str(t), classify(t))

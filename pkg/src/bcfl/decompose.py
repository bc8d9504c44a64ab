"""Splitting a Buchi grammar in normal form into plain and linear pieces, and
turning the pieces back into fixpoint expressions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import kleene as K
from . import mu as M
from .errors import NormalFormViolation
from .grammar import Buchi, Grammar, check_scattered_normal_form, finite_productive, normal_form_violations, strong_components_and_heights
from .transform import finite_fragment, remove_useless


@dataclass(frozen=True)
class DagNode:
    name: str
    kind: str  # "cfl" or "linear"
    grammar: Grammar
    refs: tuple

    @property
    def is_linear(self) -> bool:
        return self.kind == "linear"


@dataclass(frozen=True)
class DecompositionDAG:
    nodes: dict = field(hash=False)
    root: str
    alphabet: tuple
    source: Grammar

    def order(self) -> list:
        """Node names, references before the nodes using them."""
        seen, out = set(), []

        def visit(x):
            if x in seen:
                return
            seen.add(x)
            for y in self.nodes[x].refs:
                visit(y)
            out.append(x)

        visit(self.root)
        return out


def decompose(g: Grammar, well_ordered: bool = False) -> DecompositionDAG:
    if not isinstance(g.acceptance, Buchi):
        g = g.replace(acceptance=Buchi(g.designated))
    if not check_scattered_normal_form(g, well_ordered=well_ordered):
        bad = "; ".join(str(r) for r in normal_form_violations(g, well_ordered=well_ordered))
        raise NormalFormViolation(f"rules break the normal form: {bad}")
    g = remove_useless(g)
    comps = strong_components_and_heights(g)
    nodes = {}
    for x in g.nonterminals:
        comp = comps.component_of[x]
        rules = tuple(r for r in g.rules if r.lhs in comp)
        outside = []
        for r in rules:
            outside.extend(s for s in r.rhs if g.is_nonterminal(s) and s not in comp)
        outside = tuple(dict.fromkeys(outside))
        members = (x,) + tuple(y for y in g.nonterminals if y in comp and y != x)
        linear = bool(comp & g.designated)
        acc = Buchi(comp & g.designated) if linear else None
        sub = Grammar(members, tuple(g.alphabet) + outside, rules, x, acc)
        nodes[x] = DagNode(x, "linear" if linear else "cfl", sub, outside)
    return DecompositionDAG(nodes, g.start, tuple(g.alphabet), g)


def recompose(dag: DecompositionDAG) -> Grammar:
    """Glue the node grammars back together (each letter naming a node becomes its nonterminal)."""
    nonterminals, rules, designated = [], [], set()
    for x in dag.order():
        node = dag.nodes[x]
        for y in node.grammar.nonterminals:
            if y not in nonterminals:
                nonterminals.append(y)
        rules.extend(r for r in node.grammar.rules if r not in rules)
        designated |= node.grammar.designated
    root_first = [dag.root] + [y for y in nonterminals if y != dag.root]
    return Grammar(tuple(root_first), dag.alphabet, tuple(rules), dag.root, Buchi(frozenset(designated)))


# ---------------------------------------------------------------------------
# expressions

EMPTY_EXPR = M.Mu("x", M.Var("x"))


def _sum(parts):
    parts = list(parts)
    if not parts:
        return EMPTY_EXPR
    out = parts[0]
    for p in parts[1:]:
        out = M.Sum(out, p)
    return out


def _cat(parts):
    parts = [p for p in parts if p != M.EPS]
    if not parts:
        return M.EPS
    out = parts[0]
    for p in parts[1:]:
        out = M.Cat(out, p)
    return out


class _Names:
    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.count = itertools.count()

    def fresh(self):
        while True:
            name = f"x{next(self.count)}"
            if name not in self.avoid:
                return name


def _symbol_expr(s, letters):
    return letters[s] if s in letters else M.Letter(s)


def cfg_to_expr(g: Grammar, letters: dict, names: _Names, start=None) -> M.MuExpr:
    """Closed expression for the finite words of a plain grammar, by nested
    elimination of its equations; ``letters`` maps letters to expressions."""
    var_of = {}
    live = finite_productive(g)

    def solve(x, stack):
        if x in stack:
            return M.Var(var_of[x])
        if x not in live:
            return EMPTY_EXPR
        var_of[x] = names.fresh()
        alts = []
        for r in g.rules_by_lhs[x]:
            if any(s not in live for s in g.nts_of(r.rhs)):
                continue
            alts.append(_cat(solve(s, stack | {x}) if g.is_nonterminal(s) else _symbol_expr(s, letters)
                             for s in r.rhs))
        body = _sum(alts)
        return M.Mu(var_of[x], body) if var_of[x] in M.free_vars(body) else body

    return solve(start or g.start, frozenset())


def _word_expr(w, letters):
    return _cat(_symbol_expr(s, letters) for s in w)


def regex_to_expr(r: K.Regex, letters: dict, names: _Names) -> M.MuExpr:
    if isinstance(r, K.Words):
        return _sum(_word_expr(w, letters) for w in sorted(r.words, key=lambda w: (len(w), w)))
    if isinstance(r, K.Alt):
        return M.Sum(regex_to_expr(r.left, letters, names), regex_to_expr(r.right, letters, names))
    if isinstance(r, K.Cat):
        return _cat([regex_to_expr(r.left, letters, names), regex_to_expr(r.right, letters, names)])
    v = names.fresh()
    return M.Mu(v, M.Sum(_cat([regex_to_expr(r.body, letters, names), M.Var(v)]), M.EPS))


def pairs_to_term(p: K.PairExpr, letters: dict) -> M.PairTerm:
    if isinstance(p, K.FinitePairs):
        items = sorted(p.pairs, key=lambda q: (len(q[0]) + len(q[1]), q))
        terms = [M.Cross(_word_expr(u, letters), _word_expr(v, letters)) for u, v in items]
        out = terms[0]
        for t in terms[1:]:
            out = M.PSum(out, t)
        return out
    if isinstance(p, K.Union):
        return M.PSum(pairs_to_term(p.left, letters), pairs_to_term(p.right, letters))
    if isinstance(p, K.Product):
        return M.PCat(pairs_to_term(p.left, letters), pairs_to_term(p.right, letters))
    return M.PStar(pairs_to_term(p.body, letters))


def apply_pairs(p: K.PairExpr, inner: M.MuExpr, letters: dict, names: _Names) -> M.MuExpr:
    """Word expression for p o L where L is denoted by ``inner``."""
    if isinstance(p, K.FinitePairs):
        items = sorted(p.pairs, key=lambda q: (len(q[0]) + len(q[1]), q))
        return _sum(_cat([_word_expr(u, letters), inner, _word_expr(v, letters)]) for u, v in items)
    if isinstance(p, K.Union):
        return M.Sum(apply_pairs(p.left, inner, letters, names), apply_pairs(p.right, inner, letters, names))
    if isinstance(p, K.Product):
        return apply_pairs(p.left, apply_pairs(p.right, inner, letters, names), letters, names)
    v = names.fresh()
    return M.Mu(v, M.Sum(apply_pairs(p.body, M.Var(v), letters, names), inner))


def _node_expr(node: DagNode, letters: dict, names: _Names, well_ordered: bool) -> M.MuExpr:
    if not node.is_linear:
        return cfg_to_expr(node.grammar, letters, names)
    rep = K.linear_bcfg_to_kleene(node.grammar)
    parts = [cfg_to_expr(rep.finite_part, letters, names)]
    if well_ordered:
        for k0, k1 in K.wellordered_specialize(rep):
            parts.append(_cat([regex_to_expr(k0, letters, names), M.omega_of(regex_to_expr(k1, letters, names))]))
    else:
        for u, v in rep.summands:
            parts.append(apply_pairs(u, M.OmegaOfPair(pairs_to_term(v, letters)), letters, names))
    parts = [p for p in parts if p != EMPTY_EXPR] or [EMPTY_EXPR]
    return _sum(parts)


def _extract(g: Grammar, well_ordered: bool) -> M.MuExpr:
    dag = decompose(g, well_ordered=well_ordered)
    if dag.root not in dag.nodes:
        return EMPTY_EXPR
    names = _Names(set(dag.alphabet) | set(dag.source.nonterminals))
    exprs = {}
    for x in dag.order():
        node = dag.nodes[x]
        letters = {y: exprs[y] for y in node.refs}
        exprs[x] = _node_expr(node, letters, names, well_ordered)
    return exprs[dag.root]


def wellordered_bcfg_to_expr(g: Grammar) -> M.MuExpr:
    return _extract(g, True)


def scattered_bcfg_to_expr(g: Grammar) -> M.MuExpr:
    return _extract(g, False)


__all__ = [
    "DagNode", "DecompositionDAG", "decompose", "recompose", "cfg_to_expr",
    "wellordered_bcfg_to_expr", "scattered_bcfg_to_expr", "finite_fragment", "EMPTY_EXPR",
]

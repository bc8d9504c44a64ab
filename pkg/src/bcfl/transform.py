"""Grammar transformations: cleaning, finite fragments, reproductivity and the
Muller-to-Buchi grammar conversion for non-reproductive grammars."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import networkx as nx

from .automata import linear_mcfg_to_bcfg
from .errors import NormalFormViolation, ReproductiveInput
from .grammar import (
    Buchi,
    Grammar,
    Muller,
    Rule,
    check_scattered_normal_form,
    dependency_graph,
    empty_grammar,
    epsilon_infinite,
    finite_productive,
    infinite_productive,
    is_linear,
    strong_components_and_heights,
)


def _restrict_acceptance(acc, keep):
    if isinstance(acc, Buchi):
        return Buchi(acc.designated & keep)
    if isinstance(acc, Muller):
        return Muller(frozenset(f for f in acc.family if f <= keep))
    return None


def restrict(g: Grammar, keep) -> Grammar:
    """Sub-grammar on the nonterminals in ``keep`` (which must contain the start)."""
    keep = frozenset(keep)
    rules = tuple(r for r in g.rules if r.lhs in keep and all(s in keep for s in g.nts_of(r.rhs)))
    return Grammar(tuple(x for x in g.nonterminals if x in keep), g.alphabet, rules, g.start,
                   _restrict_acceptance(g.acceptance, keep))


def remove_useless(g: Grammar) -> Grammar:
    prod = infinite_productive(g)
    if g.start not in prod:
        return empty_grammar(g.alphabet, g.acceptance, g.start)
    g1 = restrict(g, prod)
    reach = {g.start} | nx.descendants(dependency_graph(g1), g.start)
    return restrict(g1, reach)


def finite_fragment(g: Grammar) -> Grammar:
    """Plain grammar for the finite words of L(G)."""
    if g.acceptance is None:
        return g
    extra = tuple(Rule(x, ()) for x in g.nonterminals if x in epsilon_infinite(g))
    return g.replace(rules=g.rules + extra, acceptance=None)


def _internal_graph(g, members):
    graph = nx.DiGraph()
    graph.add_nodes_from(members)
    for r in g.rules:
        if r.lhs in members:
            for s in g.nts_of(r.rhs):
                if s in members:
                    graph.add_edge(r.lhs, s)
    return graph


def realizable(g: Grammar, fam) -> bool:
    """Whether ``fam`` can be the set of nonterminals repeating on a path."""
    graph = _internal_graph(g, fam)
    if not nx.is_strongly_connected(graph):
        return False
    return len(fam) > 1 or graph.has_edge(next(iter(fam)), next(iter(fam)))


def normalize_acceptance(g: Grammar) -> Grammar:
    if not isinstance(g.acceptance, Muller):
        return g
    return g.replace(acceptance=Muller(frozenset(f for f in g.family if realizable(g, f))))


def _derives_to(g):
    """X -> set of nonterminals occurring in finite derivations from X (X included)."""
    graph = dependency_graph(g)
    return {x: {x} | nx.descendants(graph, x) for x in g.nonterminals}


def reproductive_nonterminals(g: Grammar) -> frozenset:
    """Nonterminals rooting derivations with infinitely many leaves of an unbounded kind.

    Buchi grammars are read as the Muller grammar whose family is every subset
    of a component meeting the designated set; plain grammars have none.
    """
    if isinstance(g.acceptance, Buchi):
        g = g.replace(acceptance=_lifted_family(g))
    if not isinstance(g.acceptance, Muller):
        return frozenset()
    g = normalize_acceptance(g)
    comps = strong_components_and_heights(g)
    reach = _derives_to(g)
    out = set()
    for fam in g.family:
        comp = comps.component_of[next(iter(fam))]
        sides = set()
        for r in g.rules:
            if r.lhs not in fam:
                continue
            for i, z in enumerate(r.rhs):
                if z in fam:
                    sides.update(w for j, w in enumerate(r.rhs) if j != i and w in comp)
        if not sides:
            continue
        for x in g.nonterminals:
            if reach[x] & fam and any(x in reach[w] for w in sides):
                out.add(x)
    return frozenset(out)


def _lifted_family(g: Grammar) -> Muller:
    comps = strong_components_and_heights(g)
    des = g.designated
    family = set()
    for comp in comps.sccs:
        if not comp & des:
            continue
        members = sorted(comp)
        for k in range(1, len(members) + 1):
            for sub in itertools.combinations(members, k):
                if des.intersection(sub):
                    family.add(frozenset(sub))
    return Muller(frozenset(family))


def lift_buchi_to_nonreproductive_mcfg(g: Grammar) -> Grammar:
    if not check_scattered_normal_form(g):
        raise NormalFormViolation("a designated component has a rule with two occurrences of it")
    return g.replace(acceptance=_lifted_family(g))


# ---------------------------------------------------------------------------
# renaming and substitution


def fresh_name(base: str, taken) -> str:
    name = base
    k = 0
    while name in taken:
        k += 1
        name = f"{base}_{k}"
    return name


def rename(g: Grammar, mapping: Callable[[str], str]) -> Grammar:
    """Rename nonterminals by an injective function."""
    m = {x: mapping(x) for x in g.nonterminals}
    if len(set(m.values())) != len(m):
        raise ValueError("renaming is not injective")

    def sym(s):
        return m.get(s, s)

    acc = g.acceptance
    if isinstance(acc, Buchi):
        acc = Buchi(frozenset(m[x] for x in acc.designated))
    elif isinstance(acc, Muller):
        acc = Muller(frozenset(frozenset(m[x] for x in f) for f in acc.family))
    rules = tuple(Rule(m[r.lhs], tuple(sym(s) for s in r.rhs)) for r in g.rules)
    return Grammar(tuple(m[x] for x in g.nonterminals), g.alphabet, rules, m[g.start], acc)


def _kind(gs):
    kinds = {type(g.acceptance) for g in gs if g.acceptance is not None}
    if len(kinds) > 1:
        raise ValueError("grammars mix Buchi and Muller acceptance")
    return kinds.pop() if kinds else None


def substitute_grammar(g0: Grammar, mapping: Mapping[str, Grammar]) -> Grammar:
    """Replace each occurrence of a mapped letter by the start of a fresh copy of its grammar."""
    mapping = {b: h for b, h in mapping.items() if b in g0.alphabet}
    kind = _kind([g0, *mapping.values()])
    alphabet = [a for a in g0.alphabet if a not in mapping]
    for h in mapping.values():
        alphabet.extend(a for a in h.alphabet if a not in alphabet)
    taken = set(g0.nonterminals) | set(alphabet)
    clash = set(g0.nonterminals) & set(alphabet)
    if clash:
        raise ValueError(f"substituted alphabets clash with nonterminals {sorted(clash)}")
    nonterminals = list(g0.nonterminals)
    rules = []
    designated, family = set(g0.designated), set(g0.family)
    starts = {}
    for b, h in mapping.items():
        used = {}
        for x in h.nonterminals:
            used[x] = fresh_name(f"{x}_{b}", taken)
            taken.add(used[x])
        copy = rename(h, used.__getitem__)
        starts[b] = copy.start
        nonterminals.extend(copy.nonterminals)
        rules.extend(copy.rules)
        designated |= copy.designated
        family |= copy.family
    for r in g0.rules:
        rules.append(Rule(r.lhs, tuple(starts.get(s, s) for s in r.rhs)))
    if kind is Buchi:
        acc = Buchi(frozenset(designated))
    elif kind is Muller:
        acc = Muller(frozenset(family))
    else:
        acc = None
    return Grammar(tuple(nonterminals), tuple(alphabet), tuple(rules), g0.start, acc)


# ---------------------------------------------------------------------------
# Muller to Buchi for non-reproductive grammars


def cycle_grammar(g: Grammar, fam, y: str) -> Grammar:
    """Linear Muller grammar of the paths staying inside ``fam`` from ``y``.

    Other nonterminals become letters standing for themselves.
    """
    rules = [r for r in g.rules if r.lhs in fam and any(s in fam for s in r.rhs)]
    members = sorted(fam)
    side = [x for x in g.nonterminals if x not in fam]
    return Grammar(tuple([y] + [x for x in members if x != y]), tuple(g.alphabet) + tuple(side),
                   tuple(rules), y, Muller(frozenset([frozenset(fam)])))


def mcfg_to_bcfg(g: Grammar) -> Grammar:
    """Equivalent Buchi grammar for a non-reproductive Muller grammar.

    The original rules are kept with nothing designated, so every accepting
    infinite path must eventually enter one of the linear Buchi grammars
    attached below each ``Y`` in a family member ``F``; those generate the
    part of a tree where the path stays in ``F`` forever.
    """
    if isinstance(g.acceptance, Buchi):
        return g
    if g.acceptance is None:
        return g.replace(acceptance=Buchi())
    g = normalize_acceptance(g)
    witnesses = reproductive_nonterminals(g)
    if witnesses:
        raise ReproductiveInput(witnesses)
    taken = set(g.nonterminals) | set(g.alphabet)
    nonterminals = list(g.nonterminals)
    rules = list(g.rules)
    designated = set()
    families = sorted(g.family, key=sorted)
    for j, fam in enumerate(families):
        for y in sorted(fam):
            linear = linear_mcfg_to_bcfg(cycle_grammar(g, fam, y))
            linear = _prune(linear)
            if linear is None:
                continue
            names = {}
            for k, q in enumerate(linear.nonterminals):
                names[q] = fresh_name(f"{y}_{j}_{k}", taken)
                taken.add(names[q])
            copy = rename(linear, names.__getitem__)
            nonterminals.extend(copy.nonterminals)
            rules.extend(copy.rules)
            designated |= copy.designated
            rules.append(Rule(y, (copy.start,)))
    out = Grammar(tuple(nonterminals), g.alphabet, tuple(rules), g.start, Buchi(frozenset(designated)))
    return remove_useless(out)


def _prune(linear: Grammar) -> Optional[Grammar]:
    cleaned = remove_useless(linear)
    return cleaned if cleaned.rules else None


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class AnalysisReport:
    sccs: tuple
    heights: dict = field(hash=False)
    finite_productive: frozenset = frozenset()
    infinite_productive: frozenset = frozenset()
    epsilon_infinite: frozenset = frozenset()
    reproductive: frozenset = frozenset()
    is_linear: bool = False
    normal_form_ok: bool = True

    def to_dict(self) -> dict:
        return {
            "sccs": [sorted(c) for c in self.sccs],
            "heights": dict(sorted(self.heights.items())),
            "finiteProductive": sorted(self.finite_productive),
            "infiniteProductive": sorted(self.infinite_productive),
            "epsilonInfinite": sorted(self.epsilon_infinite),
            "reproductive": sorted(self.reproductive),
            "isLinear": self.is_linear,
            "normalFormOK": self.normal_form_ok,
        }


def analyze(g: Grammar) -> AnalysisReport:
    comps = strong_components_and_heights(g)
    return AnalysisReport(
        sccs=comps.sccs,
        heights=dict(comps.heights),
        finite_productive=finite_productive(g),
        infinite_productive=infinite_productive(g),
        epsilon_infinite=epsilon_infinite(g),
        reproductive=reproductive_nonterminals(g),
        is_linear=is_linear(g),
        normal_form_ok=check_scattered_normal_form(g) if isinstance(g.acceptance, Buchi) else True,
    )


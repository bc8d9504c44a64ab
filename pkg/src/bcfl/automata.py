"""Buchi and Muller automata over finite and omega-words with word-labeled transitions.

Also hosts the linear-grammar pipeline: a linear Muller grammar becomes a
Muller automaton over its rules, which is converted to a Buchi automaton and
read back as a linear Buchi grammar.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

import networkx as nx

from .errors import EmptyPeriod, NotLinear, ParseError, UnregisteredRule
from .grammar import Buchi, Grammar, Muller, Rule, is_linear


@dataclass(frozen=True)
class Transition:
    source: str
    label: tuple
    target: str

    def __str__(self):
        return f"{self.source} -({' '.join(self.label)})-> {self.target}"


@dataclass(frozen=True)
class OmegaAutomaton:
    states: tuple
    alphabet: tuple
    transitions: tuple
    initial: str
    finals: frozenset = frozenset()
    acceptance: Union[Buchi, Muller] = Buchi()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(dict.fromkeys(self.states)))
        object.__setattr__(self, "alphabet", tuple(dict.fromkeys(self.alphabet)))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(
            self, "transitions",
            tuple(dict.fromkeys(t if isinstance(t, Transition) else Transition(t[0], tuple(t[1]), t[2])
                                for t in self.transitions)),
        )
        qs = set(self.states)
        if self.initial not in qs or not self.finals <= qs:
            raise ValueError("initial and final states must be declared")
        for t in self.transitions:
            if t.source not in qs or t.target not in qs:
                raise ValueError(f"transition {t} uses an undeclared state")
            if not set(t.label) <= set(self.alphabet):
                raise ValueError(f"transition {t} uses an undeclared letter")
        acc = self.acceptance
        if isinstance(acc, Buchi) and not acc.designated <= qs:
            raise ValueError("designated states must be declared")
        if isinstance(acc, Muller) and any(not f or not f <= qs for f in acc.family):
            raise ValueError("Muller family members must be nonempty sets of states")

    @cached_property
    def outgoing(self) -> dict:
        out = {q: [] for q in self.states}
        for t in self.transitions:
            out[t.source].append(t)
        return out

    def __str__(self):
        return format_automaton(self)


# ---------------------------------------------------------------------------
# text format

_TRANS = re.compile(r"^trans\s+(\S+)\s+-\((.*?)\)->\s+(\S+)$")


def _label(text, alphabet):
    toks = text.split()
    if toks in ([], ["eps"]):
        return ()
    if len(toks) == 1 and toks[0] not in alphabet and all(c in alphabet for c in toks[0]):
        return tuple(toks[0])
    return tuple(toks)


def parse_automaton(text: str) -> OmegaAutomaton:
    states = alphabet = initial = None
    finals = ()
    acceptance = Buchi()
    trans_text = []
    stmts = "\n".join(l.split("//", 1)[0] for l in text.splitlines()).split(";")
    line = 1
    for stmt in stmts:
        at = line + stmt[: len(stmt) - len(stmt.lstrip())].count("\n")
        line += stmt.count("\n")
        body = " ".join(stmt.split())
        if not body:
            continue
        head, _, rest = body.partition(" ")
        if head == "states":
            states = rest.split()
        elif head == "alphabet":
            alphabet = rest.split()
        elif head == "initial":
            initial = rest.strip()
        elif head == "finals":
            finals = rest.split()
        elif head == "accept":
            from .grammar import _parse_accept

            acceptance = _parse_accept(rest, at)
        elif head == "trans":
            m = _TRANS.match(body)
            if not m:
                raise ParseError(f"malformed transition {body!r}", at, 1)
            trans_text.append((m.group(1), m.group(2), m.group(3), at))
        else:
            raise ParseError(f"unknown statement {head!r}", at, 1)
    if alphabet is None:
        raise ParseError("automaton needs an alphabet line", 1, 1)
    transitions = [(p, _label(lab, alphabet), q) for p, lab, q, _ in trans_text]
    if states is None:
        states = list(dict.fromkeys([initial] + [x for p, _, q in transitions for x in (p, q)]))
    if initial is None:
        initial = states[0]
    try:
        return OmegaAutomaton(tuple(states), tuple(alphabet), tuple(transitions), initial, frozenset(finals), acceptance)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_automaton(a: OmegaAutomaton) -> str:
    lines = [
        f"alphabet {' '.join(a.alphabet)};",
        f"states {' '.join(a.states)};",
        f"initial {a.initial};",
        f"finals {' '.join(sorted(a.finals))};",
    ]
    if isinstance(a.acceptance, Buchi):
        lines.append("accept buchi {" + ",".join(sorted(a.acceptance.designated)) + "};")
    else:
        fam = sorted(sorted(f) for f in a.acceptance.family)
        lines.append("accept muller {" + ",".join("{" + ",".join(f) + "}" for f in fam) + "};")
    for t in a.transitions:
        lines.append(f"trans {t.source} -({' '.join(t.label)})-> {t.target};")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# membership


def member_finite(a: OmegaAutomaton, w: Sequence[str]) -> bool:
    w = tuple(w)
    start = (a.initial, 0)
    seen = {start}
    queue = deque([start])
    while queue:
        q, i = queue.popleft()
        if i == len(w) and q in a.finals:
            return True
        for t in a.outgoing[q]:
            j = i + len(t.label)
            if w[i:j] == t.label and (t.target, j) not in seen:
                seen.add((t.target, j))
                queue.append((t.target, j))
    return False


def _lasso_graph(a, u, v):
    """Product of the automaton with the positions of u v^w; edges carry a consumption flag."""
    word = tuple(u) + tuple(v)
    n, loop = len(word), len(u)

    def advance(pos, label):
        for letter in label:
            if word[pos] != letter:
                return None
            pos = pos + 1 if pos + 1 < n else loop
        return pos

    graph = nx.DiGraph()
    start = (a.initial, 0)
    graph.add_node(start)
    queue = deque([start])
    while queue:
        q, pos = node = queue.popleft()
        for t in a.outgoing[q]:
            nxt = advance(pos, t.label)
            if nxt is None:
                continue
            target = (t.target, nxt)
            if target not in graph:
                graph.add_node(target)
                queue.append(target)
            consumed = bool(t.label) or graph.get_edge_data(node, target, {}).get("consumed", False)
            graph.add_edge(node, target, consumed=consumed)
    return graph


def _has_consuming_edge(graph, nodes):
    adj = graph.adj
    return any(d["consumed"] for x in nodes for y, d in adj[x].items() if y in nodes)


def member_lasso(a: OmegaAutomaton, u: Sequence[str], v: Sequence[str]) -> bool:
    """Membership of the omega-word u v^w."""
    if not v:
        raise EmptyPeriod("the period of a lasso must be nonempty")
    graph = _lasso_graph(a, u, v)
    acc = a.acceptance
    if isinstance(acc, Buchi):
        for comp in nx.strongly_connected_components(graph):
            if any(q in acc.designated for q, _ in comp) and _has_consuming_edge(graph, comp):
                return True
        return False
    for fam in acc.family:
        sub = graph.subgraph([n for n in graph if n[0] in fam])
        for comp in nx.strongly_connected_components(sub):
            if {q for q, _ in comp} == fam and _has_consuming_edge(graph, comp):
                return True
    return False


# ---------------------------------------------------------------------------
# Muller to Buchi


def _phase_name(q, i, seen, taken):
    base = f"{q}~{i}~{'.'.join(sorted(seen))}"
    return base


def muller_to_buchi(a: OmegaAutomaton) -> OmegaAutomaton:
    """Equivalent Buchi automaton (on finite and omega-words).

    The original automaton is kept as a prefix phase. From any transition
    into a member F of the family the run may jump into a copy tracking the
    states of F seen since the last reset; leaving F is impossible in the copy,
    and reset states (seen set cleared after covering F) are designated.
    """
    if isinstance(a.acceptance, Buchi):
        return a
    family = sorted(a.acceptance.family, key=lambda f: sorted(f))
    states = list(a.states)
    taken = set(states)
    transitions = list(a.transitions)
    designated = set()
    names = {}

    def name(q, i, seen):
        key = (q, i, seen)
        if key not in names:
            nm = _phase_name(q, i, seen, taken)
            while nm in taken:
                nm += "'"
            taken.add(nm)
            names[key] = nm
            states.append(nm)
            if not seen:
                designated.add(nm)
        return names[key]

    for i, fam in enumerate(family):
        queue = deque()
        for t in a.transitions:
            if t.target in fam:
                key = (t.target, i, frozenset())
                fresh = key not in names
                transitions.append(Transition(t.source, t.label, name(*key)))
                if fresh:
                    queue.append(key)
        while queue:
            q, _, seen = key = queue.popleft()
            for t in a.outgoing[q]:
                if t.target not in fam:
                    continue
                nxt_seen = seen | {t.target}
                nxt = (t.target, i, frozenset() if nxt_seen == fam else frozenset(nxt_seen))
                fresh = nxt not in names
                transitions.append(Transition(names[key], t.label, name(*nxt)))
                if fresh:
                    queue.append(nxt)
    return OmegaAutomaton(tuple(states), a.alphabet, tuple(transitions), a.initial, a.finals,
                          Buchi(frozenset(designated)))


# ---------------------------------------------------------------------------
# linear grammars and rule automata


@dataclass(frozen=True)
class RuleMeaning:
    left: tuple
    right: tuple
    terminal: bool


def _fresh(base, taken):
    name = base
    k = 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return name


def rule_symbols(g: Grammar) -> dict:
    """Map rule symbol -> rule; symbols are r0, r1, ... in rule order."""
    return {f"r{i}": r for i, r in enumerate(g.rules)}


def rule_meanings(g: Grammar) -> dict:
    out = {}
    for sym, r in rule_symbols(g).items():
        nts = [i for i, s in enumerate(r.rhs) if g.is_nonterminal(s)]
        if len(nts) > 1:
            raise NotLinear(f"rule {r} has more than one nonterminal")
        if nts:
            k = nts[0]
            out[sym] = RuleMeaning(r.rhs[:k], r.rhs[k + 1:], False)
        else:
            out[sym] = RuleMeaning(r.rhs, (), True)
    return out


def linear_mcfg_to_muller(g: Grammar) -> OmegaAutomaton:
    """Automaton over rule symbols accepting principal-path rule sequences."""
    if not is_linear(g):
        raise NotLinear("grammar is not linear")
    z0 = _fresh("Z0", set(g.nonterminals))
    transitions = []
    for sym, r in rule_symbols(g).items():
        nts = g.nts_of(r.rhs)
        transitions.append(Transition(r.lhs, (sym,), nts[0] if nts else z0))
    acc = g.acceptance if g.acceptance is not None else Muller()
    return OmegaAutomaton(tuple(g.nonterminals) + (z0,), tuple(rule_symbols(g)), tuple(transitions),
                          g.start, frozenset([z0]), acc)


def buchi_to_linear_bcfg(b: OmegaAutomaton, meaning: Mapping[str, RuleMeaning], alphabet: Iterable[str]) -> Grammar:
    """Read a Buchi automaton over rule symbols back as a linear Buchi grammar."""
    alphabet = tuple(alphabet)
    rename = {}
    taken = set(alphabet)
    for q in b.states:
        rename[q] = _fresh(q, taken) if q in taken else q
        taken.add(rename[q])
    rules = []
    for t in b.transitions:
        if len(t.label) != 1 or t.label[0] not in meaning:
            raise UnregisteredRule(f"transition {t} does not read a registered rule symbol")
        m = meaning[t.label[0]]
        if not m.terminal:
            rules.append(Rule(rename[t.source], m.left + (rename[t.target],) + m.right))
        elif t.target in b.finals:
            rules.append(Rule(rename[t.source], m.left))
    designated = frozenset(rename[q] for q in b.acceptance.designated)
    return Grammar(tuple(rename[q] for q in b.states), alphabet, tuple(rules), rename[b.initial], Buchi(designated))


def linear_mcfg_to_bcfg(g: Grammar) -> Grammar:
    """Equivalent linear Buchi grammar for a linear Muller (or Buchi) grammar."""
    muller = linear_mcfg_to_muller(g)
    return buchi_to_linear_bcfg(muller_to_buchi(muller), rule_meanings(g), g.alphabet)


def grammar_automaton(g: Grammar) -> OmegaAutomaton:
    """Automaton for a linear grammar whose transitions read the letters a rule emits (left then right)."""
    if not is_linear(g):
        raise NotLinear("grammar is not linear")
    z0 = _fresh("Z0", set(g.nonterminals))
    transitions = []
    for r in g.rules:
        nts = [i for i, s in enumerate(r.rhs) if g.is_nonterminal(s)]
        if nts:
            k = nts[0]
            transitions.append(Transition(r.lhs, r.rhs[:k] + r.rhs[k + 1:], r.rhs[k]))
        else:
            transitions.append(Transition(r.lhs, r.rhs, z0))
    acc = g.acceptance if g.acceptance is not None else Buchi()
    return OmegaAutomaton(tuple(g.nonterminals) + (z0,), g.alphabet, tuple(transitions), g.start,
                          frozenset([z0]), acc)


# ---------------------------------------------------------------------------
# occurrence profiles


def _walk_letter_sets(a):
    start = (a.initial, frozenset())
    seen = {start}
    queue = deque([start])
    while queue:
        q, ls = queue.popleft()
        for t in a.outgoing[q]:
            nxt = (t.target, ls | frozenset(t.label))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _cycle_components(a, edges, states_filter=None):
    graph = nx.DiGraph()
    for t in edges:
        if states_filter is None or (t.source in states_filter and t.target in states_filter):
            graph.add_edge(t.source, t.target)
            graph.edges[t.source, t.target].setdefault("labels", set()).update(t.label)
    for comp in nx.strongly_connected_components(graph):
        sub = graph.subgraph(comp)
        if sub.number_of_edges() == 0:
            continue
        labels = set()
        for e in sub.edges:
            labels |= sub.edges[e]["labels"]
        yield frozenset(comp), frozenset(labels)


def inf_profiles(a: OmegaAutomaton, epsilon_cycles_finite: bool = False) -> frozenset:
    """Pairs (letters occurring a finite positive number of times, letters occurring
    infinitely often) over all accepted words.

    With ``epsilon_cycles_finite`` an accepting cycle reading no letter counts as
    producing the finite word read so far (as for rule automata of grammars,
    where an infinite principal path may emit nothing).
    """
    walks = _walk_letter_sets(a)
    out = set()
    for q, ls in walks:
        if q in a.finals:
            out.add((ls, frozenset()))
    used = sorted({x for t in a.transitions for x in t.label})
    subsets = [frozenset(c) for k in range(len(used) + 1) for c in itertools.combinations(used, k)]
    acc = a.acceptance
    for h in subsets:
        if not h and not epsilon_cycles_finite:
            continue
        edges = [t for t in a.transitions if set(t.label) <= h]
        accepting = []
        if isinstance(acc, Buchi):
            for comp, labels in _cycle_components(a, edges):
                if labels == h and comp & acc.designated:
                    accepting.append(comp)
        else:
            for fam in acc.family:
                for comp, labels in _cycle_components(a, edges, fam):
                    if labels == h and comp == fam:
                        accepting.append(comp)
        for comp in accepting:
            for q, ls in walks:
                if q in comp:
                    out.add((ls - h, h))
    return frozenset(out)

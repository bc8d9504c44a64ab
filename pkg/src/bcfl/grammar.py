"""Context-free grammars with optional Buchi or Muller acceptance, and their analyses."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Union

import networkx as nx

from .errors import ParseError
from .games import MullerGame


@dataclass(frozen=True)
class Buchi:
    designated: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "designated", frozenset(self.designated))

    def accepts(self, inf_set) -> bool:
        return bool(self.designated & set(inf_set))


@dataclass(frozen=True)
class Muller:
    family: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "family", frozenset(frozenset(f) for f in self.family))

    def accepts(self, inf_set) -> bool:
        return frozenset(inf_set) in self.family


Acceptance = Union[Buchi, Muller, None]


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: tuple = ()

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs) if self.rhs else 'eps'}"


@dataclass(frozen=True)
class Grammar:
    nonterminals: tuple
    alphabet: tuple
    rules: tuple
    start: str
    acceptance: Acceptance = None

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", tuple(dict.fromkeys(self.nonterminals)))
        object.__setattr__(self, "alphabet", tuple(dict.fromkeys(self.alphabet)))
        object.__setattr__(
            self, "rules", tuple(dict.fromkeys(r if isinstance(r, Rule) else Rule(r[0], tuple(r[1])) for r in self.rules))
        )
        nts, sigma = set(self.nonterminals), set(self.alphabet)
        if nts & sigma:
            raise ValueError(f"nonterminals and alphabet overlap: {sorted(nts & sigma)}")
        if self.start not in nts:
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        for r in self.rules:
            if r.lhs not in nts:
                raise ValueError(f"rule {r} has undeclared left side")
            for s in r.rhs:
                if s not in nts and s not in sigma:
                    raise ValueError(f"rule {r} uses undeclared symbol {s!r}")
        acc = self.acceptance
        if isinstance(acc, Buchi) and not acc.designated <= nts:
            raise ValueError("designated set must consist of nonterminals")
        if isinstance(acc, Muller):
            for f in acc.family:
                if not f or not f <= nts:
                    raise ValueError("Muller family members must be nonempty sets of nonterminals")

    @cached_property
    def nonterminal_set(self) -> frozenset:
        return frozenset(self.nonterminals)

    def is_nonterminal(self, s) -> bool:
        return s in self.nonterminal_set

    @cached_property
    def rules_by_lhs(self) -> dict:
        out = {x: [] for x in self.nonterminals}
        for r in self.rules:
            out[r.lhs].append(r)
        return out

    def nts_of(self, rhs) -> list:
        return [s for s in rhs if s in self.nonterminal_set]

    @property
    def designated(self) -> frozenset:
        return self.acceptance.designated if isinstance(self.acceptance, Buchi) else frozenset()

    @property
    def family(self) -> frozenset:
        return self.acceptance.family if isinstance(self.acceptance, Muller) else frozenset()

    def replace(self, **changes) -> "Grammar":
        data = dict(
            nonterminals=self.nonterminals, alphabet=self.alphabet, rules=self.rules,
            start=self.start, acceptance=self.acceptance,
        )
        data.update(changes)
        return Grammar(**data)

    def __str__(self):
        return format_grammar(self)


def empty_grammar(alphabet: Iterable[str] = (), acceptance: Acceptance = None, start: str = "S") -> Grammar:
    """The degenerate grammar with a single nonterminal and no rules."""
    alphabet = tuple(alphabet)
    while start in alphabet:
        start += "'"
    if isinstance(acceptance, Buchi):
        acceptance = Buchi()
    elif isinstance(acceptance, Muller):
        acceptance = Muller()
    return Grammar((start,), alphabet, (), start, acceptance)


# ---------------------------------------------------------------------------
# text format


def _split_statements(text):
    # comments run from "//" to the end of the line
    lines = [line.split("//", 1)[0] for line in text.splitlines()]
    return "\n".join(lines).split(";")


def parse_grammar(text: str) -> Grammar:
    """Parse the ``alphabet/nonterminals/start/rules/accept`` text format."""
    alphabet = nonterminals = start = None
    rules = []
    acceptance = None
    line = 1
    for stmt in _split_statements(text):
        stmt_line = line + stmt[: len(stmt) - len(stmt.lstrip())].count("\n")
        line += stmt.count("\n")
        body = stmt.strip()
        if not body:
            continue
        head = body.split()[0]
        rest = body[len(head):].strip()
        if head == "alphabet":
            alphabet = rest.split()
        elif head == "nonterminals":
            nonterminals = rest.split()
        elif head == "start":
            if len(rest.split()) != 1:
                raise ParseError("start needs exactly one symbol", stmt_line, 1)
            start = rest.strip()
        elif head == "accept":
            acceptance = _parse_accept(rest, stmt_line)
        elif head == "rules":
            if rest:
                rules.extend(_parse_rule(rest, stmt_line))
        elif "->" in body:
            rules.extend(_parse_rule(body, stmt_line))
        else:
            raise ParseError(f"unknown statement {head!r}", stmt_line, 1)
    if nonterminals is None:
        nonterminals = list(dict.fromkeys(r[0] for r in rules))
    if start is None:
        if not nonterminals:
            raise ParseError("grammar has no start symbol", line, 1)
        start = nonterminals[0]
    if start not in nonterminals:
        nonterminals = [start] + list(nonterminals)
    if alphabet is None:
        seen = {}
        for _, rhs in rules:
            for s in rhs:
                if s not in nonterminals:
                    seen[s] = None
        alphabet = list(seen)
    try:
        return Grammar(tuple(nonterminals), tuple(alphabet), tuple(rules), start, acceptance)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _parse_rule(text, line):
    lhs, arrow, rhs = text.partition("->")
    if not arrow or len(lhs.split()) != 1:
        raise ParseError(f"malformed rule {text.strip()!r}", line, 1)
    lhs = lhs.strip()
    out = []
    for alt in rhs.split("|"):
        syms = alt.split()
        if syms == ["eps"] or syms == ["ϵ"]:
            syms = []
        elif not syms:
            raise ParseError(f"empty alternative in rule for {lhs} (write eps)", line, 1)
        out.append((lhs, tuple(syms)))
    return out


def _parse_sets(text, line):
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError("expected a braced set", line, 1)
    return text[1:-1]


def _parse_accept(rest, line):
    kind, _, sets = rest.partition(" ")
    sets = sets.strip()
    if kind == "buchi":
        inner = _parse_sets(sets, line)
        return Buchi(frozenset(s.strip() for s in inner.split(",") if s.strip()))
    if kind == "muller":
        inner = _parse_sets(sets, line).strip()
        family = []
        for m in re.finditer(r"\{([^{}]*)\}", inner):
            family.append(frozenset(s.strip() for s in m.group(1).split(",") if s.strip()))
        leftover = re.sub(r"\{[^{}]*\}", "", inner).replace(",", "").strip()
        if leftover:
            raise ParseError("malformed Muller family", line, 1)
        return Muller(frozenset(family))
    raise ParseError(f"unknown acceptance kind {kind!r}", line, 1)


def _fmt_set(s):
    return "{" + ",".join(sorted(s)) + "}"


def format_grammar(g: Grammar) -> str:
    lines = [
        f"alphabet {' '.join(g.alphabet)};",
        f"nonterminals {' '.join(g.nonterminals)};",
        f"start {g.start};",
    ]
    groups = []
    for x in g.nonterminals:
        alts = [" ".join(r.rhs) if r.rhs else "eps" for r in g.rules_by_lhs[x]]
        if alts:
            groups.append(f"  {x} -> {' | '.join(alts)};")
    if groups:
        lines.append("rules")
        lines.extend(groups)
    if isinstance(g.acceptance, Buchi):
        lines.append(f"accept buchi {_fmt_set(g.acceptance.designated)};")
    elif isinstance(g.acceptance, Muller):
        fam = sorted((sorted(f) for f in g.acceptance.family))
        lines.append("accept muller {" + ",".join("{" + ",".join(f) + "}" for f in fam) + "};")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# structure


def dependency_graph(g: Grammar) -> nx.DiGraph:
    """Edge X -> Y iff some rule X -> p Y q exists."""
    graph = nx.DiGraph()
    graph.add_nodes_from(g.nonterminals)
    for r in g.rules:
        for s in g.nts_of(r.rhs):
            graph.add_edge(r.lhs, s)
    return graph


@dataclass(frozen=True)
class Components:
    sccs: tuple  # tuple of frozensets, ordered by (height, sorted members)
    heights: dict = field(hash=False)
    component_of: dict = field(hash=False)


def strong_components_and_heights(g: Grammar) -> Components:
    """Strong components of the dependency graph and nonterminal heights.

    A component with no edges to other components has height 0; otherwise its
    height is one more than the largest height among the components it reaches.
    """
    graph = dependency_graph(g)
    cond = nx.condensation(graph)
    comp_height = {}
    for c in reversed(list(nx.topological_sort(cond))):
        succs = list(cond.successors(c))
        comp_height[c] = 1 + max(comp_height[s] for s in succs) if succs else 0
    comps = {c: frozenset(cond.nodes[c]["members"]) for c in cond.nodes}
    heights, component_of = {}, {}
    for c, members in comps.items():
        for x in members:
            heights[x] = comp_height[c]
            component_of[x] = members
    order = sorted(comps, key=lambda c: (comp_height[c], sorted(comps[c])))
    return Components(tuple(comps[c] for c in order), heights, component_of)


def is_linear(g: Grammar) -> bool:
    return all(len(g.nts_of(r.rhs)) <= 1 for r in g.rules)


def accessible_from(g: Grammar, x: str) -> set:
    return set(nx.descendants(dependency_graph(g), x))


# ---------------------------------------------------------------------------
# productivity


def finite_productive(g: Grammar) -> frozenset:
    """Nonterminals deriving some finite terminal word by a finite tree."""
    prod = set()
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.lhs not in prod and all(s in prod for s in g.nts_of(r.rhs)):
                prod.add(r.lhs)
                changed = True
    return frozenset(prod)


def _closure(g, base, step_ok):
    """Least Y containing ``base`` closed under: some rule X -> p with step_ok(X, nts(p), Y)."""
    y = set(base)
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.lhs not in y and step_ok(r.lhs, g.nts_of(r.rhs), y):
                y.add(r.lhs)
                changed = True
    return y


def _buchi_productive(g: Grammar) -> frozenset:
    f0 = finite_productive(g)
    des = g.designated

    def after_checkpoint(rec):
        return _closure(g, f0 | rec, lambda x, nts, y: all(s in y for s in nts))

    def step(rec):
        after = after_checkpoint(rec)
        before = _closure(
            g, f0,
            lambda x, nts, y: all(s in (after if x in des else y) for s in nts),
        )
        ok = set()
        for r in g.rules:
            pool = after if r.lhs in des else before
            if all(s in pool for s in g.nts_of(r.rhs)):
                ok.add(r.lhs)
        return ok

    rec = set(g.nonterminals)
    while True:
        nxt = step(rec) & rec
        if nxt == rec:
            break
        rec = nxt
    return frozenset(after_checkpoint(rec))


def derivation_game(g: Grammar, wins0) -> MullerGame:
    """Game where player 0 picks rules and player 1 picks a nonterminal child.

    Player 0 wins from X exactly when X roots a proper derivation tree whose
    frontier is a terminal word.
    """
    owner, succ, color = {}, {}, {}
    for x in g.nonterminals:
        owner[("N", x)] = 0
        color[("N", x)] = x
        succ[("N", x)] = [("R", i) for i, r in enumerate(g.rules) if r.lhs == x]
    for i, r in enumerate(g.rules):
        owner[("R", i)] = 1
        color[("R", i)] = None
        succ[("R", i)] = [("N", s) for s in dict.fromkeys(g.nts_of(r.rhs))]
    return MullerGame(owner, succ, color, wins0)


def game_productive(g: Grammar, wins0=None) -> frozenset:
    if wins0 is None:
        acc = g.acceptance
        wins0 = acc.accepts if acc is not None else (lambda s: False)
    w0, _ = derivation_game(g, wins0).solve()
    return frozenset(v[1] for v in w0 if v[0] == "N")


def infinite_productive(g: Grammar) -> frozenset:
    """Nonterminals rooting a proper derivation tree with terminal frontier (finite trees included)."""
    if isinstance(g.acceptance, Buchi):
        return _buchi_productive(g)
    if isinstance(g.acceptance, Muller):
        return game_productive(g)
    return finite_productive(g)


def epsilon_grammar(g: Grammar) -> Grammar:
    return g.replace(rules=tuple(r for r in g.rules if not any(s in g.alphabet for s in r.rhs)))


def epsilon_infinite(g: Grammar) -> frozenset:
    """Nonterminals X with X deriving the empty word by a proper (possibly infinite) tree."""
    return infinite_productive(epsilon_grammar(g))


def check_scattered_normal_form(g: Grammar, well_ordered: bool = False) -> bool:
    """Every rule inside a component meeting the designated set has at most one
    occurrence of that component; with ``well_ordered`` the occurrence must be last."""
    comps = strong_components_and_heights(g)
    des = g.designated
    for r in g.rules:
        comp = comps.component_of[r.lhs]
        if not comp & des:
            continue
        positions = [i for i, s in enumerate(r.rhs) if s in comp]
        if len(positions) > 1:
            return False
        if well_ordered and positions and positions[0] != len(r.rhs) - 1:
            return False
    return True


def normal_form_violations(g: Grammar, well_ordered: bool = False) -> list:
    comps = strong_components_and_heights(g)
    bad = []
    for r in g.rules:
        comp = comps.component_of[r.lhs]
        if not comp & g.designated:
            continue
        positions = [i for i, s in enumerate(r.rhs) if s in comp]
        if len(positions) > 1 or (well_ordered and positions and positions[0] != len(r.rhs) - 1):
            bad.append(r)
    return bad

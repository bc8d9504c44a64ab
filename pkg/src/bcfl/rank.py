"""Rank statistics of Buchi languages of scattered words.

Ranges are computed bottom-up over the decomposition into plain and linear
nodes. A node K over letters B contributes, for every occurrence profile
(H0, H1) of K, the ranks obtainable after replacing each letter b by a word
of L_b. Every language is tracked as (ranks of its nonempty words, whether it
contains the empty word).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .automata import grammar_automaton, inf_profiles
from .decompose import DecompositionDAG, decompose
from .errors import NotLinear
from .grammar import Grammar, is_linear


@dataclass(frozen=True)
class Range:
    ranks: frozenset  # ranks of nonempty words
    has_empty: bool

    @property
    def values(self) -> frozenset:
        return self.ranks | ({0} if self.has_empty else frozenset())

    @property
    def is_empty(self) -> bool:
        return not self.ranks and not self.has_empty


LETTER = Range(frozenset({0}), False)


def occurrence_sets_cfg(k: Grammar, start: str | None = None) -> frozenset:
    """Letter sets of the finite words of a plain grammar (least fixpoint)."""
    sets = {x: set() for x in k.nonterminals}
    changed = True
    while changed:
        changed = False
        for r in k.rules:
            partial = {frozenset()}
            for s in r.rhs:
                opts = sets[s] if k.is_nonterminal(s) else {frozenset([s])}
                partial = {p | o for p in partial for o in opts}
                if not partial:
                    break
            new = partial - sets[r.lhs]
            if new:
                sets[r.lhs] |= new
                changed = True
    return frozenset(sets[start or k.start])


def gamma_linear(g: Grammar) -> frozenset:
    """Profiles (finitely occurring letters, infinitely occurring letters) of a linear grammar."""
    if not is_linear(g):
        raise NotLinear("grammar is not linear")
    return inf_profiles(grammar_automaton(g), epsilon_cycles_finite=True)


def node_profiles(node) -> frozenset:
    if node.is_linear:
        return gamma_linear(node.grammar)
    return frozenset((h, frozenset()) for h in occurrence_sets_cfg(node.grammar))


def _letter_options(rng: Range, infinite: bool):
    """(can vanish, ranks reachable when some occurrence stays nonempty)."""
    opts = set(rng.ranks) if (rng.has_empty or not infinite) else set()
    if infinite and rng.ranks:
        low = min(rng.ranks)
        # infinitely many nonempty images: the recurring ranks give m + 1,
        # finitely many larger images can still dominate
        opts |= {m + 1 for m in rng.ranks}
        opts |= {n for n in rng.ranks if n > low}
    return rng.has_empty, opts


def _combine(options) -> Range:
    states = {None}  # None: everything so far vanished
    for vanish, opts in options:
        nxt = set()
        for s in states:
            if vanish:
                nxt.add(s)
            for v in opts:
                nxt.add(v if s is None else max(s, v))
        states = nxt
    return Range(frozenset(s for s in states if s is not None), None in states)


def profile_range(h0, h1, ranges: dict) -> Range:
    options = [_letter_options(ranges.get(b, LETTER), False) for b in sorted(h0)]
    options += [_letter_options(ranges.get(c, LETTER), True) for c in sorted(h1)]
    if any(not v and not o for v, o in options):
        return Range(frozenset(), False)
    return _combine(options)


def node_range(profiles, ranges: dict) -> Range:
    ranks, empty = set(), False
    for h0, h1 in profiles:
        r = profile_range(h0, h1, ranges)
        ranks |= r.ranks
        empty |= r.has_empty
    return Range(frozenset(ranks), empty)


def _min_profile(h0, h1, mins: dict):
    """Least nonempty rank and emptiness for one profile, one integer per letter."""
    letters = []
    for b, infinite in [(b, False) for b in h0] + [(c, True) for c in h1]:
        low, empty = mins.get(b, (0, False))
        if low is None and not empty:
            return None, False
        if low is None:
            letters.append((True, None))
        else:
            letters.append((empty, low if (empty or not infinite) else low + 1))
    forced = [v for vanish, v in letters if not vanish]
    if forced:
        return max(forced), False
    free = [v for _, v in letters if v is not None]
    return (min(free) if free else None), True


def node_min(profiles, mins: dict):
    best, empty = None, False
    for h0, h1 in profiles:
        low, e = _min_profile(h0, h1, mins)
        empty |= e
        if low is not None and (best is None or low < best):
            best = low
    return best, empty


@dataclass(frozen=True)
class RankReport:
    rrange: frozenset
    per_node: dict = field(hash=False)
    rmin_shortcut: float = math.inf

    @property
    def rmax(self):
        return max(self.rrange) if self.rrange else -math.inf

    @property
    def rmin(self):
        return min(self.rrange) if self.rrange else math.inf

    def to_dict(self) -> dict:
        def num(x):
            if x == math.inf:
                return "inf"
            if x == -math.inf:
                return "-inf"
            return int(x)

        return {
            "schema": 1,
            "rrange": sorted(self.rrange),
            "rmax": num(self.rmax),
            "rmin": num(self.rmin),
            "perNode": {x: sorted(v) for x, v in sorted(self.per_node.items())},
        }


def rank_report(g: Grammar) -> RankReport:
    dag: DecompositionDAG = decompose(g)
    ranges, mins = {}, {}
    for x in dag.order():
        node = dag.nodes[x]
        profiles = node_profiles(node)
        rng = node_range(profiles, ranges)
        used = set().union(*(h0 | h1 for h0, h1 in profiles)) if profiles else set()
        below = [max(ranges.get(b, LETTER).values) for b in used if ranges.get(b, LETTER).values]
        if rng.values and below:
            assert max(rng.values) <= 1 + max(below), f"rank bound broken at {x}"
        if node.is_linear:
            assert node_range(profiles, {}).values <= {0, 1}, f"linear node {x} exceeds rank 1"
        ranges[x] = rng
        mins[x] = node_min(profiles, mins)
    root = ranges.get(dag.root, Range(frozenset(), False))
    low, empty = mins.get(dag.root, (None, False))
    shortcut = min([v for v in (low, 0 if empty else None) if v is not None], default=math.inf)
    return RankReport(root.values, {x: r.values for x, r in ranges.items()}, shortcut)


def rrange(g: Grammar) -> frozenset:
    return rank_report(g).rrange


def rmax(g: Grammar):
    return rank_report(g).rmax


def rmin(g: Grammar):
    return rank_report(g).rmin

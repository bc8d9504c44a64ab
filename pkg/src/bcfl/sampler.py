"""Bounded enumeration of words generated by lasso-shaped proper derivation trees.

A lasso tree is built from finite rule applications and loops: a closed walk
X -> ... -> X through rules, each step continuing into one nonterminal
occurrence while the other occurrences are filled by smaller sampled trees.
Repeating the walk forever gives the word l^w r^-w where l and r collect the
left and right side words of one period. A loop is kept only when the set of
nonterminals it visits satisfies the acceptance condition.

Every sampled term carries a witness that :func:`validate` replays without
using any of the enumeration code.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .grammar import Buchi, Grammar, Muller
from .words import (
    Letter,
    WordTerm,
    canonical,
    concat,
    nesting,
    neg_omega,
    omega,
    size,
)


@dataclass(frozen=True)
class SampleConfig:
    max_finite_depth: int = 6
    max_lasso_length: int = 3
    max_nesting: int = 2
    max_term_size: int = 8
    max_loop_size: int = 0
    seedless: bool = True

    def __post_init__(self):
        for name in ("max_finite_depth", "max_lasso_length", "max_nesting", "max_term_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    @property
    def loop_size(self) -> int:
        # raw size bound for one loop period; 0 means the term size bound
        return self.max_loop_size or self.max_term_size


# witnesses: ("rule", rule_index, child_witnesses) | ("loop", X, steps)
# a step is (rule_index, continuation_position, side_witnesses)


_letter = lru_cache(maxsize=None)(Letter)


def _fillings(g, seq, pools, budget):
    """All ways to fill the nonterminals of ``seq`` from ``pools``; yields (parts, raw size, witnesses)."""
    results = [((), 0, ())]
    for s in seq:
        pool = pools.get(s)
        if pool is None:
            letter = _letter(s)
            results = [(p + (letter,), n + 1, w) for p, n, w in results if n + 1 <= budget]
            continue
        nxt = []
        for p, n, w in results:
            for term, (tsize, wit) in pool.items():
                if n + tsize <= budget:
                    nxt.append((p + (term,), n + tsize, w + (wit,)))
        results = nxt
        if not results:
            break
    return results


def _accepts(acc, inf_set) -> bool:
    return acc is not None and acc.accepts(inf_set)


def _distances_to(g, x):
    """Fewest rule steps from each nonterminal to an occurrence of x."""
    dist = {x: 0}
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            best = min((dist[s] + 1 for s in r.rhs if s in dist), default=None)
            if best is not None and best < dist.get(r.lhs, best + 1):
                dist[r.lhs] = best
                changed = True
    return dist


def _closed_walks(g, x, pools, cfg, dist):
    """Closed walks from x with their side words and visited sets."""
    budget = cfg.loop_size
    frontier = [(x, frozenset(), (), (), 0, ())]
    seen = set()
    by_lhs = {}
    for ri, r in enumerate(g.rules):
        by_lhs.setdefault(r.lhs, []).append((ri, r))
    for length in range(cfg.max_lasso_length):
        remaining = cfg.max_lasso_length - length - 1
        nxt = []
        for y, visited, left, right, raw, steps in frontier:
            visited = visited | {y}
            for ri, r in by_lhs.get(y, ()):
                for k, z in enumerate(r.rhs):
                    if z not in pools or dist.get(z, remaining + 1) > remaining:
                        continue
                    for lparts, ln, lw in _fillings(g, r.rhs[:k], pools, budget - raw):
                        for rparts, rn, rw in _fillings(g, r.rhs[k + 1:], pools, budget - raw - ln):
                            new_left, new_right = left + lparts, rparts + right
                            key = (z, visited, canonical(concat(*new_left)), canonical(concat(*new_right)))
                            if key in seen:
                                continue
                            seen.add(key)
                            step = (ri, k, lw + rw)
                            item = (z, visited, new_left, new_right, raw + ln + rn, steps + (step,))
                            if z == x:
                                yield item
                            nxt.append(item)
        frontier = nxt


def _loop_term(left_parts, right_parts) -> WordTerm:
    return canonical(concat(omega(concat(*left_parts)), neg_omega(concat(*right_parts))))


def sample_with_witnesses(g: Grammar, cfg: SampleConfig = SampleConfig(), start: Optional[str] = None) -> dict:
    """Map sampled term -> witness for derivations rooted at ``start`` (default: the start symbol)."""
    pools = sample_pools(g, cfg)
    return {t: w for t, (_, w) in pools[start or g.start].items()}


def sample_pools(g: Grammar, cfg: SampleConfig = SampleConfig()) -> dict:
    """Per nonterminal, map sampled term -> (size, witness)."""
    pools = {x: {} for x in g.nonterminals}

    def add(target, term, wit):
        term = canonical(term)
        n = size(term)
        if n <= cfg.max_term_size and nesting(term) <= cfg.max_nesting and term not in target:
            target[term] = (n, wit)

    dists = {x: _distances_to(g, x) for x in g.nonterminals}
    looping = [x for x in g.nonterminals if any(s in dists[x] for r in g.rules_by_lhs[x] for s in r.rhs)]
    # walks read pools only through side fillings, i.e. rules with two or more nonterminals
    side = sorted({s for r in g.rules if sum(s in pools for s in r.rhs) > 1 for s in r.rhs if s in pools})
    # pools only grow, so a step whose input pool sizes were seen before can add nothing new
    done = set()
    for _ in range(cfg.max_finite_depth):
        new = {x: dict(p) for x, p in pools.items()}
        for ri, r in enumerate(g.rules):
            key = ("rule", ri, tuple(len(pools[s]) for s in r.rhs if s in pools))
            if key in done:
                continue
            done.add(key)
            for parts, _, ws in _fillings(g, r.rhs, pools, max(cfg.loop_size, cfg.max_term_size)):
                add(new[r.lhs], concat(*parts), ("rule", ri, ws))
        side_sizes = tuple(len(pools[s]) for s in side)
        for x in looping:
            if ("loop", x, side_sizes) in done:
                continue
            done.add(("loop", x, side_sizes))
            for _, visited, left, right, _, steps in _closed_walks(g, x, pools, cfg, dists[x]):
                if _accepts(g.acceptance, visited):
                    add(new[x], _loop_term(left, right), ("loop", x, steps))
        if all(len(new[x]) == len(pools[x]) for x in pools):
            break
        pools = new
    return pools


def sample(g: Grammar, cfg: SampleConfig = SampleConfig()) -> frozenset:
    return frozenset(sample_with_witnesses(g, cfg))


# ---------------------------------------------------------------------------
# independent replay


class InvalidWitness(Exception):
    pass


def replay(g: Grammar, wit) -> WordTerm:
    """Recompute the word of a witness tree, checking every rule and loop."""
    kind = wit[0]
    if kind == "rule":
        _, ri, children = wit
        rule = g.rules[ri]
        nts = [s for s in rule.rhs if g.is_nonterminal(s)]
        if len(nts) != len(children):
            raise InvalidWitness(f"rule {rule} expects {len(nts)} subtrees")
        out, it = [], iter(children)
        for s in rule.rhs:
            if g.is_nonterminal(s):
                child = next(it)
                if _root(g, child) != s:
                    raise InvalidWitness(f"subtree for {s} is rooted elsewhere")
                out.append(replay(g, child))
            else:
                out.append(Letter(s))
        return concat(*out)
    _, x, steps = wit
    current = x
    left, right = [], []
    inf_set = set()
    for ri, k, sides in steps:
        rule = g.rules[ri]
        if rule.lhs != current:
            raise InvalidWitness(f"loop step {rule} does not continue from {current}")
        inf_set.add(current)
        it = iter(sides)
        lw, rw = [], []
        for i, s in enumerate(rule.rhs):
            if i == k:
                continue
            if g.is_nonterminal(s):
                child = next(it)
                if _root(g, child) != s:
                    raise InvalidWitness(f"side subtree for {s} is rooted elsewhere")
                piece = replay(g, child)
            else:
                piece = Letter(s)
            (lw if i < k else rw).append(piece)
        left.extend(lw)
        right[:0] = rw
        current = rule.rhs[k]
    if current != x:
        raise InvalidWitness("loop does not close")
    acc = g.acceptance
    if isinstance(acc, Buchi):
        ok = bool(inf_set & acc.designated)
    elif isinstance(acc, Muller):
        ok = frozenset(inf_set) in acc.family
    else:
        ok = False
    if not ok:
        raise InvalidWitness(f"loop through {sorted(inf_set)} is not accepting")
    return concat(omega(concat(*left)), neg_omega(concat(*right)))


def _root(g, wit):
    return g.rules[wit[1]].lhs if wit[0] == "rule" else wit[1]


def validate(g: Grammar, term: WordTerm, wit, start: Optional[str] = None) -> bool:
    if _root(g, wit) != (start or g.start):
        return False
    try:
        return canonical(replay(g, wit)) == canonical(term)
    except InvalidWitness:
        return False


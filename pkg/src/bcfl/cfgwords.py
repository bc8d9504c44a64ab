"""Finite words of plain context-free grammars: bounded enumeration and an Earley recognizer."""

from __future__ import annotations

from typing import Sequence

from .grammar import Grammar


def _nullable(g: Grammar) -> set:
    nullable = set()
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.lhs not in nullable and all(s in nullable for s in r.rhs):
                nullable.add(r.lhs)
                changed = True
    return nullable


def words_up_to(g: Grammar, n: int, start: str | None = None) -> frozenset:
    """All words of length <= n derivable from ``start`` by finite derivations.

    Words are built in layers of equal length. Shorter layers are complete when
    a layer is started, so the only circular case is a rule whose other symbols
    all derive the empty word; those are closed by propagation.
    """
    layers = {x: [] for x in g.nonterminals}
    nullable = _nullable(g)
    units = []  # (lhs, y): lhs -> alpha y beta with alpha, beta nullable
    for r in g.rules:
        for i, y in enumerate(r.rhs):
            if g.is_nonterminal(y) and all(s in nullable for k, s in enumerate(r.rhs) if k != i):
                units.append((r.lhs, y))

    def pieces(sym, length):
        if not g.is_nonterminal(sym):
            return [(sym,)] if length == 1 else []
        if length == 0:
            return [()] if sym in nullable else []
        return layers[sym][length] if length < len(layers[sym]) else []

    def fill(rhs, length, maximum):
        # words of exactly ``length`` with every nonterminal piece shorter than ``maximum``
        if not rhs:
            return [()] if length == 0 else []
        head, rest = rhs[0], rhs[1:]
        out = []
        top = 1 if not g.is_nonterminal(head) else min(length, maximum - 1)
        for k in range(0 if g.is_nonterminal(head) else 1, top + 1):
            firsts = pieces(head, k)
            if not firsts:
                continue
            tails = fill(rest, length - k, maximum)
            out.extend(f + t for f in firsts for t in tails)
        return out

    for length in range(n + 1):
        cur = {x: set() for x in g.nonterminals}
        if length == 0:
            for x in nullable:
                cur[x].add(())
        else:
            for r in g.rules:
                cur[r.lhs].update(fill(r.rhs, length, length))
            changed = True
            while changed:
                changed = False
                for x, y in units:
                    if not cur[y] <= cur[x]:
                        cur[x] |= cur[y]
                        changed = True
        for x in g.nonterminals:
            layers[x].append(cur[x])
    return frozenset().union(*layers[start or g.start])


def earley_recognize(g: Grammar, w: Sequence[str], start: str | None = None) -> bool:
    """Earley recognition with the usual nullable-completion fix."""
    w = tuple(w)
    start = start or g.start
    nullable = _nullable(g)
    by_lhs = {}
    for r in g.rules:
        by_lhs.setdefault(r.lhs, []).append((r.lhs, r.rhs))
    top = ("<top>", (start,))
    chart = [set() for _ in range(len(w) + 1)]
    # waiting[i][sym]: items of chart[i] whose dot is before sym
    waiting = [{} for _ in range(len(w) + 1)]
    chart[0].add((top, 0, 0))
    for i in range(len(w) + 1):
        agenda = list(chart[i])

        def push(item):
            if item not in chart[i]:
                chart[i].add(item)
                agenda.append(item)

        while agenda:
            (lhs, rhs), dot, origin = item = agenda.pop()
            if dot < len(rhs):
                sym = rhs[dot]
                if g.is_nonterminal(sym):
                    waiting[i].setdefault(sym, []).append(item)
                    for rule in by_lhs.get(sym, ()):
                        push((rule, 0, i))
                    if sym in nullable:
                        push(((lhs, rhs), dot + 1, origin))
                elif i < len(w) and w[i] == sym:
                    chart[i + 1].add(((lhs, rhs), dot + 1, origin))
            else:
                # origin == i only for empty completions, already covered by the nullable advance
                for (l2, r2), d2, o2 in list(waiting[origin].get(lhs, ())):
                    push(((l2, r2), d2 + 1, o2))
    return (top, 1, 0) in chart[len(w)]

"""Two-player Muller games on finite arenas (McNaughton-Zielonka recursion).

Player 0 wins an infinite play when the set of colors seen infinitely often
satisfies ``wins0``; a player who cannot move loses. Arenas here are tiny
(derived from grammars with a handful of nonterminals), so the exponential
recursion is fine.
"""

from __future__ import annotations

from typing import Callable, Hashable, Mapping


class MullerGame:
    def __init__(self, owner: Mapping, succ: Mapping, color: Mapping, wins0: Callable[[frozenset], bool]):
        self.owner = dict(owner)
        self.succ = {v: tuple(ws) for v, ws in succ.items()}
        self.color = dict(color)
        self.wins0 = wins0
        self.pred = {v: [] for v in self.owner}
        for v, ws in self.succ.items():
            for w in ws:
                self.pred[w].append(v)

    def attractor(self, arena: set, target: set, player: int) -> set:
        attr = set(target) & arena
        queue = list(attr)
        # remaining[v] counts successors of opponent vertex v not yet attracted
        remaining = {}
        for v in arena:
            if self.owner[v] != player:
                remaining[v] = sum(1 for w in self.succ[v] if w in arena)
        while queue:
            w = queue.pop()
            for v in self.pred[w]:
                if v not in arena or v in attr:
                    continue
                if self.owner[v] == player:
                    attr.add(v)
                    queue.append(v)
                else:
                    remaining[v] -= 1
                    if remaining[v] == 0:
                        attr.add(v)
                        queue.append(v)
        return attr

    def solve(self) -> tuple:
        """Return the winning regions (W0, W1)."""
        arena = set(self.owner)
        stuck1 = {v for v in arena if self.owner[v] == 1 and not self.succ[v]}
        w0 = self.attractor(arena, stuck1, 0)
        arena -= w0
        stuck0 = {v for v in arena if self.owner[v] == 0 and not self.succ[v]}
        w1 = self.attractor(arena, stuck0, 1)
        arena -= w1
        r0, r1 = self._solve(frozenset(arena))
        return w0 | r0, w1 | r1

    def _solve(self, arena: frozenset):
        if not arena:
            return set(), set()
        colors = frozenset(self.color[v] for v in arena if self.color.get(v) is not None)
        sigma = 0 if self.wins0(colors) else 1
        for c in sorted(colors, key=repr):
            target = {v for v in arena if self.color.get(v) == c}
            attr = self.attractor(set(arena), target, sigma)
            sub = self._solve(arena - attr)
            if sub[1 - sigma]:
                opp = self.attractor(set(arena), sub[1 - sigma], 1 - sigma)
                rest = self._solve(arena - opp)
                out = [None, None]
                out[1 - sigma] = opp | rest[1 - sigma]
                out[sigma] = rest[sigma]
                return out[0], out[1]
        out = [set(), set()]
        out[sigma] = set(arena)
        return out[0], out[1]

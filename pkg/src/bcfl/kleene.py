"""Regular sets of word pairs and the Kleene form of linear Buchi languages.

A pair (u, v) acts on a language L by wrapping: (u, v) o L = u L v. Pairs form
a monoid under (u, v)(u', v') = (uu', v'v), so the principal path of a linear
derivation reads off as a product of rule pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import IdentityCycle, NotLinear, NotWellOrdered
from .grammar import Buchi, Grammar, Muller, is_linear
from .words import EMPTY, WordTerm, concat, neg_omega, omega, word

Pair = tuple  # (tuple of letters, tuple of letters)
IDENTITY: Pair = ((), ())


def pair_product(p: Pair, q: Pair) -> Pair:
    return (tuple(p[0]) + tuple(q[0]), tuple(q[1]) + tuple(p[1]))


def product_of(pairs: Iterable[Pair]) -> Pair:
    out = IDENTITY
    for p in pairs:
        out = pair_product(out, p)
    return out


def apply_pair(p: Pair, t: WordTerm) -> WordTerm:
    return concat(word(p[0]), t, word(p[1]))


def _w(letters) -> str:
    if not letters:
        return "eps"
    return ("" if all(len(x) == 1 for x in letters) else " ").join(letters)


# ---------------------------------------------------------------------------
# expressions


class PairExpr:
    def __str__(self):
        return format_pair_expr(self)


@dataclass(frozen=True)
class FinitePairs(PairExpr):
    pairs: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset((tuple(u), tuple(v)) for u, v in self.pairs))


@dataclass(frozen=True)
class Union(PairExpr):
    left: PairExpr
    right: PairExpr


@dataclass(frozen=True)
class Product(PairExpr):
    left: PairExpr
    right: PairExpr


@dataclass(frozen=True)
class Star(PairExpr):
    body: PairExpr


EMPTY_PAIRS = FinitePairs()
ONE = FinitePairs(frozenset([IDENTITY]))
_FOLD_LIMIT = 32


def pairs(*ps) -> FinitePairs:
    return FinitePairs(frozenset((tuple(u), tuple(v)) for u, v in ps))


def union(a: PairExpr, b: PairExpr) -> PairExpr:
    if is_empty(a):
        return b
    if is_empty(b) or a == b:
        return a
    if isinstance(a, FinitePairs) and isinstance(b, FinitePairs):
        return FinitePairs(a.pairs | b.pairs)
    return Union(a, b)


def product(a: PairExpr, b: PairExpr) -> PairExpr:
    if is_empty(a) or is_empty(b):
        return EMPTY_PAIRS
    if a == ONE:
        return b
    if b == ONE:
        return a
    if isinstance(a, FinitePairs) and isinstance(b, FinitePairs) and len(a.pairs) * len(b.pairs) <= _FOLD_LIMIT:
        return FinitePairs(frozenset(pair_product(p, q) for p in a.pairs for q in b.pairs))
    return Product(a, b)


def star(a: PairExpr) -> PairExpr:
    if is_empty(a) or a == ONE:
        return ONE
    if isinstance(a, Star):
        return a
    if isinstance(a, FinitePairs) and IDENTITY in a.pairs:
        rest = FinitePairs(a.pairs - {IDENTITY})
        return star(rest)
    return Star(a)


def is_empty(e: PairExpr) -> bool:
    if isinstance(e, FinitePairs):
        return not e.pairs
    if isinstance(e, Union):
        return is_empty(e.left) and is_empty(e.right)
    if isinstance(e, Product):
        return is_empty(e.left) or is_empty(e.right)
    return False


def has_nonidentity(e: PairExpr) -> bool:
    """Whether some member pair has a nonempty component."""
    if isinstance(e, FinitePairs):
        return any(p != IDENTITY for p in e.pairs)
    if isinstance(e, Union):
        return has_nonidentity(e.left) or has_nonidentity(e.right)
    if isinstance(e, Product):
        return not is_empty(e) and (has_nonidentity(e.left) or has_nonidentity(e.right))
    return has_nonidentity(e.body)


def first_components_only(e: PairExpr) -> bool:
    if isinstance(e, FinitePairs):
        return all(not v for _, v in e.pairs)
    if isinstance(e, Star):
        return first_components_only(e.body)
    return first_components_only(e.left) and first_components_only(e.right)


def contains(e: PairExpr, p: Pair) -> bool:
    u, v = tuple(p[0]), tuple(p[1])
    return _contains(e, u, v)


@lru_cache(maxsize=None)
def _contains(e, u, v):
    if isinstance(e, FinitePairs):
        return (u, v) in e.pairs
    if isinstance(e, Union):
        return _contains(e.left, u, v) or _contains(e.right, u, v)
    if isinstance(e, Product):
        for i in range(len(u) + 1):
            for j in range(len(v) + 1):
                # left factor takes u[:i] and the outer tail v[j:]
                if _contains(e.left, u[:i], v[j:]) and _contains(e.right, u[i:], v[:j]):
                    return True
        return False
    if not u and not v:
        return True
    for i in range(len(u) + 1):
        for j in range(len(v) + 1):
            if (i or len(v) - j) and _contains(e.body, u[:i], v[j:]) and _contains(e, u[i:], v[:j]):
                return True
    return False


def enumerate_pairs(e: PairExpr, max_len: int) -> frozenset:
    """All member pairs with |u| + |v| <= max_len."""

    def ok(p):
        return len(p[0]) + len(p[1]) <= max_len

    def go(x):
        if isinstance(x, FinitePairs):
            return {p for p in x.pairs if ok(p)}
        if isinstance(x, Union):
            return go(x.left) | go(x.right)
        if isinstance(x, Product):
            left, right = go(x.left), go(x.right)
            return {q for a in left for b in right if ok(q := pair_product(a, b))}
        body = go(x.body)
        out = {IDENTITY}
        frontier = set(out)
        while frontier:
            nxt = {q for a in frontier for b in body if ok(q := pair_product(a, b))} - out
            out |= nxt
            frontier = nxt
        return out

    return frozenset(go(e))


def format_pair_expr(e: PairExpr) -> str:
    if isinstance(e, FinitePairs):
        items = sorted(e.pairs, key=lambda p: (len(p[0]) + len(p[1]), p))
        return "{" + ",".join(f"({_w(u)},{_w(v)})" for u, v in items) + "}"
    if isinstance(e, Union):
        return f"{format_pair_expr(e.left)} + {format_pair_expr(e.right)}"
    if isinstance(e, Product):
        return f"{_factor(e.left)} . {_factor(e.right)}"
    return f"{_factor(e.body)}*"


def _factor(e):
    s = format_pair_expr(e)
    return f"({s})" if isinstance(e, Union) or (isinstance(e, Product)) else s


# ---------------------------------------------------------------------------
# omega powers


def omega_power_sample(v: PairExpr, prefix: Sequence[Pair], cycle: Sequence[Pair]) -> WordTerm:
    """The word (u0 u1 ...)(... v1 v0) for the choice sequence prefix . cycle^w."""
    for p in list(prefix) + list(cycle):
        if not contains(v, p):
            raise ValueError(f"pair {p} is not a member")
    c = product_of(cycle)
    if c == IDENTITY:
        raise IdentityCycle("the repeated cycle of pairs is the identity")
    return apply_pair(product_of(prefix), omega_power_of_pair(c))


def omega_power_of_pair(c: Pair) -> WordTerm:
    left = omega(word(c[0])) if c[0] else EMPTY
    right = neg_omega(word(c[1])) if c[1] else EMPTY
    return concat(left, right)


# ---------------------------------------------------------------------------
# linear grammars


@dataclass(frozen=True)
class OmegaRepr:
    finite_part: Grammar
    summands: tuple  # of (U, V)

    def __str__(self):
        parts = ["L0"] + [f"({u}) o ({v})^w" for u, v in self.summands]
        return " + ".join(parts)


def _as_linear_buchi(g: Grammar) -> Grammar:
    if not is_linear(g):
        raise NotLinear("grammar is not linear")
    if isinstance(g.acceptance, Muller):
        from .automata import linear_mcfg_to_bcfg

        return linear_mcfg_to_bcfg(g)
    if g.acceptance is None:
        return g.replace(acceptance=Buchi())
    return g


def path_languages(g: Grammar, keep=()) -> dict:
    """Pair languages of nonempty rule paths between nonterminals whose
    intermediate nonterminals avoid ``keep``; states are eliminated in
    declaration order."""
    states = list(g.nonterminals)
    m = {(x, y): EMPTY_PAIRS for x in states for y in states}
    for r in g.rules:
        nts = [i for i, s in enumerate(r.rhs) if g.is_nonterminal(s)]
        if nts:
            k = nts[0]
            key = (r.lhs, r.rhs[k])
            m[key] = union(m[key], pairs((r.rhs[:k], r.rhs[k + 1:])))
    for k in states:
        if k in keep:
            continue
        loop = star(m[k, k])
        nxt = {}
        for i in states:
            for j in states:
                if i == k and j == k:
                    nxt[i, j] = product(m[k, k], loop)
                elif i == k:
                    nxt[i, j] = product(loop, m[k, j])
                elif j == k:
                    nxt[i, j] = product(m[i, k], loop)
                else:
                    nxt[i, j] = union(m[i, j], product(product(m[i, k], loop), m[k, j]))
        m = nxt
    return m


def linear_bcfg_to_kleene(g: Grammar) -> OmegaRepr:
    """Finite part plus one summand per designated q: U holds the paths from
    the start to a first visit of q, V the first-return loops at q."""
    from .transform import finite_fragment

    g = _as_linear_buchi(g)
    summands = []
    for q in g.nonterminals:
        if q not in g.designated:
            continue
        paths = path_languages(g, keep={q})
        u = ONE if q == g.start else paths[g.start, q]
        v = paths[q, q]
        if is_empty(u) or not has_nonidentity(v):
            continue
        summands.append((u, v))
    return OmegaRepr(finite_fragment(g), tuple(summands))


# ---------------------------------------------------------------------------
# well-ordered case: ordinary regular expressions


class Regex:
    def __str__(self):
        return format_regex(self)


@dataclass(frozen=True)
class Words(Regex):
    words: frozenset


@dataclass(frozen=True)
class Alt(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Cat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Rep(Regex):
    body: Regex


def project_first(e: PairExpr) -> Regex:
    if isinstance(e, FinitePairs):
        if any(v for _, v in e.pairs):
            raise NotWellOrdered("a pair has a nonempty second component")
        return Words(frozenset(u for u, _ in e.pairs))
    if isinstance(e, Union):
        return Alt(project_first(e.left), project_first(e.right))
    if isinstance(e, Product):
        return Cat(project_first(e.left), project_first(e.right))
    return Rep(project_first(e.body))


def wellordered_specialize(r: OmegaRepr) -> list:
    return [(project_first(u), project_first(v)) for u, v in r.summands]


def format_regex(r: Regex) -> str:
    if isinstance(r, Words):
        if not r.words:
            return "{}"
        items = sorted(r.words, key=lambda w: (len(w), w))
        if len(items) == 1:
            return _w(items[0])
        return "(" + "|".join(_w(w) for w in items) + ")"
    if isinstance(r, Alt):
        return f"({format_regex(r.left)}|{format_regex(r.right)})"
    if isinstance(r, Cat):
        return f"{format_regex(r.left)} {format_regex(r.right)}"
    inner = format_regex(r.body)
    return f"({inner})*" if " " in inner else f"{inner}*"


def regex_pattern(r: Regex) -> str:
    """Python ``re`` pattern for a regex over letters (letters escaped, words juxtaposed)."""
    if isinstance(r, Words):
        if not r.words:
            return "(?!)"
        return "(?:" + "|".join("".join(re.escape(x) for x in w) for w in sorted(r.words)) + ")"
    if isinstance(r, Alt):
        return f"(?:{regex_pattern(r.left)}|{regex_pattern(r.right)})"
    if isinstance(r, Cat):
        return regex_pattern(r.left) + regex_pattern(r.right)
    return f"(?:{regex_pattern(r.body)})*"


def regex_matches(r: Regex, w: Sequence[str]) -> bool:
    if any(len(x) != 1 for x in w):
        raise ValueError("regex matching needs single-character letters")
    return re.fullmatch(regex_pattern(r), "".join(w)) is not None


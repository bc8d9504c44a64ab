"""Symbolic scattered words.

A :class:`WordTerm` is built from letters by concatenation, omega-power and
minus-omega-power. Terms are immutable and hashable; the structural identity
of normalized terms is the term identity. :func:`canonical` applies a small
set of word-preserving rewrites (period reduction, rotation into a power) so
that different derivations of the same word usually meet in one term.
"""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterable, Mapping, Sequence, Union

from .errors import NotWellOrdered, ParseError


class WordTerm:
    __slots__ = ()

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Empty(WordTerm):
    pass


@dataclass(frozen=True)
class Letter(WordTerm):
    symbol: str


def _cached_hash(field: str):
    # composite terms are hashed constantly by the sampler, and structural hashing is recursive
    def __hash__(self):
        d = self.__dict__
        h = d.get("_hash")
        if h is None:
            h = d["_hash"] = hash((type(self).__name__, getattr(self, field)))
        return h

    return __hash__


@dataclass(frozen=True)
class Concat(WordTerm):
    parts: tuple
    __hash__ = _cached_hash("parts")

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("Concat needs at least two parts")
        for p in self.parts:
            if isinstance(p, (Concat, Empty)):
                raise ValueError("Concat parts must be flattened and nonempty")


@dataclass(frozen=True)
class OmegaPow(WordTerm):
    body: WordTerm
    __hash__ = _cached_hash("body")


@dataclass(frozen=True)
class NegOmegaPow(WordTerm):
    body: WordTerm
    __hash__ = _cached_hash("body")


EMPTY = Empty()


def concat(*parts: WordTerm) -> WordTerm:
    """Concatenation with flattening and removal of empty parts."""
    flat = []
    for p in parts:
        if isinstance(p, Concat):
            flat.extend(p.parts)
        elif isinstance(p, Empty):
            continue
        else:
            flat.append(p)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat))


def concat_all(parts: Iterable[WordTerm]) -> WordTerm:
    return concat(*parts)


def omega(body: WordTerm) -> WordTerm:
    return OmegaPow(body)


def neg_omega(body: WordTerm) -> WordTerm:
    return NegOmegaPow(body)


def word(letters: Iterable[str]) -> WordTerm:
    """The finite word with the given letters."""
    return concat(*(Letter(a) for a in letters))


def parts_of(t: WordTerm) -> tuple:
    if isinstance(t, Concat):
        return t.parts
    if isinstance(t, Empty):
        return ()
    return (t,)


# ---------------------------------------------------------------------------
# structural queries


def is_empty(t: WordTerm) -> bool:
    if isinstance(t, Empty):
        return True
    if isinstance(t, Letter):
        return False
    if isinstance(t, Concat):
        return all(is_empty(p) for p in t.parts)
    return is_empty(t.body)


def letters(t: WordTerm) -> frozenset:
    if isinstance(t, Letter):
        return frozenset([t.symbol])
    if isinstance(t, Concat):
        return frozenset().union(*(letters(p) for p in t.parts))
    if isinstance(t, (OmegaPow, NegOmegaPow)):
        return letters(t.body)
    return frozenset()


def letter_profile(t: WordTerm) -> tuple:
    """Pair (letters occurring a finite positive number of times, letters occurring infinitely often)."""
    counts = _counts(t)
    finite = frozenset(a for a, n in counts.items() if n is not None)
    infinite = frozenset(a for a, n in counts.items() if n is None)
    return finite, infinite


def _counts(t):
    # None encodes infinitely many occurrences
    if isinstance(t, Letter):
        return {t.symbol: 1}
    if isinstance(t, Concat):
        total = {}
        for p in t.parts:
            for a, n in _counts(p).items():
                if a in total:
                    total[a] = None if total[a] is None or n is None else total[a] + n
                else:
                    total[a] = n
        return total
    if isinstance(t, (OmegaPow, NegOmegaPow)):
        return {a: None for a in _counts(t.body)}
    return {}


def finite_letters(t: WordTerm):
    """The letter tuple of a finite term, or None when the term is infinite."""
    if isinstance(t, Empty):
        return ()
    if isinstance(t, Letter):
        return (t.symbol,)
    if isinstance(t, Concat):
        out = []
        for p in t.parts:
            sub = finite_letters(p)
            if sub is None:
                return None
            out.extend(sub)
        return tuple(out)
    return () if is_empty(t.body) else None


@lru_cache(maxsize=1 << 16)
def nesting(t: WordTerm) -> int:
    """Depth of nested nonempty omega / minus-omega powers."""
    if isinstance(t, Concat):
        return max(nesting(p) for p in t.parts)
    if isinstance(t, (OmegaPow, NegOmegaPow)):
        return 0 if is_empty(t.body) else 1 + nesting(t.body)
    return 0


@lru_cache(maxsize=1 << 16)
def size(t: WordTerm) -> int:
    if isinstance(t, Concat):
        return sum(size(p) for p in t.parts)
    if isinstance(t, (OmegaPow, NegOmegaPow)):
        return 1 + size(t.body)
    return 1 if isinstance(t, Letter) else 0


def rank(t: WordTerm) -> int:
    """Hausdorff rank of the denoted word."""
    if isinstance(t, (Empty, Letter)):
        return 0
    if isinstance(t, Concat):
        return max(rank(p) for p in t.parts)
    if is_empty(t.body):
        return 0
    return rank(t.body) + 1


class WordClass(str, Enum):
    EMPTY = "empty"
    FINITE = "finite"
    WELL_ORDERED_INFINITE = "well-ordered-infinite"
    SCATTERED = "scattered-not-well-ordered"


def _has_power(t, kind):
    if isinstance(t, Concat):
        return any(_has_power(p, kind) for p in t.parts)
    if isinstance(t, (OmegaPow, NegOmegaPow)):
        if is_empty(t.body):
            return False
        return isinstance(t, kind) or _has_power(t.body, kind)
    return False


def classify(t: WordTerm) -> WordClass:
    if is_empty(t):
        return WordClass.EMPTY
    if _has_power(t, NegOmegaPow):
        return WordClass.SCATTERED
    if _has_power(t, OmegaPow):
        return WordClass.WELL_ORDERED_INFINITE
    return WordClass.FINITE


def is_well_ordered(t: WordTerm) -> bool:
    return classify(t) is not WordClass.SCATTERED


# ---------------------------------------------------------------------------
# ordinals below epsilon_0 in Cantor normal form


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """``terms`` lists (exponent, coefficient) with strictly decreasing exponents."""

    terms: tuple = ()

    def __post_init__(self):
        for i, (e, c) in enumerate(self.terms):
            if not isinstance(e, Ordinal) or not isinstance(c, int) or c < 1:
                raise ValueError("bad Cantor normal form term")
            if i and not e < self.terms[i - 1][0]:
                raise ValueError("exponents must strictly decrease")

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are nonnegative")
        return cls(((ZERO, n),)) if n else ZERO

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_finite(self):
        return all(e.is_zero for e, _ in self.terms)

    def leading_exponent(self) -> "Ordinal":
        return self.terms[0][0] if self.terms else ZERO

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return e1 < e2
            if c1 != c2:
                return c1 < c2
        return len(self.terms) < len(other.terms)

    def __add__(self, other: "Ordinal") -> "Ordinal":
        if other.is_zero:
            return self
        lead = other.terms[0][0]
        kept = [t for t in self.terms if not t[0] < lead]
        if kept and kept[-1][0] == lead:
            e, c = kept.pop()
            return Ordinal(tuple(kept) + ((e, c + other.terms[0][1]),) + other.terms[1:])
        return Ordinal(tuple(kept) + other.terms)

    def times_omega(self) -> "Ordinal":
        if self.is_zero:
            return ZERO
        return Ordinal(((self.leading_exponent() + ONE, 1),))

    def __int__(self):
        if not self.is_finite:
            raise ValueError("infinite ordinal")
        return self.terms[0][1] if self.terms else 0

    def __str__(self):
        if self.is_zero:
            return "0"
        out = []
        for e, c in self.terms:
            if e.is_zero:
                out.append(str(c))
                continue
            base = "w" if e == ONE else f"w^{e}" if e.is_finite else f"w^({e})"
            out.append(base if c == 1 else f"{base}*{c}")
        return " + ".join(out)


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))


def order_type_cnf(t: WordTerm) -> Ordinal:
    """Order type of a well-ordered term, in Cantor normal form."""
    if isinstance(t, Empty):
        return ZERO
    if isinstance(t, Letter):
        return ONE
    if isinstance(t, Concat):
        total = ZERO
        for p in t.parts:
            total = total + order_type_cnf(p)
        return total
    if is_empty(t.body):
        return ZERO
    if isinstance(t, NegOmegaPow):
        raise NotWellOrdered(f"{format_term(t)} is not well-ordered")
    return order_type_cnf(t.body).times_omega()


# ---------------------------------------------------------------------------
# substitution and canonical forms


def substitute_term(t: WordTerm, mapping: Mapping[str, WordTerm]) -> WordTerm:
    if isinstance(t, Letter):
        return mapping.get(t.symbol, t)
    if isinstance(t, Concat):
        return concat(*(substitute_term(p, mapping) for p in t.parts))
    if isinstance(t, OmegaPow):
        return OmegaPow(substitute_term(t.body, mapping))
    if isinstance(t, NegOmegaPow):
        return NegOmegaPow(substitute_term(t.body, mapping))
    return t


def _primitive_root(parts):
    n = len(parts)
    for d in range(1, n):
        if n % d == 0 and parts[:d] * (n // d) == parts:
            return parts[:d]
    return parts


@lru_cache(maxsize=1 << 18)
def canonical(t: WordTerm) -> WordTerm:
    """Rewrite ``t`` to a canonical representative of the same word.

    Rules: powers of the empty word vanish; the body of a power is reduced to
    its primitive root; ``x (y x)^w`` becomes ``(x y)^w`` and symmetrically
    ``(x y)^-w x`` becomes ``(y x)^-w``.
    """
    while True:
        nxt = _canonical_pass(t)
        if nxt == t:
            return t
        t = nxt


def _canonical_pass(t):
    if isinstance(t, (Empty, Letter)):
        return t
    if isinstance(t, (OmegaPow, NegOmegaPow)):
        body = canonical(t.body)
        if is_empty(body):
            return EMPTY
        root = _primitive_root(list(parts_of(body)))
        return type(t)(concat(*root))
    parts = []
    for p in t.parts:
        parts.extend(parts_of(canonical(p)))
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(parts):
            if isinstance(p, OmegaPow) and i > 0:
                body = list(parts_of(p.body))
                if parts[i - 1] == body[-1]:
                    parts[i - 1:i + 1] = [OmegaPow(concat(body[-1], *body[:-1]))]
                    changed = True
                    break
            if isinstance(p, NegOmegaPow) and i + 1 < len(parts):
                body = list(parts_of(p.body))
                if parts[i + 1] == body[0]:
                    parts[i:i + 2] = [NegOmegaPow(concat(*body[1:], body[0]))]
                    changed = True
                    break
    for i in range(len(parts) - 1):
        if isinstance(parts[i], NegOmegaPow) and isinstance(parts[i + 1], OmegaPow):
            parts[i:i + 2] = _best_boundary(parts[i], parts[i + 1])
    return concat(*parts)


def _best_boundary(x: NegOmegaPow, y: OmegaPow) -> list:
    """Pick one split of ``x^-w y^w`` among those denoting the same word.

    A letter can cross the boundary whenever the two bodies start (or end)
    alike, which rotates both; the reachable splits form a finite chain and
    the least one by printed form is chosen.
    """
    def term(xb, yb):
        return NegOmegaPow(concat(*xb)), OmegaPow(concat(*yb))

    start = (tuple(parts_of(x.body)), tuple(parts_of(y.body)))
    seen = {start}
    stack = [start]
    while stack:
        xb, yb = stack.pop()
        moves = []
        if xb[0] == yb[0]:
            moves.append((xb[1:] + xb[:1], yb[1:] + yb[:1]))
        if xb[-1] == yb[-1]:
            moves.append((xb[-1:] + xb[:-1], yb[-1:] + yb[:-1]))
        for m in moves:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    best = min(seen, key=lambda b: (format_term(concat(*term(*b))), b != start))
    return list(term(*best))


# ---------------------------------------------------------------------------
# text syntax

_RESERVED = {"eps"}
_TOKEN = re.compile(r"\s*(?:(\^-w|\^-ω|\^w|\^ω)|([A-Za-z_][A-Za-z0-9_']*)|([().])|(ϵ|ε)|(\S))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        power, ident, punct, eps, bad = m.groups()
        col = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if bad:
            raise ParseError(f"unexpected character {bad!r}", 1, col + 1)
        if power:
            out.append(("neg" if "-" in power else "pow", power, col))
        elif ident:
            out.append(("eps" if ident == "eps" else "id", ident, col))
        elif eps:
            out.append(("eps", eps, col))
        else:
            out.append((punct, punct, col))
        pos = m.end()
    return out


def parse_term(text: str) -> WordTerm:
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def error(msg):
        col = toks[pos][2] + 1 if pos < len(toks) else len(text) + 1
        raise ParseError(msg, 1, col)

    def seq():
        nonlocal pos
        items = [postfix()]
        while True:
            if peek() == ".":
                pos += 1
                items.append(postfix())
            elif peek() in ("id", "eps", "("):
                items.append(postfix())
            else:
                return concat(*items)

    def postfix():
        nonlocal pos
        t = atom()
        while peek() in ("pow", "neg"):
            t = OmegaPow(t) if peek() == "pow" else NegOmegaPow(t)
            pos += 1
        return t

    def atom():
        nonlocal pos
        kind = peek()
        if kind == "id":
            pos += 1
            return Letter(toks[pos - 1][1])
        if kind == "eps":
            pos += 1
            return EMPTY
        if kind == "(":
            pos += 1
            t = seq()
            if peek() != ")":
                error("expected ')'")
            pos += 1
            return t
        error("expected a letter, 'eps' or '('")

    if not toks:
        raise ParseError("empty term", 1, 1)
    result = seq()
    if pos != len(toks):
        error("unexpected token")
    return result


def format_term(t: WordTerm) -> str:
    if isinstance(t, Empty):
        return "eps"
    if isinstance(t, Letter):
        return t.symbol
    if isinstance(t, Concat):
        return " ".join(format_term(p) for p in t.parts)
    suffix = "^w" if isinstance(t, OmegaPow) else "^-w"
    body = t.body
    if isinstance(body, (Letter, Empty)):
        return format_term(body) + suffix
    return f"({format_term(body)}){suffix}"


TermLike = Union[WordTerm, str, Sequence[str]]


def as_term(x: TermLike) -> WordTerm:
    if isinstance(x, WordTerm):
        return x
    if isinstance(x, str):
        return parse_term(x)
    return word(x)

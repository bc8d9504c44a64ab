"""Fixpoint expressions for context-free languages of countable words.

Word expressions::

    T ::= a | eps | x | T + T | T T | mu x.A | T0^w | T0^-w | P^w

where ``mu x.`` binds the atom ``A`` that follows it (usually a bracketed
expression), so ``mu x.(a x + eps) b`` is a concatenation.

Pair expressions (their omega power is a word expression)::

    P ::= T0 >< T0 | P + P | P P | P*

``T0`` stands for a closed word expression. ``t^w`` abbreviates
``(t >< eps)^w`` and ``t^-w`` abbreviates ``(eps >< t)^w``. Unicode forms
``μ``, ``×``, ``ϵ`` and ``ω`` are accepted as well.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from . import words as W
from .errors import OpenOmegaOperand, ParseError
from .grammar import Buchi, Grammar, Rule


class MuExpr:
    def __str__(self):
        return format_expr(self)


class PairTerm:
    def __str__(self):
        return format_expr(self)


@dataclass(frozen=True)
class Letter(MuExpr):
    symbol: str


@dataclass(frozen=True)
class Eps(MuExpr):
    pass


@dataclass(frozen=True)
class Var(MuExpr):
    name: str


@dataclass(frozen=True)
class Sum(MuExpr):
    left: MuExpr
    right: MuExpr


@dataclass(frozen=True)
class Cat(MuExpr):
    left: MuExpr
    right: MuExpr


@dataclass(frozen=True)
class Mu(MuExpr):
    var: str
    body: MuExpr


@dataclass(frozen=True)
class OmegaOfPair(MuExpr):
    pair: PairTerm


@dataclass(frozen=True)
class Cross(PairTerm):
    left: MuExpr
    right: MuExpr


@dataclass(frozen=True)
class PSum(PairTerm):
    left: PairTerm
    right: PairTerm


@dataclass(frozen=True)
class PCat(PairTerm):
    left: PairTerm
    right: PairTerm


@dataclass(frozen=True)
class PStar(PairTerm):
    body: PairTerm


EPS = Eps()


def omega_of(t: MuExpr) -> MuExpr:
    return OmegaOfPair(Cross(t, EPS))


def neg_omega_of(t: MuExpr) -> MuExpr:
    return OmegaOfPair(Cross(EPS, t))


def free_vars(e) -> frozenset:
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, (Letter, Eps)):
        return frozenset()
    if isinstance(e, Mu):
        return free_vars(e.body) - {e.var}
    if isinstance(e, OmegaOfPair):
        return free_vars(e.pair)
    if isinstance(e, PStar):
        return free_vars(e.body)
    return free_vars(e.left) | free_vars(e.right)


def is_closed(e) -> bool:
    return not free_vars(e)


def letters_of(e) -> frozenset:
    if isinstance(e, Letter):
        return frozenset([e.symbol])
    if isinstance(e, (Var, Eps)):
        return frozenset()
    if isinstance(e, (Mu, PStar)):
        return letters_of(e.body)
    if isinstance(e, OmegaOfPair):
        return letters_of(e.pair)
    return letters_of(e.left) | letters_of(e.right)


def is_plain_omega(e) -> bool:
    """Whether every pair expression is of the form t >< eps (the well-ordered dialect)."""
    if isinstance(e, OmegaOfPair):
        p = e.pair
        return isinstance(p, Cross) and p.right == EPS and is_plain_omega(p.left)
    if isinstance(e, (Letter, Eps, Var)):
        return True
    if isinstance(e, Mu):
        return is_plain_omega(e.body)
    if isinstance(e, (Sum, Cat)):
        return is_plain_omega(e.left) and is_plain_omega(e.right)
    return False


# ---------------------------------------------------------------------------
# parsing

_TOKENS = re.compile(
    r"\s*(?:(?P<omega>\^-w|\^-ω|\^w|\^ω)|(?P<cross>><|×)|(?P<mu>μ)|(?P<eps>ϵ|ε)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[()+.*])|(?P<bad>\S))"
)
_VAR_NAME = re.compile(r"[xyz]\d*'*$")


def _tokenize(text):
    out = []
    line, col_base = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastgroup)
        line = text.count("\n", 0, start) + 1
        col = start - (text.rfind("\n", 0, start) + 1) + 1
        kind, value = m.lastgroup, m.group(m.lastgroup)
        if kind == "bad":
            raise ParseError(f"unexpected character {value!r}", line, col)
        if kind == "omega":
            value = "^-w" if "-" in value else "^w"
        elif kind == "ident" and value == "mu":
            kind = "mu"
        elif kind == "ident" and value == "eps":
            kind = "eps"
        out.append((kind, value, line, col))
        pos = m.end()
    out.append(("end", "", line, len(text) + 1))
    return out


def _bound_names(tokens):
    return {tokens[i + 1][1] for i, t in enumerate(tokens[:-1]) if t[0] == "mu" and tokens[i + 1][0] == "ident"}


def parse_expr(text: str, alphabet: Optional[Iterable[str]] = None, dialect: str = "scattered") -> MuExpr:
    """Parse a closed or open word expression.

    Identifiers are letters unless they are bound by some ``mu``; without an
    alphabet, names like ``x``, ``y2`` or ``z'`` are variables too. With an
    alphabet, any identifier outside it is a variable. ``dialect="wellordered"``
    rejects pair expressions other than ``t >< eps``.
    """
    tokens = _tokenize(text)
    bound = _bound_names(tokens)
    sigma = set(alphabet) if alphabet is not None else None
    pos = 0

    def peek():
        return tokens[pos]

    def take(kind=None, value=None):
        nonlocal pos
        tok = tokens[pos]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2], tok[3])
        pos += 1
        return tok

    def fail(msg, tok):
        raise ParseError(msg, tok[2], tok[3])

    def is_var(name):
        if name in bound:
            return True
        if sigma is not None:
            return name not in sigma
        return bool(_VAR_NAME.match(name))

    def starts_atom(tok):
        return tok[0] in ("ident", "eps", "mu") or tok[1] == "("

    def sum_():
        tok = peek()
        e = cross()
        while peek()[1] == "+":
            op = take()
            r = cross()
            e = _combine(e, r, Sum, PSum, "+", op)
        return e

    def cross():
        tok = peek()
        e = cat()
        if peek()[0] == "cross":
            op = take()
            r = cat()
            for side in (e, r):
                if isinstance(side, PairTerm):
                    fail("both sides of >< must be word expressions", op)
                fv = free_vars(side)
                if fv:
                    raise OpenOmegaOperand(sorted(fv)[0], op[2], op[3])
            e = Cross(e, r)
            if peek()[0] == "cross":
                fail(">< is not associative; add parentheses", peek())
        return e

    def cat():
        e = postfix()
        while starts_atom(peek()):
            op = peek()
            r = postfix()
            e = _combine(e, r, Cat, PCat, "concatenation", op)
        return e

    def postfix():
        e = atom()
        while True:
            tok = peek()
            if tok[0] == "omega":
                take()
                if isinstance(e, PairTerm):
                    if tok[1] != "^w":
                        fail("only ^w applies to pair expressions", tok)
                    e = OmegaOfPair(e)
                else:
                    fv = free_vars(e)
                    if fv:
                        raise OpenOmegaOperand(sorted(fv)[0], tok[2], tok[3])
                    e = omega_of(e) if tok[1] == "^w" else neg_omega_of(e)
            elif tok[1] == "*":
                take()
                if not isinstance(e, PairTerm):
                    fail("* applies to pair expressions; write mu x.(t x + eps) for words", tok)
                e = PStar(e)
            else:
                return e

    def atom():
        tok = peek()
        if tok[0] == "mu":
            take()
            name = take("ident")[1]
            take(value=".")
            body = postfix()
            if isinstance(body, PairTerm):
                fail("the body of mu must be a word expression", tok)
            return Mu(name, body)
        if tok[0] == "eps":
            take()
            return EPS
        if tok[0] == "ident":
            take()
            if is_var(tok[1]):
                return Var(tok[1])
            if sigma is not None and tok[1] not in sigma:
                fail(f"unknown letter {tok[1]!r}", tok)
            return Letter(tok[1])
        if tok[1] == "(":
            take()
            e = sum_()
            take(value=")")
            return e
        fail(f"unexpected {tok[1] or 'end of input'!r}", tok)

    e = sum_()
    if peek()[0] != "end":
        fail(f"unexpected {peek()[1]!r}", peek())
    if isinstance(e, PairTerm):
        raise ParseError("a pair expression needs ^w to become a word expression", 1, 1)
    if dialect == "wellordered" and not is_plain_omega(e):
        raise ParseError("the well-ordered dialect only has t^w", 1, 1)
    return e


def _combine(a, b, tcls, pcls, what, tok):
    if isinstance(a, PairTerm) and isinstance(b, PairTerm):
        return pcls(a, b)
    if isinstance(a, MuExpr) and isinstance(b, MuExpr):
        return tcls(a, b)
    raise ParseError(f"{what} mixes a word expression with a pair expression", tok[2], tok[3])


# ---------------------------------------------------------------------------
# printing

_PREC = {Sum: 0, PSum: 0, Cross: 1, Cat: 2, PCat: 2}


def _prec(e):
    return _PREC.get(type(e), 4)


def format_expr(e) -> str:
    if isinstance(e, Letter):
        return e.symbol
    if isinstance(e, Eps):
        return "eps"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Mu):
        return f"mu {e.var}.{_wrap(e.body, 3)}"
    if isinstance(e, (Sum, PSum)):
        return f"{_wrap(e.left, 0)} + {_wrap(e.right, 1)}"
    if isinstance(e, Cross):
        return f"{_wrap(e.left, 2)} >< {_wrap(e.right, 2)}"
    if isinstance(e, (Cat, PCat)):
        return f"{_wrap(e.left, 2)} {_wrap(e.right, 3)}"
    if isinstance(e, PStar):
        return f"{_wrap(e.body, 4)}*"
    p = e.pair
    if isinstance(p, Cross) and p.right == EPS:
        return f"{_wrap(p.left, 4)}^w"
    if isinstance(p, Cross) and p.left == EPS:
        return f"{_wrap(p.right, 4)}^-w"
    return f"({format_expr(p)})^w"


def _wrap(e, level):
    s = format_expr(e)
    # a postfix operator after mu x.(...) would attach to the body
    return f"({s})" if _prec(e) < level or (isinstance(e, Mu) and level > 3) else s


# ---------------------------------------------------------------------------
# compilation to Buchi grammars


class _Builder:
    def __init__(self, alphabet):
        self.alphabet = tuple(alphabet)
        self.nonterminals = []
        self.rules = []
        self.designated = set()
        self.count = 0

    def fresh(self, hint="N"):
        while True:
            name = f"{hint}{self.count}"
            self.count += 1
            if name not in self.alphabet:
                self.nonterminals.append(name)
                return name

    def seq(self, e, env) -> tuple:
        if isinstance(e, Letter):
            return (e.symbol,)
        if isinstance(e, Eps):
            return ()
        if isinstance(e, Var):
            if e.name not in env:
                raise ParseError(f"free variable {e.name!r}")
            return (env[e.name],)
        if isinstance(e, Cat):
            return self.seq(e.left, env) + self.seq(e.right, env)
        if isinstance(e, Sum):
            n = self.fresh("N")
            self.rules.extend(Rule(n, alt) for alt in self.alts(e, env))
            return (n,)
        if isinstance(e, Mu):
            n = self.fresh("M")
            self.rules.extend(Rule(n, alt) for alt in self.alts(e.body, {**env, e.var: n}))
            return (n,)
        s0 = self.fresh("W")
        self.designated.add(s0)
        self.rules.append(Rule(s0, self.wrap(e.pair, (s0,))))
        return (s0,)

    def alts(self, e, env) -> list:
        if isinstance(e, Sum):
            return self.alts(e.left, env) + self.alts(e.right, env)
        return [self.seq(e, env)]

    def wrap(self, p, hole: tuple) -> tuple:
        """Symbols deriving P o L(hole)."""
        if isinstance(p, Cross):
            return self.seq(p.left, {}) + hole + self.seq(p.right, {})
        if isinstance(p, PSum):
            n = self.fresh("N")
            self.rules.append(Rule(n, self.wrap(p.left, hole)))
            self.rules.append(Rule(n, self.wrap(p.right, hole)))
            return (n,)
        if isinstance(p, PCat):
            return self.wrap(p.left, self.wrap(p.right, hole))
        n = self.fresh("P")
        self.rules.append(Rule(n, hole))
        self.rules.append(Rule(n, self.wrap(p.body, (n,))))
        return (n,)


def compile_to_bcfg(t: MuExpr, alphabet: Optional[Iterable[str]] = None) -> Grammar:
    if not is_closed(t):
        raise ParseError(f"expression has free variables {sorted(free_vars(t))}")
    sigma = sorted(letters_of(t) | set(alphabet or ()))
    b = _Builder(sigma)
    start = b.fresh("S")
    b.rules.extend(Rule(start, alt) for alt in b.alts(t, {}))
    return Grammar(tuple(b.nonterminals), tuple(sigma), tuple(b.rules), start, Buchi(frozenset(b.designated)))


# ---------------------------------------------------------------------------
# bounded semantics


def _cat_sets(xs, ys, cap):
    out = set()
    for x in xs:
        for y in ys:
            t = W.canonical(W.concat(x, y))
            if cap is None or W.size(t) <= cap:
                out.add(t)
    return out


def fixpoint_iterate(t: MuExpr, depth: int, cycle: int = 2, prefix: int = 1, max_size: Optional[int] = 12) -> frozenset:
    """Under-approximation of |t|: each mu is unfolded ``depth`` times from the
    empty set, stars are unrolled ``depth`` times, and an omega power uses
    choice sequences made of up to ``prefix`` pairs followed by a repeated
    cycle of up to ``cycle`` pairs."""

    def ev(e, env):
        if isinstance(e, Letter):
            return {W.Letter(e.symbol)}
        if isinstance(e, Eps):
            return {W.EMPTY}
        if isinstance(e, Var):
            return env[e.name]
        if isinstance(e, Sum):
            return ev(e.left, env) | ev(e.right, env)
        if isinstance(e, Cat):
            return _cat_sets(ev(e.left, env), ev(e.right, env), max_size)
        if isinstance(e, Mu):
            cur = set()
            for _ in range(depth):
                cur = ev(e.body, {**env, e.var: cur})
            return cur
        return omega_words(evp(e.pair))

    def evp(p):
        if isinstance(p, Cross):
            return {(l, r) for l in ev(p.left, {}) for r in ev(p.right, {})}
        if isinstance(p, PSum):
            return evp(p.left) | evp(p.right)
        if isinstance(p, PCat):
            return _pair_cat(evp(p.left), evp(p.right))
        body = evp(p.body)
        cur = {(W.EMPTY, W.EMPTY)}
        acc = set(cur)
        for _ in range(depth):
            cur = _pair_cat(cur, body)
            acc |= cur
        return acc

    def _pair_cat(xs, ys):
        out = set()
        for a in xs:
            for b in ys:
                q = (W.canonical(W.concat(a[0], b[0])), W.canonical(W.concat(b[1], a[1])))
                if max_size is None or W.size(q[0]) + W.size(q[1]) <= max_size:
                    out.add(q)
        return out

    def omega_words(ps):
        ps = sorted(ps, key=lambda q: (W.size(q[0]) + W.size(q[1]), str(q[0]), str(q[1])))
        cycles = set()
        frontier = {(W.EMPTY, W.EMPTY)}
        for _ in range(cycle):
            frontier = _pair_cat(frontier, ps)
            cycles |= frontier
        prefixes = {(W.EMPTY, W.EMPTY)}
        frontier = set(prefixes)
        for _ in range(prefix):
            frontier = _pair_cat(frontier, ps)
            prefixes |= frontier
        out = set()
        for l, r in cycles:
            core = W.concat(W.omega(l), W.neg_omega(r))
            for pl, pr in prefixes:
                term = W.canonical(W.concat(pl, core, pr))
                if max_size is None or W.size(term) <= max_size:
                    out.add(term)
        return out

    return frozenset(ev(t, {}))

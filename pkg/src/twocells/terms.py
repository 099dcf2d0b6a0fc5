"""Object-level term algebra.

Terms are built from variables, generators (objects of the discrete base
category) and applications of graded function symbols.  An object theory is
either empty or declares some binary symbols strictly associative with a
nullary unit; terms are compared through their canonical forms, in which every
associative node is flattened into a variadic node and units are elided.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple


class Var(NamedTuple):
    name: str
    kind: str = "var"


class Gen(NamedTuple):
    name: str
    kind: str = "gen"


class App(NamedTuple):
    symbol: str
    args: tuple = ()
    kind: str = "app"


Term = Var | Gen | App
Position = tuple


class TermError(ValueError):
    """Raised for ill-formed terms: unknown symbols, arity mismatches."""


class TermSyntaxError(TermError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class PositionError(TermError):
    pass


@dataclass(frozen=True)
class Signature:
    """Graded function symbols plus the generator supply.

    ``generators`` of ``None`` means an open supply: any identifier that is not
    a symbol names a generator in ground terms.
    """

    symbols: dict = field(default_factory=dict)
    infix: frozenset = frozenset()
    generators: frozenset | None = None

    def __post_init__(self):
        for name in self.infix:
            if self.symbols.get(name) != 2:
                raise TermError(f"infix symbol {name!r} must be binary")
        if self.generators is not None:
            clash = set(self.generators) & set(self.symbols)
            if clash:
                raise TermError(f"names used as both symbol and generator: {sorted(clash)}")

    def __hash__(self):
        return hash((tuple(sorted(self.symbols.items())), self.infix, self.generators))

    def arity(self, name: str) -> int | None:
        return self.symbols.get(name)

    def is_generator(self, name: str) -> bool:
        if name in self.symbols:
            return False
        return self.generators is None or name in self.generators


@dataclass(frozen=True)
class ObjectTheory:
    """Either the empty theory or a list of (binary symbol, unit) pairs."""

    assoc_unit: tuple = ()

    def __post_init__(self):
        seen = [sym for sym, _ in self.assoc_unit]
        if len(seen) != len(set(seen)):
            raise TermError("symbol declared associative twice")
        object.__setattr__(self, "_units", {sym: App(u) for sym, u in self.assoc_unit})

    @property
    def is_empty(self) -> bool:
        return not self.assoc_unit

    def unit_of(self, symbol: str) -> App | None:
        return self._units.get(symbol)

    @property
    def units(self) -> frozenset:
        return frozenset(App(u) for _, u in self.assoc_unit)

    def check(self, sig: Signature) -> None:
        for sym, unit in self.assoc_unit:
            if sig.arity(sym) != 2:
                raise TermError(f"associative symbol {sym!r} must be binary")
            if sig.arity(unit) != 0:
                raise TermError(f"unit {unit!r} must be a nullary symbol")


EMPTY = ObjectTheory()


# ---------------------------------------------------------------------------
# construction helpers


def is_ground(t: Term) -> bool:
    if t.kind == "var":
        return False
    if t.kind == "gen":
        return True
    return all(is_ground(a) for a in t.args)


def variables(t: Term) -> list[str]:
    """Distinct variable names in order of first occurrence."""
    out: list[str] = []

    def walk(u):
        if u.kind == "var":
            if u.name not in out:
                out.append(u.name)
        elif u.kind == "app":
            for a in u.args:
                walk(a)

    walk(t)
    return out


def generators_of(t: Term) -> list[str]:
    out: list[str] = []

    def walk(u):
        if u.kind == "gen":
            out.append(u.name)
        elif u.kind == "app":
            for a in u.args:
                walk(a)

    walk(t)
    return out


def substitute(t: Term, sigma: dict) -> Term:
    if t.kind == "var":
        return sigma.get(t.name, t)
    if t.kind == "gen" or not t.args:
        return t
    return App(t.symbol, tuple(substitute(a, sigma) for a in t.args))


def size(t: Term) -> int:
    if t.kind == "app":
        return 1 + sum(size(a) for a in t.args)
    return 1


@lru_cache(maxsize=None)
def term_key(t: Term) -> tuple:
    """Total order: name first, then kind, then children."""
    rank = {"var": 0, "gen": 1, "app": 2}[t.kind]
    if t.kind == "app":
        return (t.symbol, rank, tuple(term_key(a) for a in t.args))
    return (t.name, rank, ())


def sort_terms(ts: Iterable[Term]) -> list[Term]:
    return sorted(ts, key=term_key)


# ---------------------------------------------------------------------------
# canonical forms


@lru_cache(maxsize=1 << 20)
def canonicalize(t: Term, th: ObjectTheory = EMPTY) -> Term:
    if t.kind != "app" or not t.args:
        return t
    args = [canonicalize(a, th) for a in t.args]
    unit = th.unit_of(t.symbol)
    if unit is None:
        return App(t.symbol, tuple(args))
    flat: list[Term] = []
    for a in args:
        if a == unit:
            continue
        if a.kind == "app" and a.symbol == t.symbol:
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return unit
    if len(flat) == 1:
        return flat[0]
    return App(t.symbol, tuple(flat))


def term_eq(s: Term, t: Term, th: ObjectTheory = EMPTY) -> bool:
    return canonicalize(s, th) == canonicalize(t, th)


def is_canonical(t: Term, th: ObjectTheory) -> bool:
    return canonicalize(t, th) == t


# ---------------------------------------------------------------------------
# positions


def positions(t: Term) -> list[Position]:
    out: list[Position] = []

    def walk(u, p):
        out.append(p)
        if u.kind == "app":
            for i, a in enumerate(u.args):
                walk(a, p + (i,))

    walk(t, ())
    return out


def subterm_at(t: Term, p: Position) -> Term:
    cur = t
    for i in p:
        if cur.kind != "app" or not 0 <= i < len(cur.args):
            raise PositionError(f"invalid position {list(p)}")
        cur = cur.args[i]
    return cur


def replace_at(t: Term, p: Position, new: Term) -> Term:
    if not p:
        return new
    i = p[0]
    if t.kind != "app" or not 0 <= i < len(t.args):
        raise PositionError(f"invalid position {list(p)}")
    args = list(t.args)
    args[i] = replace_at(args[i], p[1:], new)
    return App(t.symbol, tuple(args))


# ---------------------------------------------------------------------------
# matching modulo the object theory


def _unit_match(p, unit, th, sigma, budget):
    """Bindings making ``p`` collapse to ``unit``; inserting a unit costs one."""
    if p.kind == "var":
        bound = sigma.get(p.name)
        if bound is not None:
            if bound == unit:
                yield sigma, budget
        elif budget > 0:
            s2 = dict(sigma)
            s2[p.name] = unit
            yield s2, budget - 1
        return
    if p.kind == "gen":
        return
    if p == unit:
        yield sigma, budget
        return
    if th.unit_of(p.symbol) == unit:
        yield from _unit_seq(p.args, 0, unit, th, sigma, budget)


def _unit_seq(ps, i, unit, th, sigma, budget):
    if i == len(ps):
        yield sigma, budget
        return
    for s2, b2 in _unit_match(ps[i], unit, th, sigma, budget):
        yield from _unit_seq(ps, i + 1, unit, th, s2, b2)


def _match(p, s, th, sigma, budget):
    if p.kind == "var":
        bound = sigma.get(p.name)
        if bound is None:
            s2 = dict(sigma)
            s2[p.name] = s
            yield s2, budget
        elif bound == s:
            yield sigma, budget
        return
    if p.kind == "gen":
        if p == s:
            yield sigma, budget
        return
    unit = th.unit_of(p.symbol)
    if unit is None:
        if s.kind == "app" and s.symbol == p.symbol and len(s.args) == len(p.args):
            yield from _match_seq(p.args, s.args, 0, th, sigma, budget)
        return
    if s.kind == "app" and s.symbol == p.symbol:
        cs = s.args
    elif s == unit:
        cs = ()
    else:
        cs = (s,)
    yield from _match_au(p.symbol, unit, p.args, 0, cs, 0, th, sigma, budget)


def _match_seq(ps, ss, i, th, sigma, budget):
    if i == len(ps):
        yield sigma, budget
        return
    for s2, b2 in _match(ps[i], ss[i], th, sigma, budget):
        yield from _match_seq(ps, ss, i + 1, th, s2, b2)


def _match_au(sym, unit, ps, i, cs, j, th, sigma, budget):
    if i == len(ps):
        if j == len(cs):
            yield sigma, budget
        return
    p = ps[i]
    last = i == len(ps) - 1
    ends = [len(cs)] if last else range(j, len(cs) + 1)
    for k in ends:
        n = k - j
        if n == 0:
            found = _unit_match(p, unit, th, sigma, budget)
        elif n == 1:
            found = _match(p, cs[j], th, sigma, budget)
        else:
            if p.kind == "gen" or (p.kind == "app" and th.unit_of(p.symbol) is None):
                continue
            found = _match(p, App(sym, cs[j:k]), th, sigma, budget)
        for s2, b2 in found:
            yield from _match_au(sym, unit, ps, i + 1, cs, k, th, s2, b2)


def match_units(pattern: Term, subject: Term, th: ObjectTheory = EMPTY,
                unit_budget: int | None = None) -> dict:
    """All matches keyed by frozen substitution, valued by inserted-unit count."""
    p = canonicalize(pattern, th)
    if unit_budget is None:
        unit_budget = len(variables(p))
    out: dict = {}
    for sigma, left in _match(p, subject, th, {}, unit_budget):
        key = tuple(sorted(sigma.items(), key=lambda kv: kv[0]))
        used = unit_budget - left
        if key not in out or used < out[key]:
            out[key] = used
    return out


def match_modulo(pattern: Term, subject: Term, th: ObjectTheory = EMPTY,
                 unit_budget: int | None = None) -> list[dict]:
    """Substitutions ``sigma`` with ``canonicalize(sigma(pattern)) == subject``.

    ``subject`` must be ground and canonical.  At most ``unit_budget`` units
    may be introduced by the match (default: the number of pattern variables).
    """
    found = match_units(pattern, subject, th, unit_budget)
    keys = sorted(found, key=lambda k: tuple((n, term_key(v)) for n, v in k))
    return [dict(k) for k in keys]


# ---------------------------------------------------------------------------
# syntactic unification


def unify_syntactic(s: Term, t: Term, th: ObjectTheory = EMPTY) -> dict | None:
    """Most general unifier in the empty theory, or ``None``."""
    if not th.is_empty:
        raise TermError("syntactic unification requires the empty object theory")
    sigma: dict = {}

    def walk(u):
        while u.kind == "var" and u.name in sigma:
            u = sigma[u.name]
        return u

    def occurs(name, u):
        u = walk(u)
        if u.kind == "var":
            return u.name == name
        if u.kind == "app":
            return any(occurs(name, a) for a in u.args)
        return False

    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a, b = walk(a), walk(b)
        if a == b:
            continue
        if a.kind == "var":
            if occurs(a.name, b):
                return None
            sigma[a.name] = b
        elif b.kind == "var":
            if occurs(b.name, a):
                return None
            sigma[b.name] = a
        elif a.kind == "app" and b.kind == "app" and a.symbol == b.symbol \
                and len(a.args) == len(b.args):
            stack.extend(zip(a.args, b.args))
        else:
            return None

    def resolve(u):
        u = walk(u)
        if u.kind == "app" and u.args:
            return App(u.symbol, tuple(resolve(a) for a in u.args))
        return u

    return {k: resolve(v) for k, v in sigma.items()}


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(?:(#[^\n]*)|(1_)|([A-Za-z_][A-Za-z0-9_']*)|(->|[(),;=\[\]:]))")


class Token(NamedTuple):
    kind: str  # 'ident', 'punct', 'id', 'end'
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    while True:
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line += 1
                line_start = pos + 1
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        start = m.start(m.lastindex)
        col = start - line_start + 1
        if m.group(1) is not None:
            pass
        elif m.group(2) is not None:
            out.append(Token("id", "1_", line, col))
        elif m.group(3) is not None:
            out.append(Token("ident", m.group(3), line, col))
        else:
            out.append(Token("punct", m.group(4), line, col))
        pos = m.end()
    out.append(Token("end", "", line, pos - line_start + 1))
    return out


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text or tok.kind not in ("punct", "id"):
            raise TermSyntaxError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                                  tok.line, tok.col)
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == text

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        return TermSyntaxError(message, tok.line, tok.col)


def parse_term_tokens(ts: TokenStream, sig: Signature, pattern: bool = False) -> Term:
    """term := ident | ident "(" term {"," term} ")" | "(" term op term {op term} ")"."""
    first = _parse_primary(ts, sig, pattern)
    return _parse_infix_tail(ts, sig, pattern, first)


def _parse_infix_tail(ts, sig, pattern, first):
    tok = ts.peek()
    if tok.kind == "ident" and tok.text in sig.infix:
        op = tok.text
        items = [first]
        while ts.peek().kind == "ident" and ts.peek().text == op:
            ts.next()
            items.append(_parse_primary(ts, sig, pattern))
        if ts.peek().kind == "ident" and ts.peek().text in sig.infix:
            raise ts.error("mixed infix operators need parentheses")
        out = items[0]
        for item in items[1:]:
            out = App(op, (out, item))
        return out
    return first


def _parse_primary(ts, sig, pattern):
    tok = ts.next()
    if tok.kind == "punct" and tok.text == "(":
        inner = parse_term_tokens(ts, sig, pattern)
        ts.expect(")")
        return inner
    if tok.kind != "ident":
        raise TermSyntaxError(f"expected a term, found {tok.text or 'end of input'!r}",
                              tok.line, tok.col)
    name = tok.text
    if ts.at("("):
        arity = sig.arity(name)
        if arity is None:
            raise TermSyntaxError(f"unknown function symbol {name!r}", tok.line, tok.col)
        ts.next()
        args = [parse_term_tokens(ts, sig, pattern)]
        while ts.at(","):
            ts.next()
            args.append(parse_term_tokens(ts, sig, pattern))
        ts.expect(")")
        if len(args) != arity:
            raise TermSyntaxError(f"symbol {name!r} expects {arity} arguments, got {len(args)}",
                                  tok.line, tok.col)
        return App(name, tuple(args))
    arity = sig.arity(name)
    if arity is not None:
        if arity != 0:
            raise TermSyntaxError(f"symbol {name!r} expects {arity} arguments, got 0",
                                  tok.line, tok.col)
        return App(name)
    if pattern:
        if sig.generators is not None and name in sig.generators:
            return Gen(name)
        return Var(name)
    if sig.is_generator(name):
        return Gen(name)
    raise TermSyntaxError(f"unknown identifier {name!r}", tok.line, tok.col)


def parse_term(text: str, sig: Signature, pattern: bool = False) -> Term:
    """Parse ``text``; with ``pattern`` unknown identifiers become variables."""
    ts = TokenStream(tokenize(text))
    t = parse_term_tokens(ts, sig, pattern)
    if ts.peek().kind != "end":
        raise ts.error(f"unexpected trailing input {ts.peek().text!r}")
    return t


def format_term(t: Term, sig: Signature | None = None) -> str:
    if t.kind != "app":
        return t.name
    if not t.args:
        return t.symbol
    parts = [format_term(a, sig) for a in t.args]
    if sig is not None and t.symbol in sig.infix:
        return "(" + f" {t.symbol} ".join(parts) + ")"
    if sig is not None and sig.arity(t.symbol) == 2 and len(parts) > 2:
        # flattened associative node printed right-nested in prefix form
        out = parts[-1]
        for part in reversed(parts[:-1]):
            out = f"{t.symbol}({part}, {out})"
        return out
    return f"{t.symbol}({', '.join(parts)})"


def iter_subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    for p in positions(t):
        yield p, subterm_at(t, p)

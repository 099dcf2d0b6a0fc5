"""Labelled rules, reduction expressions and the 2-cell congruence generators.

A reduction expression (``Morphism``) is built from identities, rule
applications ``label(m1, ..., mk)``, symbol applications ``F(m1, ..., mn)`` and
composition ``m1 ; m2``.  Expressions are compared only through the reduction
graph: each expression is linearised into paths of one-step reductions
(``Step``), and the faces generated by functoriality, naturality and the stored
axioms are enumerated per vertex by ``generator_instances``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from .terms import (
    EMPTY, App, Gen, ObjectTheory, Signature, Term, TermError, TermSyntaxError,
    TokenStream, Var, canonicalize, format_term, match_units, parse_term_tokens,
    replace_at, subterm_at, substitute, term_key, tokenize, variables,
)

HOLE = "∘"
MARK = "□"
_MARK_A = "□a"
_MARK_B = "□b"


class MorphismTypeError(TermError):
    """Composite or application whose endpoints do not fit."""


# ---------------------------------------------------------------------------
# rules and structures


@dataclass(frozen=True)
class Rule:
    label: str
    lhs: Term
    rhs: Term

    @property
    def variables(self) -> tuple:
        return tuple(variables(self.lhs))


class Id(NamedTuple):
    term: Term
    kind: str = "id"


class Lift(NamedTuple):
    label: str
    args: tuple = ()
    kind: str = "lift"


class MApp(NamedTuple):
    symbol: str
    args: tuple = ()
    kind: str = "mapp"


class Comp(NamedTuple):
    first: object
    second: object
    kind: str = "comp"


Morphism = Id | Lift | MApp | Comp


@dataclass(frozen=True)
class Axiom:
    name: str
    lhs: Morphism
    rhs: Morphism
    identity_instance: bool = False


@dataclass(frozen=True, eq=False)
class TwoStructure:
    """Signature, object theory, labelled rules and stored 2-cell equations."""

    sig: Signature
    theory: ObjectTheory = EMPTY
    rules: tuple = ()
    axioms: tuple = ()
    name: str = "structure"
    _rules: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "axioms", tuple(self.axioms))
        object.__setattr__(self, "_rules", {r.label: r for r in self.rules})

    def rule(self, label: str) -> Rule:
        try:
            return self._rules[label]
        except KeyError:
            raise MorphismTypeError(f"unknown rule label {label!r}") from None

    def canon(self, t: Term) -> Term:
        return canonicalize(t, self.theory)

    def is_variadic(self, symbol: str) -> bool:
        return self.theory.unit_of(symbol) is not None


@dataclass
class ValidationReport:
    issues: list

    @property
    def ok(self) -> bool:
        return not self.issues


def validate_structure(s: TwoStructure) -> ValidationReport:
    issues = []
    try:
        s.theory.check(s.sig)
    except TermError as exc:
        issues.append(f"theory: {exc}")
    seen: set = set()
    for r in s.rules:
        if r.label in seen:
            issues.append(f"duplicate rule label {r.label!r}")
        seen.add(r.label)
        if r.label in s.sig.symbols:
            issues.append(f"rule label {r.label!r} clashes with a function symbol")
        for side in (r.lhs, r.rhs):
            issues.extend(f"rule {r.label}: {msg}" for msg in _arity_issues(side, s))
        if set(variables(r.lhs)) != set(variables(r.rhs)):
            issues.append(f"rule {r.label}: lhs and rhs must have the same variables")
    names: set = set()
    for ax in s.axioms:
        if ax.name in names:
            issues.append(f"duplicate axiom name {ax.name!r}")
        names.add(ax.name)
        try:
            a = source_target(ax.lhs, s)
            b = source_target(ax.rhs, s)
        except TermError as exc:
            issues.append(f"axiom {ax.name}: {exc}")
            continue
        if a[0] != b[0]:
            issues.append(f"axiom {ax.name}: endpoint mismatch (sources differ)")
        if a[1] != b[1]:
            issues.append(f"axiom {ax.name}: endpoint mismatch (targets differ)")
        if ax.identity_instance and not (is_identity(ax.lhs) or is_identity(ax.rhs)):
            issues.append(f"axiom {ax.name}: identity flag needs an identity side")
    return ValidationReport(issues)


def _arity_issues(t: Term, s: TwoStructure):
    if t.kind != "app":
        return
    ar = s.sig.arity(t.symbol)
    if ar is None:
        yield f"unknown symbol {t.symbol!r}"
    elif len(t.args) != ar and not (s.is_variadic(t.symbol) and len(t.args) >= 2):
        yield f"symbol {t.symbol!r} expects {ar} arguments, got {len(t.args)}"
    for a in t.args:
        yield from _arity_issues(a, s)


# ---------------------------------------------------------------------------
# endpoints, identities, shape and variables


def is_identity(m: Morphism) -> bool:
    if m.kind == "id":
        return True
    if m.kind == "mapp":
        return all(is_identity(a) for a in m.args)
    return False


def identity_of(t: Term) -> Morphism:
    if t.kind == "app":
        return MApp(t.symbol, tuple(identity_of(a) for a in t.args))
    return Id(t)


def _check_arity(symbol, n, s: TwoStructure):
    ar = s.sig.arity(symbol)
    if ar is None:
        raise MorphismTypeError(f"unknown function symbol {symbol!r}")
    if n != ar and not (s.is_variadic(symbol) and n >= 2):
        raise MorphismTypeError(f"symbol {symbol!r} expects {ar} arguments, got {n}")


def _raw_endpoints(m: Morphism, s: TwoStructure):
    """Endpoints before canonicalisation; composites are checked on the way."""
    k = m.kind
    if k == "id":
        return m.term, m.term
    if k == "mapp":
        _check_arity(m.symbol, len(m.args), s)
        ends = [_raw_endpoints(a, s) for a in m.args]
        return (App(m.symbol, tuple(e[0] for e in ends)),
                App(m.symbol, tuple(e[1] for e in ends)))
    if k == "lift":
        rule = s.rule(m.label)
        xs = rule.variables
        if len(m.args) != len(xs):
            raise MorphismTypeError(
                f"rule {m.label!r} expects {len(xs)} arguments, got {len(m.args)}")
        ends = [_raw_endpoints(a, s) for a in m.args]
        src = substitute(rule.lhs, {x: e[0] for x, e in zip(xs, ends)})
        tgt = substitute(rule.rhs, {x: e[1] for x, e in zip(xs, ends)})
        return src, tgt
    a0, a1 = _raw_endpoints(m.first, s)
    b0, b1 = _raw_endpoints(m.second, s)
    if s.canon(a1) != s.canon(b0):
        raise MorphismTypeError(
            "composite mismatch: target "
            f"{format_term(s.canon(a1), s.sig)} is not source {format_term(s.canon(b0), s.sig)}")
    return a0, b1


def source_target(m: Morphism, s: TwoStructure) -> tuple:
    src, tgt = _raw_endpoints(m, s)
    return s.canon(src), s.canon(tgt)


def shape(m: Morphism):
    """Shape tree: identities at generators and variables collapse to a hole."""
    k = m.kind
    if k == "id":
        return shape(identity_of(m.term)) if m.term.kind == "app" else HOLE
    if k == "comp":
        return ("comp", shape(m.first), shape(m.second))
    if k == "lift":
        return ("rule", m.label, tuple(shape(a) for a in m.args))
    return ("sym", m.symbol, tuple(shape(a) for a in m.args))


def format_shape(sh) -> str:
    if sh == HOLE:
        return HOLE
    if sh[0] == "comp":
        return f"{format_shape(sh[1])} ; {format_shape(sh[2])}"
    inner = ",".join(format_shape(a) for a in sh[2])
    return f"{sh[1]}({inner})" if sh[2] else sh[1]


def _leaves(m: Morphism) -> list:
    """Leaf identities in left-to-right order (with repetition)."""
    k = m.kind
    if k == "id":
        t = m.term
        if t.kind == "app":
            return [leaf for a in t.args for leaf in _leaves(Id(a))]
        return [t]
    if k == "comp":
        return _leaves(m.first) + _leaves(m.second)
    return [leaf for a in m.args for leaf in _leaves(a)]


def morphism_vars(m: Morphism) -> frozenset:
    """The set of leaf identities, represented by their objects."""
    return frozenset(_leaves(m))


def _relabel(m: Morphism, fresh) -> Morphism:
    k = m.kind
    if k == "id":
        if m.term.kind == "app":
            return _relabel(identity_of(m.term), fresh)
        return Id(next(fresh))
    if k == "comp":
        return Comp(_relabel(m.first, fresh), _relabel(m.second, fresh))
    if k == "lift":
        return Lift(m.label, tuple(_relabel(a, fresh) for a in m.args))
    return MApp(m.symbol, tuple(_relabel(a, fresh) for a in m.args))


def _unify_shapes(a: Term, b: Term, uf: dict):
    """Identify leaves position-wise between two canonical terms of equal shape."""

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    if a.kind == "app" and b.kind == "app":
        if a.symbol != b.symbol or len(a.args) != len(b.args):
            return False
        return all(_unify_shapes(x, y, uf) for x, y in zip(a.args, b.args))
    if a.kind == "app" or b.kind == "app":
        return False
    ra, rb = find(a), find(b)
    if ra != rb:
        uf[ra] = rb
    return True


def general_position_bound(m: Morphism, s: TwoStructure) -> int:
    """Largest number of distinct leaves over expressions with the shape of ``m``.

    Leaves are re-labelled with fresh generators; each composite forces the
    leaves of the meeting endpoints to agree position-wise.  Canonical shapes
    do not depend on leaf names, so these identifications are the most general
    ones.
    """
    counter = itertools.count()
    fresh = (Gen(f"_g{next(counter)}") for _ in itertools.count())
    r = _relabel(m, fresh)
    uf = {leaf: leaf for leaf in _leaves(r)}

    def walk(x):
        if x.kind == "comp":
            a = walk(x.first)
            b = walk(x.second)
            if not _unify_shapes(s.canon(a[1]), s.canon(b[0]), uf):
                raise MorphismTypeError("composite shapes do not fit")
            return a[0], b[1]
        if x.kind == "id":
            return x.term, x.term
        if x.kind == "mapp":
            ends = [walk(a) for a in x.args]
            return (App(x.symbol, tuple(e[0] for e in ends)),
                    App(x.symbol, tuple(e[1] for e in ends)))
        rule = s.rule(x.label)
        ends = [walk(a) for a in x.args]
        xs = rule.variables
        return (substitute(rule.lhs, {v: e[0] for v, e in zip(xs, ends)}),
                substitute(rule.rhs, {v: e[1] for v, e in zip(xs, ends)}))

    walk(r)

    def find(x):
        while uf[x] != x:
            x = uf[x]
        return x

    return len({find(leaf) for leaf in uf})


def is_general_position(m: Morphism, s: TwoStructure) -> bool:
    source_target(m, s)
    return len(morphism_vars(m)) == general_position_bound(m, s)


def substitute_morphism(m: Morphism, sigma: dict) -> Morphism:
    k = m.kind
    if k == "id":
        return Id(substitute(m.term, sigma))
    if k == "comp":
        return Comp(substitute_morphism(m.first, sigma), substitute_morphism(m.second, sigma))
    if k == "lift":
        return Lift(m.label, tuple(substitute_morphism(a, sigma) for a in m.args))
    return MApp(m.symbol, tuple(substitute_morphism(a, sigma) for a in m.args))


def compose(*ms: Morphism) -> Morphism:
    out = ms[0]
    for m in ms[1:]:
        out = Comp(out, m)
    return out


# ---------------------------------------------------------------------------
# parsing and printing


def parse_morphism(text: str, s: TwoStructure, pattern: bool = False) -> Morphism:
    ts = TokenStream(tokenize(text))
    m = parse_morphism_tokens(ts, s, pattern)
    if ts.peek().kind != "end":
        raise ts.error(f"unexpected trailing input {ts.peek().text!r}")
    return m


def parse_morphism_tokens(ts: TokenStream, s: TwoStructure, pattern: bool = False) -> Morphism:
    """m := factor {";" factor};  factor := primary {op primary}."""
    out = _parse_mfactor(ts, s, pattern)
    while ts.at(";"):
        ts.next()
        out = Comp(out, _parse_mfactor(ts, s, pattern))
    return out


def _parse_mfactor(ts, s, pattern):
    first = _parse_mprimary(ts, s, pattern)
    tok = ts.peek()
    if tok.kind == "ident" and tok.text in s.sig.infix:
        op = tok.text
        out = first
        while ts.peek().kind == "ident" and ts.peek().text == op:
            ts.next()
            out = MApp(op, (out, _parse_mprimary(ts, s, pattern)))
        if ts.peek().kind == "ident" and ts.peek().text in s.sig.infix:
            raise ts.error("mixed infix operators need parentheses")
        return out
    return first


def _parse_mprimary(ts, s, pattern):
    tok = ts.next()
    if tok.kind == "id":
        if ts.at("("):
            ts.next()
            t = parse_term_tokens(ts, s.sig, pattern)
            ts.expect(")")
        else:
            t = _parse_bare_term(ts, s, pattern)
        return Id(t)
    if tok.kind == "punct" and tok.text == "(":
        inner = parse_morphism_tokens(ts, s, pattern)
        ts.expect(")")
        return inner
    if tok.kind != "ident":
        raise TermSyntaxError(f"expected a reduction, found {tok.text or 'end of input'!r}",
                              tok.line, tok.col)
    name = tok.text
    is_rule = name in s._rules
    arity = s.sig.arity(name)
    if not ts.at("("):
        if arity == 0:
            return Id(App(name))
        if is_rule and not s.rule(name).variables:
            return Lift(name, ())
        raise TermSyntaxError(f"expected '(' after {name!r}", tok.line, tok.col)
    if not is_rule and arity is None:
        raise TermSyntaxError(f"unknown rule or symbol {name!r}", tok.line, tok.col)
    ts.next()
    args = [parse_morphism_tokens(ts, s, pattern)]
    while ts.at(","):
        ts.next()
        args.append(parse_morphism_tokens(ts, s, pattern))
    ts.expect(")")
    if is_rule:
        want = len(s.rule(name).variables)
        if len(args) != want:
            raise TermSyntaxError(f"rule {name!r} expects {want} arguments, got {len(args)}",
                                  tok.line, tok.col)
        return Lift(name, tuple(args))
    if len(args) != arity:
        raise TermSyntaxError(f"symbol {name!r} expects {arity} arguments, got {len(args)}",
                              tok.line, tok.col)
    return MApp(name, tuple(args))


def _parse_bare_term(ts, s, pattern):
    """Term after ``1_`` without parentheses: an identifier or a prefix application."""
    tok = ts.peek()
    if tok.kind != "ident":
        raise ts.error("expected a term after '1_'")
    if tok.text in s.sig.infix:
        raise ts.error("infix term after '1_' needs parentheses")
    # parse one primary only so that "1_A ot 1_B" splits at the operator
    sub = TokenStream(ts.tokens)
    sub.i = ts.i
    from .terms import _parse_primary
    t = _parse_primary(sub, s.sig, pattern)
    ts.i = sub.i
    return t


def format_morphism(m: Morphism, sig: Signature | None = None, top: bool = True) -> str:
    k = m.kind
    if k == "id":
        return "1_" + format_term(m.term, sig)
    if k == "comp":
        inner = f"{format_morphism(m.first, sig, True)} ; {format_morphism(m.second, sig, True)}"
        return inner if top else f"({inner})"
    parts = [format_morphism(a, sig, k != "mapp" or sig is None or m.symbol not in sig.infix)
             for a in m.args]
    name = m.label if k == "lift" else m.symbol
    if k == "mapp" and sig is not None and m.symbol in sig.infix:
        return "(" + f" {name} ".join(parts) + ")"
    if not parts:
        return name
    return f"{name}({', '.join(parts)})"


# ---------------------------------------------------------------------------
# one-step reductions


class Step(NamedTuple):
    """A one-step reduction ``source -> target``.

    ``path`` addresses a node of the canonical source; ``seg`` is either
    ``None`` (the whole node is the redex) or a half-open range of children of
    an associative node.  ``sigma`` is a sorted tuple of (variable, term).
    """

    source: Term
    label: str
    path: tuple
    seg: tuple | None
    sigma: tuple
    target: Term

    @property
    def units(self) -> int:
        return sum(1 for _, v in self.sigma if v.kind == "app" and not v.args
                   and v.symbol in _unit_names)

    def key(self) -> tuple:
        return (self.label, self.path, self.seg or (),
                tuple((n, term_key(v)) for n, v in self.sigma))

    def covers(self) -> tuple:
        if self.seg is None:
            return (self.path,)
        return tuple(self.path + (i,) for i in range(*self.seg))


_unit_names: set = set()


def step_sort_key(st: Step) -> tuple:
    return st.key()


def format_step(st: Step, sig: Signature | None = None) -> str:
    pos = ".".join(str(i) for i in st.path) or "ε"
    if st.seg is not None:
        pos += f"[{st.seg[0]}:{st.seg[1]}]"
    return f"{st.label}@{pos}"


def _redex(t: Term, path: tuple, seg) -> Term:
    node = subterm_at(t, path)
    if seg is None:
        return node
    return App(node.symbol, node.args[seg[0]:seg[1]])


def punch(t: Term, path: tuple, seg, marker: str = MARK) -> Term:
    """Replace a footprint by a marker variable."""
    if seg is None:
        return replace_at(t, path, Var(marker))
    node = subterm_at(t, path)
    a, b = seg
    new = App(node.symbol, node.args[:a] + (Var(marker),) + node.args[b:])
    return replace_at(t, path, new)


def _find_var(t: Term, name: str, path=()):
    if t.kind == "var":
        return path if t.name == name else None
    if t.kind == "app":
        for i, a in enumerate(t.args):
            p = _find_var(a, name, path + (i,))
            if p is not None:
                return p
    return None


def _sigma_tuple(sigma: dict) -> tuple:
    return tuple(sorted(sigma.items()))


def _is_identity_instance(label: str, sigma: dict, s: TwoStructure) -> bool:
    for pat in _identity_patterns(s).get(label, ()):
        args = App("⟨⟩", tuple(sigma[x] for x in s.rule(label).variables))
        if match_units(pat, args, s.theory, 0):
            return True
    return False


_ID_PATTERNS: dict = {}


def _identity_patterns(s: TwoStructure) -> dict:
    got = _ID_PATTERNS.get(id(s))
    if got is not None and got[0] is s:
        return got[1]
    out: dict = {}
    for ax in s.axioms:
        if not ax.identity_instance:
            continue
        side = ax.rhs if is_identity(ax.lhs) else ax.lhs
        if side.kind == "lift" and all(is_identity(a) for a in side.args):
            ends = [_raw_endpoints(a, s)[0] for a in side.args]
            out.setdefault(side.label, []).append(App("⟨⟩", tuple(ends)))
    _ID_PATTERNS[id(s)] = (s, out)
    return out


def locate(ctx: Term, label: str, sigma: dict, s: TwoStructure) -> Step | None:
    """The step obtained by firing ``label`` with ``sigma`` in the one-hole ``ctx``.

    Returns ``None`` for instances the axioms force to be identities.
    """
    rule = s.rule(label)
    sigma = {x: s.canon(sigma[x]) for x in rule.variables}
    if _is_identity_instance(label, sigma, s):
        return None
    lhs = s.canon(substitute(rule.lhs, sigma))
    rhs = s.canon(substitute(rule.rhs, sigma))
    source = s.canon(substitute(ctx, {MARK: lhs}))
    target = s.canon(substitute(ctx, {MARK: rhs}))
    cctx = s.canon(ctx)
    path = _find_var(cctx, MARK)
    seg = None
    if path:
        parent = subterm_at(cctx, path[:-1])
        unit = s.theory.unit_of(parent.symbol)
        if unit is not None:
            i = path[-1]
            if lhs.kind == "app" and lhs.symbol == parent.symbol:
                path, seg = path[:-1], (i, i + len(lhs.args))
            elif lhs == unit:
                path, seg = path[:-1], (i, i)
    return Step(source, label, path, seg, _sigma_tuple(sigma), target)


def _candidates(t: Term, s: TwoStructure):
    """(path, seg, redex) for every node and every proper associative segment."""
    out = []

    def walk(u, p):
        out.append((p, None, u))
        if u.kind != "app":
            return
        k = len(u.args)
        if k >= 3 and s.is_variadic(u.symbol):
            for a in range(k):
                for b in range(a + 2, k + 1):
                    if (a, b) != (0, k):
                        out.append((p, (a, b), App(u.symbol, u.args[a:b])))
        for i, a in enumerate(u.args):
            walk(a, p + (i,))

    walk(t, ())
    return out


def _rewrite(t: Term, path: tuple, seg, new: Term, s: TwoStructure) -> Term:
    if seg is None:
        return s.canon(replace_at(t, path, new))
    node = subterm_at(t, path)
    a, b = seg
    return s.canon(replace_at(t, path, App(node.symbol, node.args[:a] + (new,) + node.args[b:])))


def _could_match(rule_lhs: Term, redex: Term, s: TwoStructure) -> bool:
    if rule_lhs.kind == "app" and s.theory.unit_of(rule_lhs.symbol) is None:
        return redex.kind == "app" and redex.symbol == rule_lhs.symbol
    if rule_lhs.kind == "gen":
        return redex == rule_lhs
    return True


@lru_cache(maxsize=1 << 16)
def _enumerate_steps_cached(t: Term, s: TwoStructure, unit_budget: int) -> tuple:
    out = {}
    cands = _candidates(t, s)
    for rule in s.rules:
        lhs = s.canon(rule.lhs)
        for path, seg, redex in cands:
            if not _could_match(lhs, redex, s):
                continue
            for key in match_units(lhs, redex, s.theory, unit_budget):
                sigma = dict(key)
                if _is_identity_instance(rule.label, sigma, s):
                    continue
                rhs = s.canon(substitute(rule.rhs, sigma))
                target = _rewrite(t, path, seg, rhs, s)
                st = Step(t, rule.label, path, seg, _sigma_tuple(sigma), target)
                out[st.key()] = st
    return tuple(out[k] for k in sorted(out))


def enumerate_steps(t: Term, s: TwoStructure, unit_budget: int = 2) -> list:
    """All non-identity one-step reductions out of the canonical ground term ``t``."""
    _unit_names.update(u.symbol for u in s.theory.units)
    return list(_enumerate_steps_cached(s.canon(t), s, unit_budget))


def replay_step(st: Step, s: TwoStructure) -> Term:
    rule = s.rule(st.label)
    sigma = dict(st.sigma)
    rhs = s.canon(substitute(rule.rhs, sigma))
    return _rewrite(st.source, st.path, st.seg, rhs, s)


def step_redex(st: Step) -> Term:
    return _redex(st.source, st.path, st.seg)


def step_morphism(st: Step, s: TwoStructure) -> Morphism:
    """The step as a reduction expression (a whiskered rule application)."""
    rule = s.rule(st.label)
    sigma = dict(st.sigma)
    lift = Lift(st.label, tuple(identity_of(sigma[x]) for x in rule.variables))
    return _whisker_morphism(punch(st.source, st.path, st.seg), lift)


def path_morphism(path, s: TwoStructure, start: Term | None = None) -> Morphism:
    if not path:
        if start is None:
            raise ValueError("empty path needs a start vertex")
        return identity_of(start)
    return compose(*(step_morphism(st, s) for st in path))


def _whisker_morphism(ctx: Term, inner: Morphism) -> Morphism:
    if ctx.kind == "var" and ctx.name == MARK:
        return inner
    if ctx.kind == "app" and ctx.args:
        return MApp(ctx.symbol, tuple(_whisker_morphism(a, inner) for a in ctx.args))
    return Id(ctx)


# ---------------------------------------------------------------------------
# linearisation of reduction expressions into graph paths


def _local_paths(m: Morphism, s: TwoStructure) -> list:
    """Paths of local steps ``(ctx, label, sigma)`` with a ``MARK`` hole in ctx.

    ``lhs(phi) ; alpha(t)`` and ``alpha(s) ; rhs(phi)`` are both produced for a
    rule applied to non-identities, and every interleaving is produced for
    parallel arguments, so the result covers all normal forms of ``m`` under
    the implicit identity, associativity, functoriality and naturality
    equations that only reorder independent work.
    """
    k = m.kind
    if k == "id" or is_identity(m):
        return [()]
    if k == "comp":
        return _dedup(p + q for p in _local_paths(m.first, s) for q in _local_paths(m.second, s))
    if k == "mapp":
        _check_arity(m.symbol, len(m.args), s)
        per_arg = []
        for a in m.args:
            src, tgt = _raw_endpoints(a, s)
            per_arg.append([(src, p) for p in _local_paths(a, s)])
        out = []
        for choice in itertools.product(*per_arg):
            out.extend(_interleave(m.symbol, choice))
        return _dedup(out)
    rule = s.rule(m.label)
    xs = rule.variables
    ends = [_raw_endpoints(a, s) for a in m.args]
    if all(is_identity(a) for a in m.args):
        return [((Var(MARK), m.label, {x: e[0] for x, e in zip(xs, ends)}),)]
    args = dict(zip(xs, m.args))
    before = _pattern_morphism(rule.lhs, args)
    after = _pattern_morphism(rule.rhs, args)
    fire_t = (Var(MARK), m.label, {x: e[1] for x, e in zip(xs, ends)})
    fire_s = (Var(MARK), m.label, {x: e[0] for x, e in zip(xs, ends)})
    out = [p + (fire_t,) for p in _local_paths(before, s)]
    out += [(fire_s,) + p for p in _local_paths(after, s)]
    return _dedup(out)


def _pattern_morphism(pat: Term, args: dict) -> Morphism:
    if pat.kind == "var":
        return args[pat.name]
    if pat.kind == "app" and pat.args:
        return MApp(pat.symbol, tuple(_pattern_morphism(a, args) for a in pat.args))
    return Id(pat)


def _interleave(symbol: str, choice) -> list:
    """All interleavings of per-argument local paths, whiskered into ``symbol``."""
    n = len(choice)
    paths = [p for _, p in choice]
    results = []

    def rec(pos, acc):
        if all(pos[i] == len(paths[i]) for i in range(n)):
            results.append(tuple(acc))
            return
        for i in range(n):
            j = pos[i]
            if j == len(paths[i]):
                continue
            ctx, label, sigma = paths[i][j]
            siblings = [_term_after(choice[q][0], paths[q], pos[q]) for q in range(n)]
            siblings[i] = ctx
            acc.append((App(symbol, tuple(siblings)), label, sigma))
            pos[i] += 1
            rec(pos, acc)
            pos[i] -= 1
            acc.pop()

    rec([0] * n, [])
    return results


_RULE_RHS: dict = {}


def _term_after(src: Term, path: tuple, j: int) -> Term:
    if j == 0:
        return src
    ctx, label, sigma = path[j - 1]
    return substitute(ctx, {MARK: substitute(_RULE_RHS[label], sigma)})


def _dedup(items) -> list:
    seen = set()
    out = []
    for it in items:
        key = tuple((c, l, tuple(sorted(sg.items()))) for c, l, sg in it)
        if key not in seen:
            seen.add(key)
            out.append(it)
    return out


def _register(s: TwoStructure):
    for r in s.rules:
        _RULE_RHS[r.label] = r.rhs
    _unit_names.update(u.symbol for u in s.theory.units)


def _resolve(local_path, s: TwoStructure, outer: Term = Var(MARK)):
    steps = []
    for ctx, label, sigma in local_path:
        full = substitute(outer, {MARK: ctx})
        st = locate(full, label, sigma, s)
        if st is not None:
            steps.append(st)
    return tuple(steps)


def linearize(m: Morphism, s: TwoStructure) -> list:
    """All graph paths (tuples of ``Step``) that ``m`` normalises to."""
    _register(s)
    source_target(m, s)
    out = []
    seen = set()
    for lp in _local_paths(m, s):
        path = _resolve(lp, s)
        if path not in seen:
            seen.add(path)
            out.append(path)
    return out


# ---------------------------------------------------------------------------
# generators of the 2-cell congruence


@dataclass(frozen=True)
class Justification:
    kind: str  # 'functoriality' | 'naturality' | 'axiom' | 'identity'
    data: tuple = ()

    def describe(self, sig: Signature | None = None) -> str:
        if self.kind == "identity":
            return "identity face"
        if self.kind == "functoriality":
            a, b = self.data
            return f"functoriality({format_step(a)}, {format_step(b)})"
        if self.kind == "naturality":
            outer, var, inner = self.data
            return f"naturality({format_step(outer)}, {var}, {format_step(inner)})"
        name, sigma = self.data
        subst = ", ".join(f"{x}:={format_term(v, sig)}" for x, v in sigma)
        return f"axiom {name}[{subst}]"


@dataclass(frozen=True)
class Instance:
    """One generating 2-cell: every path in ``left`` equals every path in ``right``."""

    left: frozenset
    right: frozenset
    justification: Justification


def _disjoint(a: Step, b: Step) -> bool:
    for p in a.covers():
        for q in b.covers():
            n = min(len(p), len(q))
            if p[:n] == q[:n]:
                return False
    return True


def _functoriality(v: Term, steps: list, s: TwoStructure) -> list:
    out = []
    for a, b in itertools.combinations(steps, 2):
        if not _disjoint(a, b):
            continue
        first, second = (a, b) if min(a.covers()) > min(b.covers()) else (b, a)
        ctx = punch(v, first.path, first.seg, _MARK_A)
        ctx = punch(ctx, second.path, second.seg, _MARK_B)
        ia = {_MARK_A: substitute(s.rule(first.label).rhs, dict(first.sigma))}
        ib = {_MARK_B: substitute(s.rule(second.label).rhs, dict(second.sigma))}
        # residual of `second` after `first` and vice versa
        res_second = locate(_rename(substitute(ctx, ia), _MARK_B), second.label,
                            dict(second.sigma), s)
        res_first = locate(_rename(substitute(ctx, ib), _MARK_A), first.label,
                           dict(first.sigma), s)
        left = (first,) + ((res_second,) if res_second else ())
        right = (second,) + ((res_first,) if res_first else ())
        if left[-1].target != right[-1].target:
            continue
        out.append(Instance(frozenset([left]), frozenset([right]),
                            Justification("functoriality", (a, b))))
    return out


def _rename(t: Term, marker: str) -> Term:
    return substitute(t, {marker: Var(MARK)})


def _naturality(v: Term, steps: list, s: TwoStructure, unit_budget: int) -> list:
    out = []
    for st in steps:
        rule = s.rule(st.label)
        sigma = dict(st.sigma)
        ctx = punch(v, st.path, st.seg)
        for x in rule.variables:
            for inner in enumerate_steps(sigma[x], s, unit_budget):
                phi = step_morphism(inner, s)
                args = tuple(phi if y == x else identity_of(sigma[y]) for y in rule.variables)
                lhs_m = _pattern_morphism(rule.lhs, dict(zip(rule.variables, args)))
                rhs_m = _pattern_morphism(rule.rhs, dict(zip(rule.variables, args)))
                ends = {y: _raw_endpoints(a, s) for y, a in zip(rule.variables, args)}
                fire_t = (Var(MARK), st.label, {y: e[1] for y, e in ends.items()})
                fire_s = (Var(MARK), st.label, {y: e[0] for y, e in ends.items()})
                nat1 = [p + (fire_t,) for p in _local_paths(lhs_m, s)]
                nat2 = [(fire_s,) + p for p in _local_paths(rhs_m, s)]
                left = frozenset(_resolve(p, s, ctx) for p in nat1)
                right = frozenset(_resolve(p, s, ctx) for p in nat2)
                if left == right:
                    continue
                out.append(Instance(left, right, Justification("naturality", (st, x, inner))))
    return out


_AXIOM_SOURCES: dict = {}


def _axiom_sources(s: TwoStructure) -> list:
    got = _AXIOM_SOURCES.get(id(s))
    if got is not None and got[0] is s:
        return got[1]
    out = []
    for ax in s.axioms:
        if ax.identity_instance:
            continue
        src, _ = source_target(ax.lhs, s)
        out.append((ax, src))
    _AXIOM_SOURCES[id(s)] = (s, out)
    return out


def _axioms(v: Term, s: TwoStructure) -> list:
    out = []
    cands = _candidates(v, s)
    for ax, src in _axiom_sources(s):
        budget = len(variables(src))
        for path, seg, redex in cands:
            if not _could_match(src, redex, s):
                continue
            for key in match_units(src, redex, s.theory, budget):
                sigma = dict(key)
                ctx = punch(v, path, seg)
                lm = substitute_morphism(ax.lhs, sigma)
                rm = substitute_morphism(ax.rhs, sigma)
                left = frozenset(_resolve(p, s, ctx) for p in _local_paths(lm, s))
                right = frozenset(_resolve(p, s, ctx) for p in _local_paths(rm, s))
                if left == right or left & right:
                    continue
                out.append(Instance(left, right, Justification("axiom", (ax.name, key))))
    return out


_INSTANCES: dict = {}


def generator_instances(v: Term, s: TwoStructure, unit_budget: int = 2) -> list:
    """Generating faces whose common source is the vertex ``v``."""
    _register(s)
    cache = _INSTANCES.setdefault(id(s), (s, {}))
    if cache[0] is not s:
        cache = _INSTANCES[id(s)] = (s, {})
    memo = cache[1]
    key = (v, unit_budget)
    if key not in memo:
        steps = enumerate_steps(v, s, unit_budget)
        memo[key] = (_functoriality(v, steps, s)
                     + _naturality(v, steps, s, unit_budget)
                     + _axioms(v, s))
    return memo[key]


def face_between(left: tuple, right: tuple, s: TwoStructure,
                 unit_budget: int = 2) -> Justification | None:
    """Justification for the parallel paths ``left`` and ``right`` forming one face."""
    if left == right:
        return Justification("identity")
    if not left and not right:
        return Justification("identity")
    v = (left or right)[0].source
    for inst in generator_instances(v, s, unit_budget):
        if (left in inst.left and right in inst.right) or (left in inst.right and right in inst.left):
            return inst.justification
    return None


def face_instance(left: Morphism, right: Morphism, s: TwoStructure,
                  unit_budget: int = 2) -> Justification | None:
    """Justification if the parallel pair is a single generating face, else ``None``."""
    a = source_target(left, s)
    b = source_target(right, s)
    if a != b:
        raise MorphismTypeError("endpoint mismatch")
    for lp in linearize(left, s):
        for rp in linearize(right, s):
            j = face_between(lp, rp, s, unit_budget)
            if j is not None:
                return j
    return None

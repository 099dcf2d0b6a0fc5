"""Iterated monoidal categories as a 2-structure.

``build_imc(n)`` has binary symbols ``ot1 .. otn`` (each strictly associative
with the shared unit ``I``) and one interchange rule per pair ``i < j``::

    eta{i}{j}: ((a ot_j b) ot_i (c ot_j d)) -> ((a ot_i c) ot_j (b ot_i d))

Most of the combinatorics here is phrased through join indices: for two leaf
occurrences of a canonical term, the index of the tensor at which their paths
meet.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .rewriting import (
    Lift, Morphism, TwoStructure, identity_of, source_target,
)
from .structfile import loads
from .terms import App, Gen, Term, TermError, canonicalize, format_term, parse_term

UNIT = App("I")


def tensor(i: int) -> str:
    return f"ot{i}"


def index_of(symbol: str) -> int:
    return int(symbol[2:])


def eta(i: int, j: int) -> str:
    return f"eta{i}{j}" if max(i, j) < 10 else f"eta{i}_{j}"


def imc_text(n: int) -> str:
    if n < 1:
        raise ValueError("n must be at least 1")
    lines = [f"structure imc{n}"]
    lines += [f"symbol {tensor(i)} 2 infix" for i in range(1, n + 1)]
    lines += ["symbol I 0", "generators open"]
    lines += [f"assoc-unit {tensor(i)} I" for i in range(1, n + 1)]
    for i, j in itertools.combinations(range(1, n + 1), 2):
        oi, oj = tensor(i), tensor(j)
        lines.append(f"rule {eta(i, j)}: ((a {oj} b) {oi} (c {oj} d)) -> ((a {oi} c) {oj} (b {oi} d))")
    for i, j in itertools.combinations(range(1, n + 1), 2):
        e, oi, oj = eta(i, j), tensor(i), tensor(j)
        lines += [
            f"axiom unit-int-left-{i}{j} [identity]: {e}(1_a, 1_b, 1_I, 1_I) = 1_(a {oj} b)",
            f"axiom unit-int-right-{i}{j} [identity]: {e}(1_I, 1_I, 1_a, 1_b) = 1_(a {oj} b)",
            f"axiom unit-ext-left-{i}{j} [identity]: {e}(1_a, 1_I, 1_b, 1_I) = 1_(a {oi} b)",
            f"axiom unit-ext-right-{i}{j} [identity]: {e}(1_I, 1_a, 1_I, 1_b) = 1_(a {oi} b)",
            f"axiom internal-assoc-{i}{j}: "
            f"({e}(1_a, 1_b, 1_c, 1_d) {oi} 1_(e {oj} f)) ; {e}(1_(a {oi} c), 1_(b {oi} d), 1_e, 1_f)"
            f" = (1_(a {oj} b) {oi} {e}(1_c, 1_d, 1_e, 1_f)) ; {e}(1_a, 1_b, 1_(c {oi} e), 1_(d {oi} f))",
            f"axiom external-assoc-{i}{j}: "
            f"{e}(1_(a {oj} b), 1_c, 1_(d {oj} e), 1_f) ; ({e}(1_a, 1_b, 1_d, 1_e) {oj} 1_(c {oi} f))"
            f" = {e}(1_a, 1_(b {oj} c), 1_d, 1_(e {oj} f)) ; (1_(a {oi} d) {oj} {e}(1_b, 1_c, 1_e, 1_f))",
        ]
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        oi, oj, ok = tensor(i), tensor(j), tensor(k)
        eij, eik, ejk = eta(i, j), eta(i, k), eta(j, k)
        left = (f"{eij}(1_(a {ok} b), 1_(c {ok} d), 1_(e {ok} f), 1_(g {ok} h))"
                f" ; ({eik}(1_a, 1_b, 1_e, 1_f) {oj} {eik}(1_c, 1_d, 1_g, 1_h))"
                f" ; {ejk}(1_(a {oi} e), 1_(b {oi} f), 1_(c {oi} g), 1_(d {oi} h))")
        right = (f"({ejk}(1_a, 1_b, 1_c, 1_d) {oi} {ejk}(1_e, 1_f, 1_g, 1_h))"
                 f" ; {eik}(1_(a {oj} c), 1_(b {oj} d), 1_(e {oj} g), 1_(f {oj} h))"
                 f" ; ({eij}(1_a, 1_c, 1_e, 1_g) {ok} {eij}(1_b, 1_d, 1_f, 1_h))")
        lines.append(f"axiom hexagon-{i}{j}{k}: {left} = {right}")
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def build_imc(n: int) -> TwoStructure:
    return loads(imc_text(n))


def parse(text: str, n: int) -> Term:
    s = build_imc(n)
    return canonicalize(parse_term(text, s.sig), s.theory)


def show(t: Term, n: int | None = None) -> str:
    return format_term(t, build_imc(n or max(2, _max_index(t))).sig)


def _max_index(t: Term) -> int:
    if t.kind == "app" and t.args:
        return max([index_of(t.symbol)] + [_max_index(a) for a in t.args])
    return 1


# ---------------------------------------------------------------------------
# rankings


def rho_hat(t: Term) -> int:
    """``i + rho_hat(A) + 2 rho_hat(B)`` on ``A ot_i B``; units and generators rank 0.

    A flattened node is read left-nested.
    """
    if t.kind != "app" or not t.args:
        return 0
    i = index_of(t.symbol)
    acc = rho_hat(t.args[0])
    for b in t.args[1:]:
        acc = i + acc + 2 * rho_hat(b)
    return acc


@lru_cache(maxsize=None)
def rho(t: Term) -> int:
    """Minimum of ``rho_hat`` over the unit-free re-bracketings of the canonical ``t``."""
    if t.kind != "app" or not t.args:
        return 0
    i = index_of(t.symbol)
    vals = [rho(a) for a in t.args]
    k = len(vals)
    best = {(a, a + 1): vals[a] for a in range(k)}
    for width in range(2, k + 1):
        for a in range(0, k - width + 1):
            b = a + width
            best[(a, b)] = min(i + best[(a, m)] + 2 * best[(m, b)] for m in range(a + 1, b))
    return best[(0, k)]


def leaves(t: Term) -> list:
    """Leaf generators left to right (units are absent from canonical terms)."""
    if t.kind == "app":
        return [x for a in t.args for x in leaves(a)]
    return [t]


def join_profile(t: Term) -> dict:
    """``{(p, q): i}`` for leaf occurrence indices ``p < q`` meeting at ``ot_i``."""
    out: dict = {}

    def walk(u, start):
        if u.kind != "app" or not u.args:
            return 1 if u.kind != "app" else 0
        i = index_of(u.symbol)
        offs = []
        pos = start
        for a in u.args:
            w = walk(a, pos)
            offs.append((pos, pos + w))
            pos += w
        for (a0, a1), (b0, b1) in itertools.combinations(offs, 2):
            for p in range(a0, a1):
                for q in range(b0, b1):
                    out[(p, q)] = i
        return pos - start

    walk(t, 0)
    return out


def named_joins(t: Term) -> dict:
    """``{(a, b): i}`` over generators with ``a ot_i b`` in ``t`` (a left of b)."""
    ls = leaves(t)
    return {(ls[p], ls[q]): i for (p, q), i in join_profile(t).items()}


def verified_ranking(t: Term, n: int) -> int:
    """Sum over leaf pairs of ``n + 1 - join index``."""
    return sum(n + 1 - i for i in join_profile(t).values())


def ranking_for(n: int):
    return lambda t: verified_ranking(t, n)


# ---------------------------------------------------------------------------
# subtraction, occurrence and existence of maps


def _gen(x) -> Term:
    return x if not isinstance(x, str) else Gen(x)


def subtract(a: Term, xs) -> Term:
    xs = {_gen(x) for x in xs}
    present = set(leaves(a))
    missing = xs - present
    if missing:
        raise TermError(f"unknown variables {sorted(g.name for g in missing)}")
    th = build_imc(max(2, _max_index(a))).theory
    return canonicalize(_kill(a, xs), th)


def _kill(t: Term, xs: set) -> Term:
    if t.kind == "app":
        return App(t.symbol, tuple(_kill(a, xs) for a in t.args))
    return UNIT if t in xs else t


def occurs_in(b: Term, a: Term) -> bool:
    """Whether ``b`` is obtained from ``a`` by replacing some generators with ``I``."""
    lb = leaves(b)
    la = leaves(a)
    if not set(lb) <= set(la) or len(lb) != len(set(lb)):
        return False
    if len(lb) <= 1:
        return len(lb) == 0 or lb[0] in la
    if len(lb) == 2:
        joins = named_joins(a)
        return joins.get((lb[0], lb[1])) == index_of(b.symbol)
    return subtract(a, set(la) - set(lb)) == b


def occurs_in_by_search(b: Term, a: Term) -> bool:
    la = sorted(set(leaves(a)))
    for r in range(len(la) + 1):
        for xs in itertools.combinations(la, r):
            if subtract(a, xs) == b:
                return True
    return False


def map_exists(a: Term, b: Term) -> bool:
    """Existence criterion for maps between repetition-free terms."""
    la, lb = leaves(a), leaves(b)
    if len(la) != len(set(la)) or len(lb) != len(set(lb)):
        raise TermError("terms must be repetition-free")
    if set(la) != set(lb):
        raise TermError("variable sets differ")
    jb = named_joins(b)
    for (x, y), i in named_joins(a).items():
        if jb.get((x, y), 0) >= i:
            continue
        if jb.get((y, x), 0) > i:
            continue
        return False
    return True


# ---------------------------------------------------------------------------
# derived maps

DERIVED = ("iota", "tau", "delta", "delta~", "gamma", "gamma~")
_ALIASES = {"ι": "iota", "τ": "tau", "δ": "delta", "δ̃": "delta~", "γ": "gamma", "γ̃": "gamma~"}


def derived_map(kind: str, i: int, j: int, *args: Term) -> Morphism:
    """Interchange instance with units inserted, as a reduction expression.

    ``iota``    A ot_i B -> A ot_j B
    ``tau``     A ot_i B -> B ot_j A
    ``delta``   A ot_i (B ot_j C) -> (A ot_i B) ot_j C
    ``delta~``  A ot_i (B ot_j C) -> B ot_j (A ot_i C)
    ``gamma``   (A ot_j B) ot_i C -> A ot_j (B ot_i C)
    ``gamma~``  (A ot_j B) ot_i C -> (A ot_i C) ot_j B
    """
    kind = _ALIASES.get(kind, kind)
    if not 1 <= i < j:
        raise ValueError("derived maps need 1 <= i < j")
    want = 2 if kind in ("iota", "tau") else 3
    if kind not in DERIVED:
        raise ValueError(f"unknown derived map {kind!r}")
    if len(args) != want:
        raise ValueError(f"{kind} takes {want} objects")
    u = UNIT
    if kind == "iota":
        a, b = args
        quad = (a, u, u, b)
    elif kind == "tau":
        a, b = args
        quad = (u, a, b, u)
    elif kind == "delta":
        a, b, c = args
        quad = (a, u, b, c)
    elif kind == "delta~":
        a, b, c = args
        quad = (u, a, b, c)
    elif kind == "gamma":
        a, b, c = args
        quad = (a, b, u, c)
    else:
        a, b, c = args
        quad = (a, b, c, u)
    return Lift(eta(i, j), tuple(identity_of(x) for x in quad))


def derived_endpoints(kind: str, i: int, j: int, *args: Term) -> tuple:
    """Expected (source, target) of a derived map, built directly."""
    kind = _ALIASES.get(kind, kind)
    oi, oj = tensor(i), tensor(j)

    def T(op, x, y):
        return App(op, (x, y))

    if kind == "iota":
        a, b = args
        pair = T(oi, a, b), T(oj, a, b)
    elif kind == "tau":
        a, b = args
        pair = T(oi, a, b), T(oj, b, a)
    elif kind == "delta":
        a, b, c = args
        pair = T(oi, a, T(oj, b, c)), T(oj, T(oi, a, b), c)
    elif kind == "delta~":
        a, b, c = args
        pair = T(oi, a, T(oj, b, c)), T(oj, b, T(oi, a, c))
    elif kind == "gamma":
        a, b, c = args
        pair = T(oi, T(oj, a, b), c), T(oj, a, T(oi, b, c))
    else:
        a, b, c = args
        pair = T(oi, T(oj, a, b), c), T(oj, T(oi, a, c), b)
    th = build_imc(max(i, j)).theory
    return canonicalize(pair[0], th), canonicalize(pair[1], th)


def derived_source_target(kind, i, j, *args, n=None):
    s = build_imc(n or j)
    return source_target(derived_map(kind, i, j, *args), s)


# ---------------------------------------------------------------------------
# enumeration of repetition-free terms


def _ordered_partitions(items: tuple):
    """Sequences of non-empty blocks covering ``items`` (blocks keep item order)."""
    if not items:
        yield ()
        return
    for part in _set_partitions(items):
        for perm in itertools.permutations(part):
            yield perm


def _set_partitions(items: tuple):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [(head,)] + part
        for k in range(len(part)):
            yield part[:k] + [(head,) + part[k]] + part[k + 1:]


@lru_cache(maxsize=None)
def _terms_over(items: tuple, n: int, forbid: int) -> tuple:
    """Canonical terms whose leaves are exactly ``items`` in any order."""
    if len(items) == 1:
        return (Gen(items[0]),)
    out = []
    for i in range(1, n + 1):
        if i == forbid:
            continue
        for blocks in _ordered_partitions(items):
            if len(blocks) < 2:
                continue
            choices = [_terms_over(tuple(sorted(b)), n, i) for b in blocks]
            for kids in itertools.product(*choices):
                out.append(App(tensor(i), tuple(kids)))
    return tuple(out)


def all_terms(names, n: int) -> list:
    """All canonical terms using each generator in ``names`` exactly once."""
    items = tuple(sorted(names))
    if not items:
        return [UNIT]
    return list(_terms_over(items, n, 0))


@lru_cache(maxsize=None)
def _shapes(k: int, n: int, forbid: int) -> tuple:
    """Canonical term shapes with ``k`` leaves, leaves left unnamed (``None``)."""
    if k == 1:
        return (None,)
    out = []
    for i in range(1, n + 1):
        if i == forbid:
            continue
        for sizes in _compositions(k):
            if len(sizes) < 2:
                continue
            for kids in itertools.product(*(_shapes(m, n, i) for m in sizes)):
                out.append((i, kids))
    return tuple(out)


def _compositions(k: int):
    if k == 0:
        yield ()
        return
    for first in range(1, k + 1):
        for rest in _compositions(k - first):
            yield (first,) + rest


def _fill(shape, names):
    if shape is None:
        return Gen(next(names))
    i, kids = shape
    return App(tensor(i), tuple(_fill(c, names) for c in kids))


def ordered_terms(k: int, n: int, names: str = "ABCDEFGH") -> list:
    """Terms with generators ``names[:k]`` in left-to-right order.

    Every repetition-free term is a renaming of exactly one of these.
    """
    if k == 0:
        return [UNIT]
    return [_fill(sh, iter(names[:k])) for sh in _shapes(k, n, 0)]


def is_repetition_free(t: Term) -> bool:
    ls = leaves(t)
    return len(ls) == len(set(ls))


# ---------------------------------------------------------------------------
# non-confluence and Eckmann-Hilton triangles


def non_confluence_witness(n: int, i: int = 1, unit_budget: int = 4) -> dict:
    """The span ``iota, tau`` out of ``A ot_i B`` and the two reduct closures."""
    if n < 2:
        raise ValueError("non-confluence needs n >= 2")
    if not 1 <= i < n:
        raise ValueError("need 1 <= i < n")
    from .graph import Limits, reducts

    s = build_imc(n)
    a, b = Gen("A"), Gen("B")
    lim = Limits(unit_budget=unit_budget)
    left = canonicalize(App(tensor(n), (a, b)), s.theory)
    right = canonicalize(App(tensor(n), (b, a)), s.theory)
    ra = reducts(left, s, lim)
    rb = reducts(right, s, lim)
    return {
        "source": canonicalize(App(tensor(i), (a, b)), s.theory),
        "iota": derived_map("iota", i, n, a, b),
        "tau": derived_map("tau", i, n, a, b),
        "left": left,
        "right": right,
        "left_reducts": ra,
        "right_reducts": rb,
        "joinable": bool(set(ra) & set(rb)),
    }


def eckmann_hilton_triangles(i: int, j: int, k: int, n: int | None = None) -> list:
    """The four triangles relating derived maps across three indices.

    Each entry carries the two legs as reduction expressions and the
    hexagon substitution that collapses to it.
    """
    if not 1 <= i < j < k:
        raise ValueError("need 1 <= i < j < k")
    n = n or k
    s = build_imc(n)
    A, B = Gen("A"), Gen("B")
    u = UNIT

    def ot(x, y, m):
        return App(tensor(m), (x, y))

    def comp(*ms):
        from .rewriting import compose
        return compose(*ms)

    tri = []
    # (1) iota_ij ; iota_jk = iota_ik
    tri.append(("iota-iota",
                comp(derived_map("iota", i, j, A, B), derived_map("iota", j, k, A, B)),
                derived_map("iota", i, k, A, B),
                {"a": A, "h": B}))
    # (2) tau_ij ; tau_jk = iota_ik
    tri.append(("tau-tau",
                comp(derived_map("tau", i, j, A, B), derived_map("tau", j, k, B, A)),
                derived_map("iota", i, k, A, B),
                {"c": A, "f": B}))
    # (3) iota_ij ; tau_jk = tau_ik
    tri.append(("iota-tau",
                comp(derived_map("iota", i, j, A, B), derived_map("tau", j, k, A, B)),
                derived_map("tau", i, k, A, B),
                {"b": A, "g": B}))
    # (4) tau_ij ; iota_jk = tau_ik
    tri.append(("tau-iota",
                comp(derived_map("tau", i, j, A, B), derived_map("iota", j, k, B, A)),
                derived_map("tau", i, k, A, B),
                {"d": A, "e": B}))
    out = []
    names = "abcdefgh"
    for name, left, right, sub in tri:
        sigma = {x: sub.get(x, u) for x in names}
        hex_source = ot(ot(ot(sigma["a"], sigma["b"], k), ot(sigma["c"], sigma["d"], k), j),
                        ot(ot(sigma["e"], sigma["f"], k), ot(sigma["g"], sigma["h"], k), j), i)
        out.append({
            "name": name,
            "left": left,
            "right": right,
            "substitution": sigma,
            "hexagon_source": hex_source,
            "endpoints": source_target(left, s),
        })
    return out

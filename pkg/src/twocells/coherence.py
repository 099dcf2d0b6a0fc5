"""Deciding commutativity of parallel reductions, and Mac Lane scans.

``decide_commutes`` first tries to tile the region between two paths with
generating faces, working from the common source downwards: it picks a
generating face whose left side starts like the left path, closes the face,
and recurses on the two smaller regions this leaves.  When the tiling search
gives up it falls back to enumerating every subdivision of the region and
checking each face directly.  Only that exhaustive search may answer
"not equal", and only when the reduction graph was explored completely.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .graph import Limits, ReductionGraph, explore, hom_paths
from .planar import (
    DiamondScan, PlanarError, Subdivision, _split_common, embeddings, _make,
    enumerate_diamonds, enumerate_subdivisions, faces_of, span_edges,
)
from .rewriting import (
    Justification, MorphismTypeError, Step, TwoStructure, enumerate_steps,
    face_between, format_step, generator_instances, is_general_position,
    linearize, path_morphism, source_target,
)
from .rewriting import _naturality
from .terms import (
    App, Gen, TermError, Var, format_term, sort_terms, substitute, term_key,
    variables,
)


class CoherenceError(TermError):
    """The reduction graph around a pair has a directed cycle."""


class ResourceLimit(RuntimeError):
    """A search hit one of the configured limits."""


@dataclass(frozen=True)
class FaceProof:
    left: tuple
    right: tuple
    justification: Justification


@dataclass
class Verdict:
    status: str  # 'equal' | 'not-equal' | 'exhausted'
    alpha: tuple = ()
    beta: tuple = ()
    faces: list = field(default_factory=list)
    subdivision: Subdivision | None = None
    searched: int = 0
    reason: str = ""

    @property
    def equal(self) -> bool:
        return self.status == "equal"

    @property
    def summary(self) -> str:
        if self.status == "equal":
            return f"Equal ({len(self.faces)} faces)"
        if self.status == "not-equal":
            return f"NotEqual (searched {self.searched} subdivisions)"
        return f"ResourceExhausted ({self.reason})"

    def to_json(self, sig=None) -> dict:
        def path(p):
            return [{"source": format_term(e.source, sig), "step": format_step(e),
                     "target": format_term(e.target, sig)} for e in p]

        return {
            "verdict": {"equal": "Equal", "not-equal": "NotEqual",
                        "exhausted": "ResourceExhausted"}[self.status],
            "alpha": path(self.alpha),
            "beta": path(self.beta),
            "faces": [{"left": path(f.left), "right": path(f.right),
                       "justification": f.justification.describe(sig)} for f in self.faces],
            "searched": self.searched,
            "reason": self.reason,
        }


_KIND_COLOURS = {"functoriality": "blue", "naturality": "darkgreen",
                 "axiom": "red", "identity": "grey"}


def verdict_dot(v: Verdict, sig=None) -> str:
    """Edges of the witness, coloured by the kind of the face they bound."""
    colour: dict = {}
    for f in v.faces:
        for e in f.left + f.right:
            colour.setdefault(e, _KIND_COLOURS.get(f.justification.kind, "black"))
    edges = list(dict.fromkeys(list(v.alpha) + list(v.beta) + list(colour)))
    verts = list(dict.fromkeys([e.source for e in edges] + [e.target for e in edges]))
    ids = {t: f"v{i}" for i, t in enumerate(verts)}
    lines = ["digraph verdict {", "  rankdir=LR;"]
    for t in verts:
        label = format_term(t, sig).replace('"', '\\"')
        lines.append(f'  {ids[t]} [label="{label}"];')
    for e in edges:
        c = colour.get(e, "black")
        lines.append(f'  {ids[e.source]} -> {ids[e.target]} [label="{format_step(e)}", color={c}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the decision procedure


class _Prover:
    def __init__(self, s: TwoStructure, g: ReductionGraph, lim: Limits, gammas: int = 3):
        self.s = s
        self.g = g
        self.lim = lim
        self.gammas = gammas
        self.memo: dict = {}
        self.paths: dict = {}

    def hom(self, u, t) -> list:
        key = (u, t)
        if key not in self.paths:
            ps = hom_paths(self.g, u, t, self.lim)
            self.paths[key] = sorted(ps, key=len)
        return self.paths[key]

    def prove(self, alpha: tuple, beta: tuple, budget: int):
        """Faces tiling the region between the paths, or ``None``."""
        if alpha == beta:
            return []
        # an instance may pass through a vertex the two paths share
        j = face_between(alpha, beta, self.s, self.lim.unit_budget)
        if j is not None:
            return [FaceProof(alpha, beta, j)]
        out = []
        for a, b in _split_common(alpha, beta):
            if a == b:
                continue
            got = self.simple(a, b, budget)
            if got is None:
                return None
            out.extend(got)
        return out

    def simple(self, alpha, beta, budget):
        key = (alpha, beta)
        if key in self.memo:
            got = self.memo[key]
            if got is None or got[0] >= budget:
                return None if got is None else got[1]
        self.memo[key] = None  # guards against re-entry
        res = self._simple(alpha, beta, budget)
        self.memo[key] = None if res is None else (budget, res)
        return res

    def _simple(self, alpha, beta, budget):
        ub = self.lim.unit_budget
        j = face_between(alpha, beta, self.s, ub)
        if j is not None:
            return [FaceProof(alpha, beta, j)]
        v, t = alpha[0].source, alpha[-1].target
        tries = []
        for inst in generator_instances(v, self.s, ub):
            for xs, ys in ((inst.left, inst.right), (inst.right, inst.left)):
                for x in xs:
                    if not x or x[0] != alpha[0]:
                        continue
                    for y in ys:
                        if not y or y[0] == alpha[0]:
                            continue
                        direct = y[0] == beta[0]
                        if not direct and budget <= 0:
                            continue
                        tries.append((not direct, len(x) + len(y), x, y, inst.justification))
        tries.sort(key=lambda r: (r[0], r[1]))
        for sideways, _, x, y, just in tries:
            w = x[-1].target
            if y[-1].target != w or w not in self.g:
                continue
            if w == t:
                gammas = [()]
            else:
                gammas = self.hom(w, t)[: self.gammas]
            nb = budget - 1 if sideways else budget
            for gamma in gammas:
                left = self.prove(alpha, x + gamma, nb)
                if left is None:
                    continue
                right = self.prove(y + gamma, beta, nb)
                if right is None:
                    continue
                return left + [FaceProof(x, y, just)] + right
        return None


def _exhaustive(s, g, alpha, beta, lim):
    """``(proof, subdivision, searched, complete)`` over all subdivisions."""
    ub = lim.unit_budget
    searched = 0
    try:
        subs = enumerate_subdivisions(g, alpha, beta, lim)
    except PlanarError:
        return None, None, searched, False
    for sub in subs:
        searched += 1
        proof = []
        for f in faces_of(sub):
            j = face_between(f.left, f.right, s, ub)
            if j is None:
                break
            proof.append(FaceProof(f.left, f.right, j))
        else:
            return proof, sub, searched, True
    return None, None, searched, True


def _witness_subdivision(alpha, beta, faces, cap: int = 20000):
    """A subdivision whose faces are exactly the tiles, when one is found cheaply."""
    edges = frozenset(alpha) | frozenset(beta)
    for f in faces:
        edges |= frozenset(f.left) | frozenset(f.right)
    want = {frozenset([f.left, f.right]) for f in faces}
    try:
        for rot, got in embeddings(alpha, beta, edges, cap):
            if {frozenset([f.left, f.right]) for f in got} == want:
                return _make(alpha, beta, edges, rot, got)
    except PlanarError:
        return None
    return None


def decide_paths(s: TwoStructure, g: ReductionGraph, alpha: tuple, beta: tuple,
                 lim: Limits = Limits()) -> Verdict:
    """Decide two parallel edge-paths of an explored graph."""
    alpha, beta = tuple(alpha), tuple(beta)
    if alpha == beta:
        sub = _witness_subdivision(alpha, beta, []) if alpha else None
        return Verdict("equal", alpha, beta, [], sub)
    src, tgt = alpha[0].source, alpha[-1].target
    if beta[0].source != src or beta[-1].target != tgt:
        raise MorphismTypeError("paths are not parallel")
    complete = True
    try:
        span_edges(g, src, tgt)
    except PlanarError as exc:
        if "cycle" in str(exc):
            raise CoherenceError(f"reduction graph is not quasicycle-free: {exc}") from None
        complete = False
    prover = _Prover(s, g, lim)
    faces = prover.prove(alpha, beta, lim.recursion_depth)
    if faces is not None:
        reason = "rewrite chain through a pinched instance" if _pinched(faces) else ""
        return Verdict("equal", alpha, beta, faces, _witness_subdivision(alpha, beta, faces),
                       reason=reason)
    searched = 0
    all_faces = []
    for a, b in _split_common(alpha, beta):
        if a == b:
            continue
        proof, _, n, done = _exhaustive(s, g, a, b, lim)
        searched += n
        if proof is None:
            if not (done and complete):
                return Verdict("exhausted", alpha, beta, searched=searched,
                               reason="subdivision search incomplete")
            chain = _pinched_chain(s, alpha, beta, lim)
            if chain is None:
                return Verdict("not-equal", alpha, beta, searched=searched)
            return Verdict("equal", alpha, beta, chain, None, searched,
                           reason="rewrite chain through a pinched instance")
        all_faces.extend(proof)
    return Verdict("equal", alpha, beta, all_faces,
                   _witness_subdivision(alpha, beta, all_faces), searched)


def _pinched(faces) -> bool:
    """Some face has sides meeting at an interior vertex."""
    for f in faces:
        inner_left = {e.target for e in f.left[:-1]}
        if inner_left & {e.target for e in f.right[:-1]}:
            return True
    return False


def _pinched_chain(s, alpha, beta, lim):
    """Rewrites turning ``alpha`` into ``beta`` inside their finite hom-set.

    No subdivision sees an instance whose two sides meet at an interior
    vertex: every planar drawing splits it into bigons that are not instances
    themselves.  Such pairs are still equal, so before reporting inequality
    the rewrite class of ``alpha`` is closed, keeping the chain of faces.
    """
    ub = lim.unit_budget
    back = {alpha: None}
    queue = deque([alpha])
    while queue:
        p = queue.popleft()
        for i in range(len(p)):
            for inst in generator_instances(p[i].source, s, ub):
                members = sorted(inst.left | inst.right, key=len)
                for x in members:
                    if not x or p[i:i + len(x)] != x:
                        continue
                    for y in members:
                        if y == x:
                            continue
                        q = p[:i] + y + p[i + len(x):]
                        if q in back:
                            continue
                        back[q] = (p, FaceProof(x, y, inst.justification))
                        if q == beta:
                            chain = []
                            while back[q] is not None:
                                q, f = back[q]
                                chain.append(f)
                            return chain[::-1]
                        if len(back) > lim.max_vertices:
                            raise ResourceLimit("rewrite class too large")
                        queue.append(q)
    return None


def _path_of(m, s, lim):
    paths = linearize(m, s)
    if not paths:
        raise MorphismTypeError("morphism has no linearization")
    return paths[0]


def decide_commutes(s: TwoStructure, m1, m2, lim: Limits = Limits()) -> Verdict:
    """Whether two parallel morphisms are equal in the free structure."""
    e1 = source_target(m1, s)
    e2 = source_target(m2, s)
    if e1 != e2:
        raise MorphismTypeError(
            f"endpoint mismatch: {format_term(e1[0], s.sig)} -> {format_term(e1[1], s.sig)}"
            f" versus {format_term(e2[0], s.sig)} -> {format_term(e2[1], s.sig)}")
    alpha = _path_of(m1, s, lim)
    beta = _path_of(m2, s, lim)
    if alpha == beta:
        sub = _witness_subdivision(alpha, beta, []) if alpha else None
        return Verdict("equal", alpha, beta, [], sub)
    # a proof found in a small neighbourhood stays valid in the whole graph
    j = face_between(alpha, beta, s, lim.unit_budget)
    if j is not None:
        faces = [FaceProof(alpha, beta, j)]
        return Verdict("equal", alpha, beta, faces, _witness_subdivision(alpha, beta, faces))
    small = Limits(min(lim.max_vertices, 2000), lim.max_depth, lim.max_path_length,
                   lim.unit_budget, lim.recursion_depth)
    g = explore([e1[0]], s, small)
    if not g.complete and all(e.source in g and e in g.out_edges[e.source] for e in alpha + beta):
        faces = _Prover(s, g, small).prove(alpha, beta, lim.recursion_depth)
        if faces is not None:
            return Verdict("equal", alpha, beta, faces, _witness_subdivision(alpha, beta, faces))
    if not g.complete:
        g = explore([e1[0]], s, lim)
    for e in alpha + beta:
        if e.source not in g or e not in g.out_edges[e.source]:
            return Verdict("exhausted", alpha, beta, reason="paths leave the explored graph")
    return decide_paths(s, g, alpha, beta, lim)


# ---------------------------------------------------------------------------
# brute-force oracle


def _moves(path: tuple, s: TwoStructure, unit_budget: int):
    for i in range(len(path)):
        v = path[i].source
        for inst in generator_instances(v, s, unit_budget):
            members = list(inst.left | inst.right)
            for x in members:
                if not x or path[i:i + len(x)] != x:
                    continue
                for y in members:
                    if y != x:
                        yield path[:i] + y + path[i + len(x):]


def brute_force_equal(s: TwoStructure, m1, m2, lim: Limits = Limits(),
                      max_classes: int | None = None) -> bool:
    """Breadth-first closure of ``m1``'s path under single generator rewrites.

    Raises ``ResourceLimit`` when more than ``max_classes`` paths (default
    ``lim.max_vertices``) are visited without reaching ``m2``.
    """
    if source_target(m1, s) != source_target(m2, s):
        raise MorphismTypeError("endpoint mismatch")
    return brute_force_paths(s, _path_of(m1, s, lim), _path_of(m2, s, lim), lim, max_classes)


def brute_force_paths(s: TwoStructure, alpha: tuple, beta: tuple, lim: Limits = Limits(),
                      max_classes: int | None = None) -> bool:
    cap = lim.max_vertices if max_classes is None else max_classes
    alpha, beta = tuple(alpha), tuple(beta)
    if alpha == beta:
        return True
    seen = {alpha}
    queue = deque([alpha])
    while queue:
        p = queue.popleft()
        for q in _moves(p, s, lim.unit_budget):
            if q == beta:
                return True
            if q in seen:
                continue
            if len(q) > lim.max_path_length * 4:
                continue
            seen.add(q)
            if len(seen) > cap:
                raise ResourceLimit(f"more than {cap} paths visited")
            queue.append(q)
    return False


# ---------------------------------------------------------------------------
# initial spans


@dataclass(frozen=True)
class SpanClass:
    kind: str  # 'disjoint' | 'nested' | 'overlap'
    first: Step
    second: Step

    @property
    def peak(self) -> tuple:
        """Superposition term and the two contractions."""
        return (self.first.source, self.first.target, self.second.target)


def _footprints_disjoint(a: Step, b: Step) -> bool:
    for p in a.covers():
        for q in b.covers():
            n = min(len(p), len(q))
            if p[:n] == q[:n]:
                return False
    return True


def classify_span(g: ReductionGraph | None, step1: Step, step2: Step,
                  s: TwoStructure, unit_budget: int = 2) -> SpanClass:
    """Disjoint, nested (one redex inside a variable of the other) or overlapping.

    ``g`` is accepted for symmetry with the other graph operations and may be
    ``None``; only the two steps and the structure are consulted.
    """
    if step1.source != step2.source:
        raise ValueError("steps do not share a source")
    if _footprints_disjoint(step1, step2):
        return SpanClass("disjoint", step1, step2)
    for outer in (step1, step2):
        for inst in _naturality(outer.source, [outer], s, unit_budget):
            firsts = {p[0] for p in inst.left | inst.right if p}
            if step1 in firsts and step2 in firsts:
                return SpanClass("nested", step1, step2)
    return SpanClass("overlap", step1, step2)


def _positions(t):
    """Non-variable positions of a pattern."""
    if t.kind != "app":
        return [()] if t.kind == "gen" else []
    out = [()]
    for k, a in enumerate(t.args):
        out.extend((k,) + p for p in _positions(a))
    return out


def _at(t, p):
    for k in p:
        t = t.args[k]
    return t


def _walk(t, sigma):
    while t.kind == "var" and t.name in sigma:
        t = sigma[t.name]
    return t


def _occurs(name, t, sigma) -> bool:
    t = _walk(t, sigma)
    if t.kind == "var":
        return t.name == name
    if t.kind == "app":
        return any(_occurs(name, a, sigma) for a in t.args)
    return False


def unify(a, b, sigma=None) -> dict | None:
    """Syntactic most general unifier, as a triangular substitution."""
    sigma = dict(sigma or {})
    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        x, y = _walk(x, sigma), _walk(y, sigma)
        if x == y:
            continue
        if x.kind == "var":
            if _occurs(x.name, y, sigma):
                return None
            sigma[x.name] = y
        elif y.kind == "var":
            todo.append((y, x))
        elif x.kind == "app" and y.kind == "app":
            if x.symbol != y.symbol or len(x.args) != len(y.args):
                return None
            todo.extend(zip(x.args, y.args))
        else:
            return None
    return sigma


def _resolve_subst(t, sigma):
    t = _walk(t, sigma)
    if t.kind == "app" and t.args:
        return App(t.symbol, tuple(_resolve_subst(a, sigma) for a in t.args))
    return t


_FRESH = "ABCDEFGHJKLMNOPQRSTUVWXYZ"


def _ground(t):
    names = variables(t)
    if len(names) > len(_FRESH):
        raise ValueError("too many variables to ground")
    return substitute(t, {x: Gen(_FRESH[k]) for k, x in enumerate(names)})


def _rename_apart(t, suffix="'"):
    return substitute(t, {x: Var(x + suffix) for x in variables(t)})


def _superpositions(s: TwoStructure, unit_budget: int):
    terms = []
    rules = list(s.rules)
    for r1, r2 in itertools.product(rules, repeat=2):
        other = _rename_apart(r2.lhs)
        for p in _positions(r1.lhs):
            sub = _at(r1.lhs, p)
            if sub.kind == "gen":
                continue
            sigma = unify(sub, other)
            if sigma is not None:
                terms.append((r1, _ground(_resolve_subst(r1.lhs, sigma))))
    au = [(sym, unit) for sym, unit in s.theory.assoc_unit]
    if au:
        for r1 in rules:
            names = variables(r1.lhs)
            options = [("gen",)] + [("unit", u) for _, u in dict.fromkeys(au)] + \
                      [("prod", sym) for sym, _ in au]
            for choice in itertools.product(options, repeat=len(names)):
                if sum(1 for c in choice if c[0] == "unit") > unit_budget:
                    continue
                if sum(1 for c in choice if c[0] == "prod") > 1:
                    continue
                sigma = {}
                for x, c in zip(names, choice):
                    if c[0] == "gen":
                        sigma[x] = Var(x)
                    elif c[0] == "unit":
                        sigma[x] = App(c[1])
                    else:
                        sigma[x] = App(c[1], (Var(x + "1"), Var(x + "2")))
                terms.append((r1, _ground(substitute(r1.lhs, sigma))))
    return terms


def critical_spans(s: TwoStructure, lim: Limits = Limits()) -> list:
    """Overlapping initial spans whose first step rewrites the whole term.

    Superposition terms come from syntactic unification of a rule's left side
    at each of its non-variable positions with every (renamed) left side.
    Under an associative-unit theory this misses overlaps visible only modulo
    the theory, so every left side is also instantiated with units (within
    the unit budget) and with one variable split into a product.
    """
    seen = set()
    out = []
    for r1, raw in _superpositions(s, lim.unit_budget):
        t = s.canon(raw)
        steps = enumerate_steps(t, s, lim.unit_budget)
        tops = [st for st in steps if st.label == r1.label and st.path == () and st.seg is None]
        for top in tops:
            for other in steps:
                if other == top:
                    continue
                key = (t, frozenset([top, other]))
                if key in seen:
                    continue
                seen.add(key)
                c = classify_span(None, top, other, s, lim.unit_budget)
                if c.kind == "overlap":
                    out.append(c)
    out.sort(key=lambda c: (term_key(c.first.source), c.first.key(), c.second.key()))
    return out


# ---------------------------------------------------------------------------
# Mac Lane scans


def left_linear(s: TwoStructure) -> bool:
    """No rule repeats a variable on its left side."""
    def occurrences(t):
        if t.kind == "var":
            return [t.name]
        if t.kind == "app":
            return [x for a in t.args for x in occurrences(a)]
        return []

    for r in s.rules:
        occ = occurrences(r.lhs)
        if len(occ) != len(set(occ)):
            return False
    return True


def linear_terms(s: TwoStructure, max_size: int, names: str = _FRESH,
                 repeats: bool = False) -> list:
    """Canonical terms of at most ``max_size`` nodes, up to renaming generators.

    Generators are named in order of first occurrence; without ``repeats``
    they are pairwise distinct.  Units of the object theory are left out,
    other constants are allowed.  A closed generator set is used as is.
    """
    units = {u for _, u in s.theory.assoc_unit}
    consts = [f for f, ar in s.sig.symbols.items() if ar == 0 and f not in units]
    funcs = sorted((f, ar) for f, ar in s.sig.symbols.items() if ar > 0)
    closed = s.sig.generators is not None
    pool = sorted(s.sig.generators) if closed else list(names)
    by_size: dict = {1: [None] + [App(c) for c in consts]}
    for n in range(2, max_size + 1):
        level = []
        for f, ar in funcs:
            for sizes in _splits(n - 1, ar):
                for args in itertools.product(*(by_size[k] for k in sizes)):
                    level.append(App(f, args))
        by_size[n] = level
    out = set()
    for level in by_size.values():
        for shape in level:
            holes = _count_holes(shape)
            if closed and repeats:
                fills = itertools.product(pool, repeat=holes)
            elif repeats:
                fills = (tuple(pool[k] for k in rgs) for rgs in _growth_strings(holes))
            elif holes <= len(pool):
                fills = [tuple(pool[:holes])]
            else:
                fills = []
            for fill in fills:
                out.add(s.canon(_fill_holes(shape, iter(fill))))
    return sort_terms(out)


def _growth_strings(n: int):
    """Restricted growth strings: one naming per partition of the leaves."""
    def rec(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in range(top + 2):
            yield from rec(prefix + [k], max(top, k))
    yield from rec([], -1)


def general_position_sources(s: TwoStructure, max_term_size: int) -> list:
    """Sources whose diamonds include every general-position diamond up to renaming.

    With left-linear rules a general-position reduction never needs two
    equal generators, so linear terms suffice; otherwise repeated generators
    are allowed and diamonds are filtered afterwards.
    """
    return linear_terms(s, max_term_size, repeats=not left_linear(s))


def _splits(total, parts):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _splits(total - first, parts - 1):
            yield (first,) + rest


def _count_holes(t) -> int:
    if t is None:
        return 1
    return sum(_count_holes(a) for a in t.args)


def _fill_holes(t, it):
    if t is None:
        return Gen(next(it))
    if not t.args:
        return t
    return App(t.symbol, tuple(_fill_holes(a, it) for a in t.args))


@dataclass
class MacLaneReport:
    sources: list
    diamonds: int = 0
    commuting: int = 0
    counterexamples: list = field(default_factory=list)  # Verdicts
    exhausted: list = field(default_factory=list)
    truncated: bool = False
    inexact: int = 0

    @property
    def ok(self) -> bool:
        return not self.counterexamples and not self.exhausted

    def merge(self, other: "MacLaneReport") -> "MacLaneReport":
        return MacLaneReport(self.sources + other.sources,
                             self.diamonds + other.diamonds,
                             self.commuting + other.commuting,
                             self.counterexamples + other.counterexamples,
                             self.exhausted + other.exhausted,
                             self.truncated or other.truncated,
                             self.inexact + other.inexact)

    def to_json(self, sig=None) -> dict:
        return {
            "sources": [format_term(t, sig) for t in self.sources],
            "diamonds": self.diamonds,
            "commuting": self.commuting,
            "counterexamples": [v.to_json(sig) for v in self.counterexamples],
            "exhausted": [v.to_json(sig) for v in self.exhausted],
            "truncated": self.truncated,
            "inexact_diamond_checks": self.inexact,
        }


def scan_source(s: TwoStructure, source, lim: Limits = Limits()) -> MacLaneReport:
    g = explore([source], s, lim)
    if g.find_cycle() is not None:
        raise CoherenceError("reduction graph is not quasicycle-free")
    scan: DiamondScan = enumerate_diamonds(g, source, lim, report=True)
    rep = MacLaneReport([source], truncated=scan.truncated, inexact=scan.inexact)
    for a, b in scan.diamonds:
        if not (is_general_position(path_morphism(a, s), s)
                and is_general_position(path_morphism(b, s), s)):
            continue
        rep.diamonds += 1
        v = decide_paths(s, g, a, b, lim)
        if v.equal:
            rep.commuting += 1
        elif v.status == "not-equal":
            rep.counterexamples.append(v)
        else:
            rep.exhausted.append(v)
    return rep


def maclane_report(s: TwoStructure, max_term_size: int, lim: Limits = Limits(),
                   sources=None) -> MacLaneReport:
    """Check every diamond out of every general-position source.

    ``sources`` defaults to ``general_position_sources(s, max_term_size)``.
    """
    if sources is None:
        sources = general_position_sources(s, max_term_size)
    rep = MacLaneReport([])
    for t in sources:
        rep = rep.merge(scan_source(s, s.canon(t), lim))
    return rep

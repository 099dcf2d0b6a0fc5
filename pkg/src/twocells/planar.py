"""Planar st-graphs between a parallel pair of reduction paths.

A subdivision is stored combinatorially: a set of edges plus, at every vertex,
the left-to-right order of its outgoing and of its incoming edges.  Drawing the
graph with the source on top and the target at the bottom, ``alpha`` is the
leftmost path and ``beta`` the rightmost.  The clockwise rotation at a vertex
is its outgoing edges right-to-left followed by its incoming edges
left-to-right; faces are the orbits of "turn to the next edge clockwise after
the edge you arrived on".  Two subdivisions are the same exactly when their
edges and rotations agree.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, prod

from .graph import Limits, ReductionGraph, hom_paths
from .rewriting import Step
from .terms import term_key


class PlanarError(ValueError):
    """Span not fully explored, cyclic, or an inconsistent embedding."""


@dataclass(frozen=True)
class Face:
    left: tuple
    right: tuple
    source: object
    target: object

    @property
    def edges(self) -> frozenset:
        return frozenset(self.left) | frozenset(self.right)


@dataclass(frozen=True)
class Subdivision:
    source: object
    target: object
    alpha: tuple
    beta: tuple
    edges: frozenset
    rotation: tuple  # sorted ((vertex_key, vertex, outs, ins), ...)
    _faces: tuple = field(default=(), compare=False, hash=False, repr=False)

    @property
    def vertices(self) -> list:
        return [r[1] for r in self.rotation]

    def outs(self, v) -> tuple:
        return self._rot()[v][0]

    def ins(self, v) -> tuple:
        return self._rot()[v][1]

    def _rot(self) -> dict:
        return {r[1]: (r[2], r[3]) for r in self.rotation}

    @property
    def faces(self) -> tuple:
        return self._faces


_vkey = lru_cache(maxsize=None)(term_key)


@lru_cache(maxsize=None)
def _ekey(e: Step):
    return (_vkey(e.source), e.key())


# ---------------------------------------------------------------------------
# spans


def span_edges(g: ReductionGraph, s, t) -> list:
    """Edges lying on some directed path ``s -> t``."""
    fwd = g.reachable(s)
    back = g.coreachable(t)
    inside = fwd & back
    if g.frontier & inside:
        raise PlanarError("span is not fully explored")
    out = [e for v in sorted(inside, key=_vkey) for e in g.out_edges[v] if e.target in inside]
    sub = ReductionGraph()
    for v in inside:
        sub.vertices.append(v)
        sub.out_edges[v] = []
        sub.in_edges[v] = []
    for e in out:
        sub.out_edges[e.source].append(e)
        sub.in_edges[e.target].append(e)
    if sub.find_cycle() is not None:
        raise PlanarError("span contains a directed cycle")
    return out


def path_vertices(path) -> list:
    return [path[0].source] + [e.target for e in path]


def _split_common(alpha: tuple, beta: tuple) -> list:
    """Cut a parallel pair at the vertices both paths pass through."""
    va, vb = path_vertices(alpha), path_vertices(beta)
    common = [v for v in va if v in set(vb)]
    pos_a = {v: i for i, v in enumerate(va)}
    pos_b = {v: i for i, v in enumerate(vb)}
    out = []
    for u, w in zip(common, common[1:]):
        out.append((alpha[pos_a[u]:pos_a[w]], beta[pos_b[u]:pos_b[w]]))
    return out


# ---------------------------------------------------------------------------
# embeddings


def _orbits(edges, rot):
    """Face orbits as lists of darts ``(edge, +1 | -1)``."""
    cw = {v: tuple(reversed(o)) + tuple(i) for v, (o, i) in rot.items()}
    index = {v: {e: k for k, e in enumerate(c)} for v, c in cw.items()}
    seen = set()
    orbits = []
    for e in sorted(edges, key=_ekey):
        for d in (1, -1):
            if (e, d) in seen:
                continue
            orbit = []
            cur = (e, d)
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                edge, direction = cur
                head = edge.target if direction == 1 else edge.source
                c = cw[head]
                nxt = c[(index[head][edge] + 1) % len(c)]
                cur = (nxt, 1 if nxt.source == head else -1)
            orbits.append(orbit)
    return orbits


def _face_from_orbit(orbit) -> Face | None:
    """Split an orbit into its forward and backward runs; ``None`` if not a face."""
    n = len(orbit)
    changes = [k for k in range(n) if orbit[k][1] != orbit[k - 1][1]]
    if len(changes) != 2:
        return None
    a, b = changes
    run1 = [orbit[k % n] for k in range(a, b)]
    run2 = [orbit[k % n] for k in range(b, a + n)]
    fwd, bwd = (run1, run2) if run1[0][1] == 1 else (run2, run1)
    left = tuple(e for e, _ in fwd)
    right = tuple(e for e, _ in reversed(bwd))
    if right[0].source != left[0].source or right[-1].target != left[-1].target:
        return None
    return Face(left, right, right[0].source, right[-1].target)


def check_embedding(alpha, beta, edges, rot) -> tuple | None:
    """Faces of a valid embedding, or ``None``.

    Valid means: Euler's formula holds, the outer walk is ``beta`` forward
    then ``alpha`` backward, and every inner face has one source and one target.
    """
    vertices = set(rot)
    orbits = _orbits(edges, rot)
    if len(vertices) - len(edges) + len(orbits) != 2:
        return None
    outer = [(e, 1) for e in beta] + [(e, -1) for e in reversed(alpha)]
    outer_orbit = None
    for orb in orbits:
        if (beta[0], 1) in orb:
            outer_orbit = orb
            break
    if outer_orbit is None or len(outer_orbit) != len(outer):
        return None
    k = outer_orbit.index((beta[0], 1))
    if outer_orbit[k:] + outer_orbit[:k] != outer:
        return None
    faces = []
    for orb in orbits:
        if orb is outer_orbit:
            continue
        f = _face_from_orbit(orb)
        if f is None:
            return None
        faces.append(f)
    faces.sort(key=lambda f: (tuple(_ekey(e) for e in f.left), tuple(_ekey(e) for e in f.right)))
    return tuple(faces)


def _vertex_orders(v, outs, ins, alpha_set, beta_set):
    """Admissible (outs, ins) orders: alpha's edge first, beta's edge last."""

    def orders(items):
        first = [e for e in items if e in alpha_set]
        last = [e for e in items if e in beta_set]
        if first and last and first[0] == last[0]:
            if len(items) != 1:
                return []
            return [tuple(items)]
        middle = [e for e in items if e not in alpha_set and e not in beta_set]
        out = []
        for perm in itertools.permutations(middle):
            out.append(tuple(first) + perm + tuple(last))
        return out

    return [(o, i) for o in orders(outs) for i in orders(ins)]


def embeddings(alpha, beta, edges, cap: int = 200000):
    """All valid rotation systems of ``edges`` with the given outer paths."""
    verts: dict = {}
    for e in edges:
        verts.setdefault(e.source, ([], []))[0].append(e)
        verts.setdefault(e.target, ([], []))[1].append(e)
    aset, bset = set(alpha), set(beta)
    keys = sorted(verts, key=_vkey)
    choices = []
    for v in keys:
        o, i = verts[v]
        o.sort(key=_ekey)
        i.sort(key=_ekey)
        choices.append(_vertex_orders(v, o, i, aset, bset))
    total = prod(len(c) for c in choices)
    if total > cap:
        raise PlanarError(f"too many rotation systems ({total})")
    for combo in itertools.product(*choices):
        rot = {v: c for v, c in zip(keys, combo)}
        faces = check_embedding(alpha, beta, edges, rot)
        if faces is not None:
            yield rot, faces


def _make(alpha, beta, edges, rot, faces) -> Subdivision:
    rows = tuple(sorted(((_vkey(v), v, o, i) for v, (o, i) in rot.items()), key=lambda r: r[0]))
    return Subdivision(alpha[0].source, alpha[-1].target, tuple(alpha), tuple(beta),
                       frozenset(edges), rows, faces)


def subdivision_sort_key(sub: Subdivision):
    return (len(sub.edges), sorted(_ekey(e) for e in sub.edges),
            [(r[0], [_ekey(e) for e in r[2]], [_ekey(e) for e in r[3]]) for r in sub.rotation])


def bare_subdivision(alpha, beta) -> Subdivision:
    edges = set(alpha) | set(beta)
    for rot, faces in embeddings(tuple(alpha), tuple(beta), edges):
        return _make(alpha, beta, edges, rot, faces)
    raise PlanarError("outer pair admits no embedding")


def enumerate_subdivisions(g: ReductionGraph, alpha, beta, lim: Limits = Limits(),
                           cap: int = 200000) -> list:
    """Every subdivision of the pair, in a deterministic order."""
    alpha, beta = tuple(alpha), tuple(beta)
    if not alpha or not beta:
        raise PlanarError("paths must be non-empty")
    s, t = alpha[0].source, alpha[-1].target
    if beta[0].source != s or beta[-1].target != t:
        raise PlanarError("paths are not parallel")
    span_edges(g, s, t)
    paths = [p for p in hom_paths(g, s, t, lim) if p != alpha and p != beta]
    base = frozenset(alpha) | frozenset(beta)
    seen_sets = set()
    n_subsets = 1 << len(paths)
    if n_subsets > cap:
        raise PlanarError(f"too many path subsets ({n_subsets})")
    out = []
    for r in range(len(paths) + 1):
        for combo in itertools.combinations(paths, r):
            edges = set(base)
            for p in combo:
                edges.update(p)
            fz = frozenset(edges)
            if fz in seen_sets:
                continue
            seen_sets.add(fz)
            for rot, faces in embeddings(alpha, beta, fz, cap):
                out.append(_make(alpha, beta, fz, rot, faces))
    out.sort(key=subdivision_sort_key)
    return out


def faces_of(sub: Subdivision) -> list:
    if sub.faces:
        return list(sub.faces)
    faces = check_embedding(sub.alpha, sub.beta, sub.edges, sub._rot())
    if faces is None:
        raise PlanarError("inconsistent embedding")
    return list(faces)


def euler_ok(sub: Subdivision) -> bool:
    orbits = _orbits(sub.edges, sub._rot())
    return len(sub.rotation) - len(sub.edges) + len(orbits) == 2


# ---------------------------------------------------------------------------
# refinement and zig-zags


def refinement_leq(s1: Subdivision, s2: Subdivision) -> bool:
    """``s1`` is coarser than ``s2``: its graph sits inside with the same rotations."""
    if (s1.alpha, s1.beta) != (s2.alpha, s2.beta):
        return False
    if not s1.edges <= s2.edges:
        return False
    rot2 = s2._rot()
    for _, v, outs, ins in s1.rotation:
        o2, i2 = rot2[v]
        if tuple(e for e in o2 if e in s1.edges) != outs:
            return False
        if tuple(e for e in i2 if e in s1.edges) != ins:
            return False
    return True


def maximal_subdivisions(subs: list) -> list:
    return [a for a in subs
            if not any(b is not a and refinement_leq(a, b) and not refinement_leq(b, a)
                       for b in subs)]


def _interiors(alpha, beta):
    ia = set(path_vertices(alpha)[1:-1])
    ib = set(path_vertices(beta)[1:-1])
    return ia, ib


def has_zigzag(alpha, beta, edges) -> bool:
    """Undirected connection between interior vertices of the two sides avoiding the ends."""
    ia, ib = _interiors(alpha, beta)
    if not ia or not ib:
        return False
    if ia & ib:
        return True
    s, t = alpha[0].source, alpha[-1].target
    adj: dict = {}
    for e in edges:
        if e.source in (s, t) or e.target in (s, t):
            continue
        adj.setdefault(e.source, set()).add(e.target)
        adj.setdefault(e.target, set()).add(e.source)
    seen = set(ia)
    todo = list(ia)
    while todo:
        v = todo.pop()
        if v in ib:
            return True
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return False


@dataclass
class DiamondCheck:
    diamond: bool
    exact: bool
    witness: Subdivision | None = None


def _first_embedding(alpha, beta, edges):
    try:
        for rot, faces in embeddings(alpha, beta, edges):
            return _make(alpha, beta, edges, rot, faces)
    except PlanarError:
        return None
    return None


class _PathIndex:
    """Paths of one hom-set, with a bitmask of paths through each vertex."""

    def __init__(self, paths):
        self.paths = [p for p in paths if len(p) > 1]
        self.inner = [frozenset(path_vertices(p)[1:-1]) for p in self.paths]
        self.through: dict = {}
        for k, vs in enumerate(self.inner):
            for v in vs:
                self.through[v] = self.through.get(v, 0) | (1 << k)

    def touching(self, vertices) -> int:
        m = 0
        for v in vertices:
            m |= self.through.get(v, 0)
        return m


def diamond_check(g: ReductionGraph, alpha, beta, lim: Limits = Limits(),
                  max_states: int = 5000, _span=None, _index=None) -> DiamondCheck:
    """Whether no subdivision of the pair is a zig-zag subdivision.

    Subdivisions are grown one path at a time, each new path touching the
    part already joined to the interior of ``alpha``; so that part is always
    the interior of ``alpha`` plus the interiors of the added paths, and a
    zig-zag appears exactly when an added path meets the interior of
    ``beta``.  A graph that does not embed has no embeddable supergraph, so
    such branches are dropped.  Past ``max_states`` the answer is "not a
    diamond" and is marked inexact.
    """
    alpha, beta = tuple(alpha), tuple(beta)
    if alpha == beta:
        return DiamondCheck(len(alpha) == 1, True)
    ia, ib = _interiors(alpha, beta)
    if not ia or not ib:
        return DiamondCheck(True, True)
    if ia & ib:
        return DiamondCheck(False, True, None)
    s, t = alpha[0].source, alpha[-1].target
    if _index is None:
        _index = _PathIndex(hom_paths(g, s, t, lim))
    if _index.touching(ia) & _index.touching(ib):
        # one extra path always embeds: acyclicity makes it meet each side
        # in order, so its chords cannot cross
        return DiamondCheck(False, True)
    span = span_edges(g, s, t) if _span is None else _span
    if not has_zigzag(alpha, beta, span):
        return DiamondCheck(True, True)
    idx = _index
    skip = 0
    for k, p in enumerate(idx.paths):
        if p == alpha or p == beta:
            skip |= 1 << k
    goal = idx.touching(ib) & ~skip
    base = frozenset(alpha) | frozenset(beta)
    seen = {base}
    queue = deque([(0, base, frozenset(ia))])
    while queue:
        used, edges, comp = queue.popleft()
        if used and _first_embedding(alpha, beta, edges) is None:
            continue
        cand = idx.touching(comp) & ~skip & ~used
        for k in _bits(cand & goal):
            bigger = edges | frozenset(idx.paths[k])
            if bigger in seen:
                continue
            seen.add(bigger)
            sub = _first_embedding(alpha, beta, bigger)
            if sub is not None:
                return DiamondCheck(False, True, sub)
        for k in _bits(cand & ~goal):
            if idx.inner[k] <= comp:
                continue
            bigger = edges | frozenset(idx.paths[k])
            if bigger in seen:
                continue
            seen.add(bigger)
            if len(seen) > max_states:
                return DiamondCheck(False, False)
            queue.append((used | (1 << k), bigger, comp | idx.inner[k]))
    return DiamondCheck(True, True)


def _bits(m: int):
    k = 0
    while m:
        if m & 1:
            yield k
        m >>= 1
        k += 1


def is_diamond(g: ReductionGraph, alpha, beta, lim: Limits = Limits()) -> bool:
    return diamond_check(g, alpha, beta, lim).diamond


@dataclass
class DiamondScan:
    diamonds: list
    truncated: bool
    inexact: int = 0


def enumerate_diamonds(g: ReductionGraph, source, lim: Limits = Limits(),
                       report: bool = False):
    """Diamonds ``(alpha, beta)`` out of ``source``, each unordered pair once."""
    by_target: dict = {}
    truncated = bool(g.frontier & g.reachable(source))
    for t in sorted(g.reachable(source), key=_vkey):
        if t == source:
            continue
        paths, exact = hom_paths(g, source, t, lim, report=True)
        truncated = truncated or not exact
        if len(paths) >= 2:
            by_target[t] = paths
    out = []
    inexact = 0
    for t, paths in by_target.items():
        try:
            span = span_edges(g, source, t)
        except PlanarError:
            truncated = True
            continue
        index = _PathIndex(paths)
        for a, b in itertools.combinations(paths, 2):
            if a[0] == b[0]:
                continue
            chk = diamond_check(g, a, b, lim, _span=span, _index=index)
            if not chk.exact:
                inexact += 1
            if chk.diamond:
                out.append((a, b))
    scan = DiamondScan(out, truncated, inexact)
    return scan if report else out


def regional_diamonds(g: ReductionGraph, lim: Limits = Limits()) -> dict:
    """Diamonds out of every explored, non-frontier vertex of ``g``.

    Returns a mapping from source vertex to its ``DiamondScan``.
    """
    out = {}
    for v in g.vertices:
        if v in g.frontier:
            continue
        out[v] = enumerate_diamonds(g, v, lim, report=True)
    return out


# ---------------------------------------------------------------------------
# export


def subdivision_json(sub: Subdivision, sig=None) -> dict:
    from .rewriting import format_step
    from .terms import format_term

    ids = {v: i for i, v in enumerate(sub.vertices)}

    def edge(e):
        return {"source": ids[e.source], "target": ids[e.target], "step": format_step(e)}

    return {
        "vertices": [format_term(v, sig) for v in sub.vertices],
        "alpha": [edge(e) for e in sub.alpha],
        "beta": [edge(e) for e in sub.beta],
        "edges": [edge(e) for e in sorted(sub.edges, key=_ekey)],
        "rotation": [{"vertex": ids[v], "out": [format_step(e) for e in o],
                      "in": [format_step(e) for e in i]} for _, v, o, i in sub.rotation],
        "faces": [{"left": [edge(e) for e in f.left], "right": [edge(e) for e in f.right]}
                  for f in faces_of(sub)],
    }


def subdivision_dot(sub: Subdivision, sig=None, labels: dict | None = None) -> str:
    from .rewriting import format_step
    from .terms import format_term

    ids = {v: f"v{i}" for i, v in enumerate(sub.vertices)}
    lines = ["digraph subdivision {", "  rankdir=LR;"]
    for v in sub.vertices:
        lines.append(f'  {ids[v]} [label="{format_term(v, sig)}"];')
    outer = set(sub.alpha) | set(sub.beta)
    for e in sorted(sub.edges, key=_ekey):
        style = ", penwidth=2" if e in outer else ""
        lines.append(f'  {ids[e.source]} -> {ids[e.target]} [label="{format_step(e)}"{style}];')
    for k, f in enumerate(faces_of(sub)):
        note = (labels or {}).get(k, "")
        lines.append(f'  // face {k}: {len(f.left)}+{len(f.right)} edges {note}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def count_rotations(edges) -> int:
    verts: dict = {}
    for e in edges:
        verts.setdefault(e.source, [0, 0])[0] += 1
        verts.setdefault(e.target, [0, 0])[1] += 1
    return prod(factorial(o) * factorial(i) for o, i in verts.values())

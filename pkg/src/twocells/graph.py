"""The reduction graph: bounded exploration and path analysis.

Vertices are canonical ground terms and edges are one-step reductions.
Exploration is breadth first with the step order as tiebreak, so graphs are
reproducible.  Vertices whose out-edges were cut off by a limit are kept in
``frontier``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .rewriting import Step, TwoStructure, enumerate_steps, format_step
from .terms import App, Gen, Term, format_term, sort_terms, term_key


@dataclass(frozen=True)
class Limits:
    max_vertices: int = 20000
    max_depth: int = 64
    max_path_length: int = 32
    unit_budget: int = 2
    recursion_depth: int = 6

    def __post_init__(self):
        for name in ("max_vertices", "max_depth", "max_path_length", "recursion_depth"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.unit_budget < 0:
            raise ValueError("unit_budget must be non-negative")


@dataclass
class ReductionGraph:
    vertices: list = field(default_factory=list)
    out_edges: dict = field(default_factory=dict)
    in_edges: dict = field(default_factory=dict)
    depth: dict = field(default_factory=dict)
    frontier: set = field(default_factory=set)

    def __contains__(self, v) -> bool:
        return v in self.out_edges

    @property
    def edges(self) -> list:
        return [e for v in self.vertices for e in self.out_edges[v]]

    @property
    def complete(self) -> bool:
        return not self.frontier

    def successors(self, v) -> list:
        return [e.target for e in self.out_edges[v]]

    def reachable(self, v) -> set:
        seen = {v}
        todo = [v]
        while todo:
            u = todo.pop()
            for e in self.out_edges.get(u, ()):
                if e.target not in seen:
                    seen.add(e.target)
                    todo.append(e.target)
        return seen

    def coreachable(self, v) -> set:
        seen = {v}
        todo = [v]
        while todo:
            u = todo.pop()
            for e in self.in_edges.get(u, ()):
                if e.source not in seen:
                    seen.add(e.source)
                    todo.append(e.source)
        return seen

    def find_cycle(self) -> list | None:
        """Edges of some directed cycle, or ``None`` when acyclic."""
        color: dict = {}
        for root in self.vertices:
            if root in color:
                continue
            color[root] = 1
            stack = [(root, iter(self.out_edges[root]))]
            entered: list = [None]
            on_stack = {root: 0}
            while stack:
                v, it = stack[-1]
                e = next(it, None)
                if e is None:
                    color[v] = 2
                    stack.pop()
                    entered.pop()
                    del on_stack[v]
                    continue
                w = e.target
                if color.get(w) == 1:
                    return entered[on_stack[w] + 1:] + [e]
                if w not in color:
                    color[w] = 1
                    on_stack[w] = len(stack)
                    stack.append((w, iter(self.out_edges[w])))
                    entered.append(e)
        return None

    def is_acyclic(self) -> bool:
        return self.find_cycle() is None


def explore(seeds: Iterable[Term], s: TwoStructure, lim: Limits = Limits()) -> ReductionGraph:
    g = ReductionGraph()
    queue: deque = deque()
    for t in sort_terms({s.canon(t) for t in seeds}):
        _add_vertex(g, t, 0)
        queue.append(t)
    while queue:
        v = queue.popleft()
        steps = enumerate_steps(v, s, lim.unit_budget)
        if g.depth[v] >= lim.max_depth:
            if steps:
                g.frontier.add(v)
            continue
        for st in steps:
            w = st.target
            if w not in g:
                if len(g.vertices) >= lim.max_vertices:
                    g.frontier.add(v)
                    continue
                _add_vertex(g, w, g.depth[v] + 1)
                queue.append(w)
            g.out_edges[v].append(st)
            g.in_edges[w].append(st)
    return g


def _add_vertex(g: ReductionGraph, v: Term, d: int):
    g.vertices.append(v)
    g.out_edges[v] = []
    g.in_edges[v] = []
    g.depth[v] = d


def reducts(t: Term, s: TwoStructure, lim: Limits = Limits()) -> list:
    """Sorted reduct closure of ``t`` (including ``t``); raises if truncated."""
    g = explore([t], s, lim)
    if not g.complete:
        raise RuntimeError("reduct closure truncated by limits")
    return sort_terms(g.vertices)


def hom_paths(g: ReductionGraph, src: Term, tgt: Term, lim: Limits = Limits(),
              report: bool = False):
    """Directed paths ``src -> tgt`` of length at most ``max_path_length``.

    With ``report`` the result is ``(paths, exact)`` where ``exact`` says that
    no frontier vertex or length cut could hide further paths.
    """
    if src not in g or tgt not in g:
        raise KeyError("endpoints must be vertices of the graph")
    back = g.coreachable(tgt)
    exact = not (g.frontier & g.reachable(src))
    out: list = []
    path: list = []

    def walk(v):
        nonlocal exact
        if v == tgt:
            out.append(tuple(path))
        if len(path) >= lim.max_path_length:
            if any(e.target in back for e in g.out_edges[v]):
                exact = False
            return
        for e in g.out_edges[v]:
            if e.target in back:
                path.append(e)
                walk(e.target)
                path.pop()

    if src in back:
        walk(src)
    out.sort(key=lambda p: tuple(e.key() for e in p))
    return (out, exact) if report else out


def path_vertices(path, start: Term | None = None) -> list:
    if not path:
        return [start] if start is not None else []
    return [path[0].source] + [e.target for e in path]


# ---------------------------------------------------------------------------
# quasicycles and rankings


@dataclass
class QuasicycleVerdict:
    status: str  # 'free' | 'found' | 'unknown'
    certificate: str | None = None  # 'ranking' | 'exhausted-acyclic'
    witness: list | None = None  # edges of a cycle
    reason: str = ""
    counterexample: Step | None = None

    @property
    def summary(self) -> str:
        if self.status == "free":
            return f"Free({self.certificate})"
        if self.status == "found":
            return "Found"
        return f"Unknown({self.reason})"


def detect_quasicycle(s: TwoStructure, seeds: Iterable[Term], lim: Limits = Limits(),
                      ranking: Callable | None = None,
                      certificate_terms: Iterable[Term] | None = None) -> QuasicycleVerdict:
    """Look for a cycle among the reducts of ``seeds``; otherwise try to certify.

    Every directed cycle is a quasicycle (the chain going round it forever).
    A ranking certifies freedom when it decreases on every explored edge and,
    if ``certificate_terms`` is given, on every step out of those terms.
    """
    g = explore(seeds, s, lim)
    cyc = g.find_cycle()
    if cyc is not None:
        return QuasicycleVerdict("found", witness=cyc)
    if ranking is not None:
        bad = _first_increase(g.edges, ranking)
        if bad is None and certificate_terms is not None:
            ok, bad = verify_ranking(s, ranking, certificate_terms, lim.unit_budget)
        if bad is None:
            return QuasicycleVerdict("free", "ranking")
        if g.complete:
            return QuasicycleVerdict("free", "exhausted-acyclic", counterexample=bad,
                                     reason="ranking rejected")
        return QuasicycleVerdict("unknown", reason="ranking does not decrease",
                                 counterexample=bad)
    if g.complete:
        return QuasicycleVerdict("free", "exhausted-acyclic")
    return QuasicycleVerdict("unknown", reason="exploration truncated without a certificate")


def _first_increase(edges, ranking) -> Step | None:
    for e in edges:
        if not ranking(e.source) > ranking(e.target):
            return e
    return None


def verify_ranking(s: TwoStructure, ranking: Callable, sample, unit_budget: int = 2) -> tuple:
    """``(True, None)`` if ``ranking`` decreases on every step out of every sample term.

    ``sample`` is an iterable of ground terms, or an integer size bound, in
    which case the terms of ``ground_terms(s, sample)`` are used.
    """
    terms = ground_terms(s, sample) if isinstance(sample, int) else sample
    for t in terms:
        for st in enumerate_steps(s.canon(t), s, unit_budget):
            if not ranking(st.source) > ranking(st.target):
                return False, st
    return True, None


def ground_terms(s: TwoStructure, max_size: int, generators=None) -> list:
    """Distinct canonical ground terms of at most ``max_size`` nodes."""
    if generators is None:
        generators = sorted(s.sig.generators) if s.sig.generators is not None else ["A", "B"]
    by_size: dict = {1: {Gen(g) for g in generators}}
    consts = [App(f) for f, ar in s.sig.symbols.items() if ar == 0]
    by_size[1] |= set(consts)
    symbols = [(f, ar) for f, ar in s.sig.symbols.items() if ar > 0]
    for n in range(2, max_size + 1):
        level = set()
        for f, ar in symbols:
            for sizes in _splits(n - 1, ar):
                for args in itertools.product(*(by_size.get(k, ()) for k in sizes)):
                    level.add(App(f, args))
        by_size[n] = level
    out = {s.canon(t) for level in by_size.values() for t in level}
    return sort_terms(out)


def _splits(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _splits(total - first, parts - 1):
            yield (first,) + rest


def default_seeds(s: TwoStructure, max_size: int = 3) -> list:
    return ground_terms(s, max_size)


# ---------------------------------------------------------------------------
# export


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(g: ReductionGraph, s: TwoStructure, name: str = "reductions") -> str:
    ids = {v: f"v{i}" for i, v in enumerate(g.vertices)}
    lines = [f'digraph "{_dot_escape(name)}" {{', "  rankdir=LR;"]
    for v in g.vertices:
        extra = ", style=dashed" if v in g.frontier else ""
        lines.append(f'  {ids[v]} [label="{_dot_escape(format_term(v, s.sig))}"{extra}];')
    for e in g.edges:
        lines.append(f'  {ids[e.source]} -> {ids[e.target]} [label="{_dot_escape(format_step(e))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_json(g: ReductionGraph, s: TwoStructure) -> dict:
    ids = {v: i for i, v in enumerate(g.vertices)}
    return {
        "vertices": [{"id": ids[v], "term": format_term(v, s.sig), "depth": g.depth[v],
                      "frontier": v in g.frontier} for v in g.vertices],
        "edges": [{"source": ids[e.source], "target": ids[e.target], "step": format_step(e)}
                  for e in g.edges],
        "complete": g.complete,
    }


def edge_key(e: Step) -> tuple:
    return (term_key(e.source),) + e.key()

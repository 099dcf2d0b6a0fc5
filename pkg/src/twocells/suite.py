"""Mechanised checks for the iterated monoidal structures.

Each check returns a plain dataclass so that the command line and the tests
share one implementation.  Terms are enumerated up to renaming: a
repetition-free term is a renaming of exactly one ``imc.ordered_terms`` entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import imc
from .coherence import ResourceLimit, brute_force_equal, brute_force_paths, decide_commutes, decide_paths
from .graph import Limits, explore, hom_paths
from .rewriting import enumerate_steps, substitute_morphism
from .terms import Gen, format_term


def sources(n: int, max_vars: int) -> list:
    return [t for k in range(1, max_vars + 1) for t in imc.ordered_terms(k, n)]


@dataclass
class TerminationResult:
    terms: int = 0
    edges: int = 0
    failures: list = field(default_factory=list)  # steps that do not decrease

    @property
    def ok(self) -> bool:
        return not self.failures


def termination(n: int, max_vars: int, unit_budget: int = 2) -> TerminationResult:
    """The ranking decreases along every step out of every repetition-free term."""
    s = imc.build_imc(n)
    res = TerminationResult()
    for t in sources(n, max_vars):
        res.terms += 1
        before = imc.verified_ranking(t, n)
        for st in enumerate_steps(t, s, unit_budget):
            res.edges += 1
            if not imc.verified_ranking(st.target, n) < before:
                res.failures.append(st)
    return res


@dataclass
class MapsResult:
    pairs: int = 0
    maps: int = 0
    discrepancies: list = field(default_factory=list)  # (a, b, criterion, reachable)

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def maps(n: int, max_vars: int, lim: Limits = Limits()) -> MapsResult:
    """``map_exists`` against reachability in the reduction graph."""
    s = imc.build_imc(n)
    res = MapsResult()
    for k in range(1, max_vars + 1):
        targets = imc.all_terms("ABCDEFGH"[:k], n)
        for a in imc.ordered_terms(k, n):
            g = explore([a], s, lim)
            if not g.complete:
                raise ResourceLimit("reduct closure truncated")
            reach = set(g.vertices)
            for b in targets:
                res.pairs += 1
                crit = imc.map_exists(a, b)
                found = b in reach
                res.maps += found
                if crit != found:
                    res.discrepancies.append((a, b, crit, found))
    return res


@dataclass
class CoherenceResult:
    sources: int = 0
    hom_sets: int = 0
    pairs: int = 0
    not_equal: list = field(default_factory=list)  # Verdicts
    disagreements: list = field(default_factory=list)  # (alpha, beta, verdict, oracle)
    quotient_sizes: dict = field(default_factory=dict)  # size -> count of hom-sets

    @property
    def ok(self) -> bool:
        return (not self.not_equal and not self.disagreements
                and set(self.quotient_sizes) <= {0, 1})


def coherence(n: int, max_vars: int, lim: Limits = Limits(), oracle: bool = True) -> CoherenceResult:
    """Quotient every hom-set out of every repetition-free source.

    Paths are sorted into classes by comparing with one representative per
    class, so a coherent hom-set costs one decision per path.  With
    ``oracle`` every decision is repeated by the brute-force closure.
    """
    s = imc.build_imc(n)
    res = CoherenceResult()
    for src in sources(n, max_vars):
        res.sources += 1
        g = explore([src], s, lim)
        for tgt in g.vertices:
            paths = hom_paths(g, src, tgt, lim)
            res.hom_sets += 1
            reps: list = []
            for p in paths:
                for r in reps:
                    res.pairs += 1
                    v = decide_paths(s, g, r, p, lim)
                    if oracle:
                        try:
                            bf = brute_force_paths(s, r, p, lim)
                        except ResourceLimit:
                            bf = None
                        if bf is not v.equal:
                            res.disagreements.append((r, p, v, bf))
                    if v.equal:
                        break
                    res.not_equal.append(v)
                else:
                    reps.append(p)
            size = len(reps)
            res.quotient_sizes[size] = res.quotient_sizes.get(size, 0) + 1
    return res


@dataclass
class InstanceCheck:
    name: str
    verdict: str
    oracle: bool | None

    @property
    def ok(self) -> bool:
        return self.verdict == "Equal" and self.oracle is True


def _check(s, name, left, right, lim) -> InstanceCheck:
    v = decide_commutes(s, left, right, lim)
    try:
        bf = brute_force_equal(s, left, right, lim)
    except ResourceLimit:
        bf = None
    label = {"equal": "Equal", "not-equal": "NotEqual", "exhausted": "ResourceExhausted"}[v.status]
    return InstanceCheck(name, label, bf)


def hexagons(n: int, lim: Limits = Limits()) -> list:
    """Both legs of every giant hexagon, on eight distinct generators."""
    s = imc.build_imc(n)
    fresh = {x: Gen(x.upper()) for x in "abcdefgh"}
    out = []
    for ax in s.axioms:
        if not ax.name.startswith("hexagon"):
            continue
        left = substitute_morphism(ax.lhs, fresh)
        right = substitute_morphism(ax.rhs, fresh)
        out.append(_check(s, ax.name, left, right, lim))
    return out


def eckmann_hilton(n: int, lim: Limits = Limits()) -> list:
    """Every triangle of derived maps for every ``i < j < k <= n``."""
    s = imc.build_imc(n)
    out = []
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        for tri in imc.eckmann_hilton_triangles(i, j, k, n):
            out.append(_check(s, f"{tri['name']}-{i}{j}{k}", tri["left"], tri["right"], lim))
    return out


def nonconfluence(n: int = 2) -> dict:
    w = imc.non_confluence_witness(n)
    sig = imc.build_imc(n).sig
    return {
        "source": format_term(w["source"], sig),
        "left": [format_term(t, sig) for t in w["left_reducts"]],
        "right": [format_term(t, sig) for t in w["right_reducts"]],
        "disjoint": not (set(w["left_reducts"]) & set(w["right_reducts"])),
        "joinable": w["joinable"],
    }


# ---------------------------------------------------------------------------
# the bundled corpus as a fixed list of cases


@dataclass
class CorpusCase:
    structure: str
    source: object
    limits: Limits


def corpus_cases() -> list:
    """Sources of every bundled structure whose reduction graphs are finite.

    The loop structure is left out: its graph is cyclic, so it has no
    subdivisions and its pairs are not decided.
    """
    from .structfile import load_corpus
    from .terms import parse_term

    cases = []

    def add(name, terms, lim=Limits()):
        s = load_corpus(name)
        cases.extend(CorpusCase(name, s.canon(parse_term(t, s.sig)), lim) for t in terms)

    add("monoidal", ["A ot (B ot (C ot D))", "A ot (B ot (C ot (D ot E)))"])
    add("ex-nested", ["I(I(A))"])
    add("ex-disjoint", ["I(A) ot I(A)"])
    add("prop-nfca", ["I(A)"], Limits(max_depth=4))
    # hom-sets of three-variable terms in M_3 hold hundreds of thousands of pairs
    for n, k in ((1, 3), (2, 3), (3, 2)):
        cases.extend(CorpusCase(f"imc{n}", t, Limits()) for t in sources(n, k))
    return cases


def corpus_pairs(case: CorpusCase) -> list:
    """``(alpha, beta)`` for every unordered pair of parallel paths out of the source.

    Targets whose span reaches the exploration frontier are skipped.
    """
    from .structfile import load_corpus

    s = load_corpus(case.structure)
    g = explore([case.source], s, case.limits)
    out = []
    for t in g.reachable(case.source):
        if g.frontier & g.reachable(case.source) & g.coreachable(t):
            continue
        paths = hom_paths(g, case.source, t, case.limits)
        out.extend(itertools.combinations(paths, 2))
    return out

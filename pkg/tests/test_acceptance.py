"""One test per acceptance criterion, each with its time bound."""

import time
from contextlib import contextmanager

from twocells import imc, suite
from twocells.coherence import ResourceLimit, brute_force_paths, decide_commutes, decide_paths
from twocells.graph import Limits, detect_quasicycle, default_seeds, explore, hom_paths
from twocells.planar import (
    enumerate_diamonds, enumerate_subdivisions, euler_ok, faces_of, is_diamond,
    maximal_subdivisions, regional_diamonds,
)
from twocells.rewriting import (
    format_shape, linearize, morphism_vars, parse_morphism, shape, source_target,
)
from twocells.structfile import load_corpus
from twocells.terms import Gen, format_term, parse_term


@contextmanager
def within(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, bound {seconds}s"


def test_criterion_1_associative_derivation():
    with within(1):
        s = load_corpus("monoidal")
        a = parse_morphism("alpha(1_A, 1_B, 1_C)", s)
        b = parse_morphism("alpha(1_A, 1_A, 1_A)", s)
        assert format_shape(shape(a)) == format_shape(shape(b)) == "alpha(∘,∘,∘)"
        assert morphism_vars(a) == {Gen("A"), Gen("B"), Gen("C")}
        assert morphism_vars(b) == {Gen("A")}

        m = parse_morphism("1_A ot alpha(1_B, 1_C, 1_D)", s)
        src = s.canon(parse_term("A ot (B ot (C ot D))", s.sig))
        tgt = s.canon(parse_term("(A ot B) ot (C ot D)", s.sig))
        g = explore([src], s)
        enumerated = set(hom_paths(g, src, tgt))
        assert source_target(m, s) == (src, tgt)
        assert any(p in enumerated for p in linearize(m, s))


def test_criterion_2_nested_and_disjoint_examples():
    with within(5):
        nested = load_corpus("ex-nested")
        src = parse_term("I(I(A))", nested.sig)
        g = explore([src], nested)
        drawn = {("I(I(A))", "J(I(A))"), ("I(I(A))", "I(J(A))"), ("J(I(A))", "J(J(A))"),
                 ("I(J(A))", "J(J(A))"), ("J(I(A))", "H(A)"), ("I(J(A))", "H(A)")}
        assert g.complete
        assert sorted((format_term(e.source), format_term(e.target)) for e in g.edges) == sorted(drawn)
        diamonds = enumerate_diamonds(g, src)
        assert len(diamonds) == 2
        assert all(d[0][-1].target in (parse_term("J(J(A))", nested.sig), parse_term("H(A)", nested.sig))
                   for d in diamonds)

        disjoint = load_corpus("ex-disjoint")
        src2 = disjoint.canon(parse_term("I(A) ot I(A)", disjoint.sig))
        g2 = explore([src2], disjoint)
        drawn2 = {("(I(A) ot I(A))", "(I(A) ot J(A))"), ("(I(A) ot I(A))", "(J(A) ot I(A))"),
                  ("(I(A) ot J(A))", "(J(A) ot J(A))"), ("(J(A) ot I(A))", "(J(A) ot J(A))"),
                  ("(I(A) ot J(A))", "H(A)"), ("(J(A) ot I(A))", "H(A)")}
        got2 = {(format_term(e.source, disjoint.sig), format_term(e.target, disjoint.sig)) for e in g2.edges}
        assert got2 == drawn2 and len(g2.edges) == 6
        assert len(enumerate_diamonds(g2, src2)) == 2

        def decide(a, b):
            return decide_commutes(nested, parse_morphism(a, nested), parse_morphism(b, nested))

        assert decide("i2j(1_(I(A))) ; J(i2j(1_A))", "I(i2j(1_A)) ; i2j(1_(J(A)))").status == "equal"
        assert decide("i2j(1_(I(A))) ; ji2h(1_A)", "I(i2j(1_A)) ; ij2h(1_A)").status == "not-equal"


def test_criterion_3_quasicycles():
    with within(5):
        loop = load_corpus("undecidable-loop")
        assert detect_quasicycle(loop, default_seeds(loop)).summary == "Found"
        m2 = imc.build_imc(2)
        v = detect_quasicycle(m2, default_seeds(m2), Limits(), imc.ranking_for(2), suite.sources(2, 3))
        assert v.summary == "Free(ranking)"


def test_criterion_4_diamond_counts_grow_without_bound():
    with within(30):
        s = load_corpus("prop-nfca")
        src = parse_term("I(A)", s.sig)
        counts = []
        for d in range(2, 7):
            lim = Limits(max_depth=d)
            g = explore([src], s, lim)
            counts.append(sum(len(x.diamonds) for x in regional_diamonds(g, lim).values()))
        assert all(a < b for a, b in zip(counts, counts[1:])), counts


def test_criterion_5_ranking_decreases():
    with within(120):
        for n in (2, 3):
            r = suite.termination(n, 5)
            assert r.edges > 0 and r.ok, r.failures[:3]


def test_criterion_6_map_existence_criterion():
    with within(300):
        for n in (2, 3):
            r = suite.maps(n, 4)
            assert r.pairs > 0 and r.ok, r.discrepancies[:3]


def test_criterion_7_coherence_of_m2():
    with within(600):
        r = suite.coherence(2, 4, oracle=True)
        assert r.pairs > 0
        assert not r.not_equal
        assert not r.disagreements
        assert set(r.quotient_sizes) <= {0, 1}


def test_criterion_8_non_confluence():
    with within(1):
        w = imc.non_confluence_witness(2)
        assert not set(w["left_reducts"]) & set(w["right_reducts"])
        assert not w["joinable"]


def test_criterion_9_oracle_agreement_on_the_corpus():
    with within(600):
        pairs = disagreements = 0
        for case in suite.corpus_cases():
            s = load_corpus(case.structure)
            g = explore([case.source], s, case.limits)
            for a, b in suite.corpus_pairs(case):
                pairs += 1
                v = decide_paths(s, g, a, b, case.limits)
                try:
                    bf = brute_force_paths(s, a, b, case.limits)
                except ResourceLimit:
                    bf = None
                disagreements += v.status == "exhausted" or bf is not v.equal
        checks = suite.hexagons(3) + suite.eckmann_hilton(3)
        assert len(checks) == 5
        assert all(c.ok for c in checks), [c for c in checks if not c.ok]
        assert pairs + len(checks) >= 200
        assert disagreements == 0


def test_criterion_10_planar_properties_on_the_corpus():
    with within(120):
        non_diamond = []
        for case in suite.corpus_cases():
            s = load_corpus(case.structure)
            g = explore([case.source], s, case.limits)
            for a, b in suite.corpus_pairs(case):
                subs = enumerate_subdivisions(g, a, b, case.limits)
                for sub in subs:
                    assert euler_ok(sub)
                    for f in faces_of(sub):
                        assert f.left[0].source == f.right[0].source == f.source
                        assert f.left[-1].target == f.right[-1].target == f.target
                for sub in maximal_subdivisions(subs):
                    non_diamond.extend((case.structure, f) for f in faces_of(sub)
                                       if not is_diamond(g, f.left, f.right, case.limits))
        assert not non_diamond, sorted({name for name, _ in non_diamond})

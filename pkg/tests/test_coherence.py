import pytest
from hypothesis import given, strategies as st

from twocells.coherence import (
    CoherenceError, ResourceLimit, brute_force_equal, brute_force_paths, classify_span,
    critical_spans, decide_commutes, decide_paths, left_linear, maclane_report, verdict_dot,
)
from twocells.graph import Limits, explore, hom_paths
from twocells.planar import enumerate_subdivisions, faces_of
from twocells.rewriting import (
    MorphismTypeError, enumerate_steps, face_between, format_step, parse_morphism,
)
from twocells.structfile import load_corpus, loads
from twocells.terms import parse_term

NAT = ("i2j(1_(I(A))) ; J(i2j(1_A))", "I(i2j(1_A)) ; i2j(1_(J(A)))")
H_PAIR = ("i2j(1_(I(A))) ; ji2h(1_A)", "I(i2j(1_A)) ; ij2h(1_A)")


def _decide(s, a, b, **kw):
    return decide_commutes(s, parse_morphism(a, s), parse_morphism(b, s), Limits(**kw))


def test_naturality_square_commutes(nested):
    v = _decide(nested, *NAT)
    assert v.status == "equal"
    (f,) = v.faces
    assert f.justification.kind == "naturality"
    assert v.subdivision is not None


def test_h_pair_does_not_commute(nested):
    v = _decide(nested, *H_PAIR)
    assert v.status == "not-equal" and v.searched >= 1
    assert not brute_force_equal(nested, *(parse_morphism(m, nested) for m in H_PAIR))


def test_identical_morphisms_are_equal(nested):
    assert _decide(nested, H_PAIR[0], H_PAIR[0]).equal


def test_endpoint_mismatch_is_an_error(nested):
    with pytest.raises(MorphismTypeError):
        _decide(nested, "i2j(1_(I(A)))", "I(i2j(1_A))")


def test_disjoint_pairs(disjoint):
    fun = ("(i2j(1_A) ot 1_(I(A))) ; (1_(J(A)) ot i2j(1_A))",
           "(1_(I(A)) ot i2j(1_A)) ; (i2j(1_A) ot 1_(J(A)))")
    v = _decide(disjoint, *fun)
    assert v.equal and v.faces[0].justification.kind == "functoriality"
    h = ("(i2j(1_A) ot 1_(I(A))) ; ji2h(1_A)", "(1_(I(A)) ot i2j(1_A)) ; ij2h(1_A)")
    assert _decide(disjoint, *h).status == "not-equal"


def test_pentagon_legs_commute(monoidal):
    a = "alpha(1_A, 1_B, 1_(C ot D)) ; alpha(1_(A ot B), 1_C, 1_D)"
    b = ("(1_A ot alpha(1_B, 1_C, 1_D)) ; alpha(1_A, 1_(B ot C), 1_D) ; "
         "(alpha(1_A, 1_B, 1_C) ot 1_D)")
    v = _decide(monoidal, a, b)
    assert v.equal and v.faces[0].justification.kind == "axiom"


def test_pentagon_fails_without_the_axiom(monoidal):
    bare = loads("structure m\nsymbol ot 2 infix\ngenerators open\n"
                 "rule alpha: (x ot (y ot z)) -> ((x ot y) ot z)\n")
    a = "alpha(1_A, 1_B, 1_(C ot D)) ; alpha(1_(A ot B), 1_C, 1_D)"
    b = ("(1_A ot alpha(1_B, 1_C, 1_D)) ; alpha(1_A, 1_(B ot C), 1_D) ; "
         "(alpha(1_A, 1_B, 1_C) ot 1_D)")
    assert _decide(bare, a, b).status == "not-equal"


def test_pinched_naturality_square_is_equal():
    # both corners of the square are G(G(I(A))), so no subdivision shows it as one face
    s = load_corpus("prop-nfca")
    lim = Limits(max_depth=4)
    src = parse_term("G(I(A))", s.sig)
    g = explore([src], s, lim)
    tgt = parse_term("G(G(G(I(A))))", s.sig)
    by_labels = {tuple(format_step(e) for e in p): p for p in hom_paths(g, src, tgt, lim)}
    a = by_labels[("gg@ε", "ig@0.0")]
    b = by_labels[("ig@0", "gg@ε")]
    for sub in enumerate_subdivisions(g, a, b, lim):
        assert any(face_between(f.left, f.right, s) is None for f in faces_of(sub))
    v = decide_paths(s, g, a, b, lim)
    assert v.equal and "pinched" in v.reason
    assert brute_force_paths(s, a, b, lim)


def test_cyclic_structure():
    s = load_corpus("undecidable-loop")
    # a single axiom instance needs no subdivision
    assert _decide(s, "t1(1_A) ; t2(1_A)", "t2(1_A) ; t1(1_A)").equal
    with pytest.raises(CoherenceError):
        _decide(s, "t1(1_A) ; t1(1_A)", "t2(1_A) ; t2(1_A)")


def test_truncated_exploration_is_reported(monoidal):
    a = "alpha(1_A, 1_B, 1_(C ot D)) ; alpha(1_(A ot B), 1_C, 1_D)"
    b = "(1_A ot alpha(1_B, 1_C, 1_D)) ; alpha(1_A, 1_(B ot C), 1_D) ; (alpha(1_A, 1_B, 1_C) ot 1_D)"
    bare = loads("symbol ot 2 infix\ngenerators open\nrule alpha: (x ot (y ot z)) -> ((x ot y) ot z)\n")
    assert _decide(bare, a, b, max_vertices=3).status == "exhausted"


def test_oracle_limit(monoidal):
    s = loads("symbol ot 2 infix\ngenerators open\nrule alpha: (x ot (y ot z)) -> ((x ot y) ot z)\n")
    src = parse_term("A ot (B ot (C ot (D ot E)))", s.sig)
    g = explore([src], s)
    tgt = parse_term("(((A ot B) ot C) ot D) ot E", s.sig)
    paths = hom_paths(g, src, tgt)
    a, b = paths[1], paths[0]  # paths[0] admits no rewrite at all
    assert not brute_force_paths(s, a, b)
    with pytest.raises(ResourceLimit):
        brute_force_paths(s, a, b, Limits(), max_classes=1)


def test_verdict_exports(nested):
    v = _decide(nested, *NAT)
    js = v.to_json(nested.sig)
    assert js["verdict"] == "Equal" and len(js["faces"]) == 1
    dot = verdict_dot(v, nested.sig)
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")


def test_span_classification(nested, disjoint, monoidal):
    t = parse_term("I(I(A))", nested.sig)
    outer, inner = sorted(enumerate_steps(t, nested), key=lambda e: len(e.path))
    assert classify_span(None, outer, inner, nested).kind == "nested"
    t = parse_term("I(A) ot I(A)", disjoint.sig)
    a, b = [e for e in enumerate_steps(t, disjoint) if e.label == "i2j"]
    assert classify_span(None, a, b, disjoint).kind == "disjoint"
    t = parse_term("A ot (B ot (C ot D))", monoidal.sig)
    x, y = enumerate_steps(t, monoidal)
    assert classify_span(None, x, y, monoidal).kind == "overlap"


def test_monoidal_critical_span_is_the_pentagon(monoidal):
    (c,) = critical_spans(monoidal)
    assert {format_step(c.first), format_step(c.second)} == {"alpha@ε", "alpha@1"}


def test_imc_critical_spans_are_all_overlaps(m2):
    spans = critical_spans(m2)
    assert spans
    assert all(c.kind == "overlap" for c in spans)
    labels = {c.first.label for c in spans} | {c.second.label for c in spans}
    assert labels <= {"eta12"}


def test_left_linearity(monoidal):
    assert left_linear(monoidal)
    assert not left_linear(loads("symbol ot 2 infix\ngenerators open\nrule b: (x ot x) -> x\n"))


def test_maclane_reports(monoidal, nested):
    rep = maclane_report(monoidal, 7)
    assert rep.ok and rep.diamonds == 1 and rep.commuting == 1
    rep = maclane_report(nested, 4)
    assert not rep.ok and rep.counterexamples


@given(st.permutations("ABCD"))
def test_decision_agrees_with_oracle_on_pentagon_hom_sets(monoidal, names):
    src = parse_term("{} ot ({} ot ({} ot {}))".format(*names), monoidal.sig)
    g = explore([src], monoidal)
    for t in g.vertices:
        paths = hom_paths(g, src, t)
        for p in paths[1:]:
            assert decide_paths(monoidal, g, paths[0], p).equal is brute_force_paths(monoidal, paths[0], p)

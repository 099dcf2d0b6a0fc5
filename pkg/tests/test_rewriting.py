import pytest
from hypothesis import given, strategies as st

from twocells.rewriting import (
    MorphismTypeError, compose, enumerate_steps, face_instance, format_morphism, format_shape,
    generator_instances, is_general_position, linearize, morphism_vars, parse_morphism,
    path_morphism, replay_step, shape, source_target, substitute_morphism, validate_structure,
)
from twocells.structfile import StructureFileError, corpus_names, dumps, load_corpus, loads
from twocells.terms import Gen, format_term, parse_term


def _st(s, m):
    return tuple(format_term(t, s.sig) for t in source_target(parse_morphism(m, s), s))


def test_whiskered_rule_endpoints(monoidal):
    assert _st(monoidal, "1_A ot alpha(1_B, 1_C, 1_D)") == (
        "(A ot (B ot (C ot D)))", "(A ot ((B ot C) ot D))")


def test_composite_endpoints_must_agree(monoidal):
    with pytest.raises(MorphismTypeError):
        source_target(parse_morphism("alpha(1_A, 1_B, 1_C) ; alpha(1_A, 1_B, 1_C)", monoidal),
                      monoidal)


def test_shape_forgets_generators(monoidal):
    a = parse_morphism("alpha(1_A, 1_B, 1_C)", monoidal)
    b = parse_morphism("alpha(1_A, 1_A, 1_A)", monoidal)
    assert shape(a) == shape(b)
    assert format_shape(shape(a)) == "alpha(∘,∘,∘)"
    assert morphism_vars(a) == {Gen("A"), Gen("B"), Gen("C")}
    assert morphism_vars(b) == {Gen("A")}


def test_general_position(monoidal):
    s = loads(dumps(monoidal) + "rule beta: (x ot x) -> x\n")
    assert is_general_position(parse_morphism("alpha(1_A, 1_B, 1_C)", s), s)
    assert not is_general_position(parse_morphism("alpha(1_A, 1_A, 1_B)", s), s)
    # beta forces its two arguments together, so this composite is as general as it gets
    assert is_general_position(parse_morphism("alpha(1_A, 1_A, 1_B) ; (beta(1_A) ot 1_B)", s), s)


def test_steps_replay_and_linearize(monoidal):
    t = parse_term("A ot (B ot (C ot D))", monoidal.sig)
    steps = enumerate_steps(t, monoidal)
    assert sorted(format_term(st.target, monoidal.sig) for st in steps) == [
        "((A ot B) ot (C ot D))", "(A ot ((B ot C) ot D))"]
    for st in steps:
        assert replay_step(st, monoidal) == st.target
        (path,) = linearize(path_morphism((st,), monoidal), monoidal)
        assert path == (st,)


def test_functorial_product_has_two_interleavings(disjoint):
    m = parse_morphism("i2j(1_A) ot i2j(1_A)", disjoint)
    paths = linearize(m, disjoint)
    assert len(paths) == 2
    assert {len(p) for p in paths} == {2}


def test_face_instances_in_the_examples(nested, disjoint):
    P = lambda s, t: parse_morphism(t, s)  # noqa: E731
    nat = face_instance(P(nested, "i2j(1_(I(A))) ; J(i2j(1_A))"),
                        P(nested, "I(i2j(1_A)) ; i2j(1_(J(A)))"), nested)
    assert nat is not None and nat.kind == "naturality"
    assert face_instance(P(nested, "i2j(1_(I(A))) ; ji2h(1_A)"),
                         P(nested, "I(i2j(1_A)) ; ij2h(1_A)"), nested) is None
    fun = face_instance(P(disjoint, "(i2j(1_A) ot 1_(I(A))) ; (1_(J(A)) ot i2j(1_A))"),
                        P(disjoint, "(1_(I(A)) ot i2j(1_A)) ; (i2j(1_A) ot 1_(J(A)))"), disjoint)
    assert fun is not None and fun.kind == "functoriality"


def test_pentagon_is_an_axiom_face(monoidal):
    ax = monoidal.axioms[0]
    sigma = {x: Gen(x.upper()) for x in "abcd"}
    j = face_instance(substitute_morphism(ax.lhs, sigma), substitute_morphism(ax.rhs, sigma), monoidal)
    assert j is not None and j.kind == "axiom"


def test_generator_instances_have_common_endpoints(m2):
    t = parse_term("(A ot2 B) ot1 (C ot2 D)", m2.sig)
    insts = generator_instances(t, m2)
    assert insts
    for inst in insts:
        ends = {p[-1].target for p in inst.left | inst.right if p}
        assert len(ends) == 1
        assert all(p[0].source == t for p in inst.left | inst.right if p)


def test_compose_is_associative_on_paths(monoidal):
    a = parse_morphism("1_A ot alpha(1_B, 1_C, 1_D)", monoidal)
    b = parse_morphism("alpha(1_A, 1_(B ot C), 1_D)", monoidal)
    c = parse_morphism("alpha(1_A, 1_B, 1_C) ot 1_D", monoidal)
    assert linearize(compose(compose(a, b), c), monoidal) == linearize(compose(a, compose(b, c)), monoidal)


@pytest.mark.parametrize("name", corpus_names())
def test_bundled_structures_validate_and_round_trip(name):
    s = load_corpus(name)
    assert validate_structure(s).ok
    text = dumps(s)
    assert dumps(loads(text)) == text


def test_validation_cites_endpoint_mismatch(monoidal):
    bad = dumps(monoidal) + "axiom wrong: alpha(1_a, 1_b, 1_c) = 1_(a ot (b ot c))\n"
    rep = validate_structure(loads(bad))
    assert not rep.ok and any("endpoint mismatch" in i for i in rep.issues)


def test_structure_file_errors_carry_line_numbers():
    with pytest.raises(StructureFileError) as e:
        loads("structure x\nsymbol F one\n")
    assert "line 2" in str(e.value)


@given(st.lists(st.sampled_from("ABCD"), min_size=3, max_size=3))
def test_morphism_printing_round_trips(monoidal, names):
    m = parse_morphism("alpha(1_{}, 1_{}, 1_{})".format(*names), monoidal)
    assert parse_morphism(format_morphism(m, monoidal.sig), monoidal) == m

import pytest
from hypothesis import given, strategies as st

from twocells import imc
from twocells.terms import (
    App, Gen, ObjectTheory, Signature, TermError, TermSyntaxError, Var, canonicalize,
    format_term, is_canonical, match_modulo, parse_term, positions, replace_at, size,
    subterm_at, substitute, term_eq, unify_syntactic,
)

S2 = imc.build_imc(2)
SIG, TH = S2.sig, S2.theory

leaves = st.sampled_from([Gen("A"), Gen("B"), Gen("C"), App("I")])
raw_terms = st.recursive(
    leaves,
    lambda sub: st.builds(lambda op, a, b: App(op, (a, b)), st.sampled_from(["ot1", "ot2"]), sub, sub),
    max_leaves=7,
)


@given(raw_terms)
def test_canonicalize_is_idempotent(t):
    c = canonicalize(t, TH)
    assert canonicalize(c, TH) == c
    assert is_canonical(c, TH)


@given(raw_terms)
def test_print_then_parse_is_identity_on_canonical_terms(t):
    c = canonicalize(t, TH)
    assert canonicalize(parse_term(format_term(c, SIG), SIG), TH) == c


@given(raw_terms, raw_terms, raw_terms)
def test_associativity_holds_modulo_theory(a, b, c):
    left = App("ot1", (App("ot1", (a, b)), c))
    right = App("ot1", (a, App("ot1", (b, c))))
    assert term_eq(left, right, TH)


@given(raw_terms)
def test_unit_laws(a):
    assert term_eq(App("ot2", (a, App("I"))), a, TH)
    assert term_eq(App("ot1", (App("I"), a)), a, TH)


def test_canonical_form_is_flat_and_unit_free():
    t = parse_term("(A ot1 I) ot1 (B ot1 C)", SIG)
    c = canonicalize(t, TH)
    assert c == App("ot1", (Gen("A"), Gen("B"), Gen("C")))
    assert canonicalize(parse_term("I ot2 I", SIG), TH) == App("I")


def test_empty_theory_keeps_bracketing(monoidal):
    t = parse_term("(A ot B) ot C", monoidal.sig)
    assert not term_eq(t, parse_term("A ot (B ot C)", monoidal.sig))


def test_positions_and_replacement():
    sig = Signature({"F": 1, "G": 2})
    t = parse_term("G(F(A), B)", sig)
    assert subterm_at(t, (0, 0)) == Gen("A")
    assert replace_at(t, (1,), Gen("C")) == parse_term("G(F(A), C)", sig)
    assert len(positions(t)) == size(t) == 4


def test_substitution_and_matching():
    sig = Signature({"F": 1, "G": 2})
    pat = parse_term("G(x, F(y))", sig, pattern=True)
    subj = parse_term("G(A, F(B))", sig)
    (sigma,) = match_modulo(pat, subj)
    assert substitute(pat, sigma) == subj
    assert match_modulo(pat, parse_term("G(A, B)", sig)) == []


def test_matching_modulo_units_inserts_units():
    pat = parse_term("x ot1 y", SIG, pattern=True)
    found = match_modulo(pat, Gen("A"), TH, unit_budget=1)
    assert len(found) == 2  # A ot1 I and I ot1 A
    assert {canonicalize(substitute(pat, f), TH) for f in found} == {Gen("A")}
    assert match_modulo(pat, Gen("A"), TH, unit_budget=0) == []


def test_syntactic_unification():
    sig = Signature({"G": 2})
    a = App("G", (Var("x"), Gen("B")))
    b = App("G", (Gen("A"), Var("y")))
    sigma = unify_syntactic(a, b)
    assert substitute(a, sigma) == substitute(b, sigma) == parse_term("G(A, B)", sig)
    assert unify_syntactic(Var("x"), App("G", (Var("x"), Gen("A")))) is None


def test_parse_errors_report_location():
    with pytest.raises(TermSyntaxError) as e:
        parse_term("A ot1 )", SIG)
    assert "column" in str(e.value)


def test_signature_rejects_bad_declarations():
    with pytest.raises(TermError):
        Signature({"f": 1}, infix=frozenset({"f"}))
    with pytest.raises(TermError):
        ObjectTheory((("ot", "I"), ("ot", "J")))

import pytest
from hypothesis import given, strategies as st

from twocells import imc, suite
from twocells.coherence import decide_commutes
from twocells.graph import explore, hom_paths
from twocells.rewriting import face_instance, is_general_position, path_morphism
from twocells.structfile import dumps, load_corpus
from twocells.terms import App, Gen, TermError

P = imc.parse


def test_structure_sizes():
    assert (len(imc.build_imc(1).rules), len(imc.build_imc(1).axioms)) == (0, 0)
    s2, s3 = imc.build_imc(2), imc.build_imc(3)
    assert len(s2.rules) == 1 and not any(a.name.startswith("hexagon") for a in s2.axioms)
    assert len(s3.rules) == 3
    assert [a.name for a in s3.axioms if a.name.startswith("hexagon")] == ["hexagon-123"]
    assert sum(a.identity_instance for a in s2.axioms) == 4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bundled_files_match_the_builder(n):
    assert dumps(load_corpus(f"imc{n}")) == dumps(imc.build_imc(n))


def test_ranking_values():
    assert imc.rho_hat(App("I")) == 0
    assert imc.rho_hat(P("A ot1 B", 2)) == 1
    assert imc.rho(P("A ot1 (B ot1 C)", 2)) == imc.rho(P("(A ot1 B) ot1 C", 2))
    assert imc.verified_ranking(P("A ot1 B", 2), 2) == 2
    assert imc.verified_ranking(P("A ot2 B", 2), 2) == 1


def test_subtraction():
    t = P("(A ot1 B) ot2 (C ot1 E)", 2)
    assert imc.subtract(t, {"B", "E"}) == P("A ot2 C", 2)
    assert imc.subtract(Gen("A"), {"A"}) == App("I")
    assert imc.subtract(t, set()) == t
    with pytest.raises(TermError):
        imc.subtract(t, {"Z"})


def test_occurrence():
    t = P("(A ot1 B) ot2 (C ot1 D)", 2)
    assert imc.occurs_in(P("A ot2 D", 2), t)
    assert not imc.occurs_in(P("A ot1 D", 2), t)
    assert imc.occurs_in(t, t)
    assert imc.occurs_in(App("I"), t)


@given(st.sampled_from(suite.sources(3, 4)), st.data())
def test_occurrence_shortcut_matches_search(t, data):
    names = sorted(g.name for g in imc.leaves(t))
    xs = data.draw(st.sets(st.sampled_from(names)))
    b = imc.subtract(t, xs)
    assert imc.occurs_in(b, t) == imc.occurs_in_by_search(b, t) is True
    if len(names) >= 2:
        x, y = names[:2]
        for i in (1, 2, 3):
            probe = App(imc.tensor(i), (Gen(x), Gen(y)))
            assert imc.occurs_in(probe, t) == imc.occurs_in_by_search(probe, t)


def test_map_existence_examples():
    assert imc.map_exists(P("A ot1 B", 2), P("A ot2 B", 2))
    assert not imc.map_exists(P("A ot2 B", 2), P("A ot1 B", 2))
    assert imc.map_exists(P("(A ot2 B) ot1 (C ot2 D)", 2), P("(A ot1 C) ot2 (B ot1 D)", 2))
    with pytest.raises(TermError):
        imc.map_exists(P("A ot1 B", 2), P("A ot1 C", 2))


@pytest.mark.parametrize("kind", imc.DERIVED)
@pytest.mark.parametrize("i,j", [(1, 2), (1, 3), (2, 3)])
def test_derived_map_endpoints(kind, i, j):
    args = [Gen(x) for x in "ABC"][: 2 if kind in ("iota", "tau") else 3]
    assert imc.derived_source_target(kind, i, j, *args, n=3) == imc.derived_endpoints(kind, i, j, *args)


def test_derived_map_index_errors():
    with pytest.raises(ValueError):
        imc.derived_map("iota", 2, 1, Gen("A"), Gen("B"))
    with pytest.raises(ValueError):
        imc.derived_map("iota", 1, 2, Gen("A"))


def test_non_confluence():
    w = imc.non_confluence_witness(2)
    assert w["left_reducts"] == [P("A ot2 B", 2)]
    assert w["right_reducts"] == [P("B ot2 A", 2)]
    assert not w["joinable"]
    assert not imc.non_confluence_witness(3)["joinable"]
    with pytest.raises(ValueError):
        imc.non_confluence_witness(1)


def test_eckmann_hilton_substitution():
    tri = imc.eckmann_hilton_triangles(1, 2, 3)
    assert [t["name"] for t in tri] == ["iota-iota", "tau-tau", "iota-tau", "tau-iota"]
    first = tri[0]["hexagon_source"]
    I = App("I")
    ot = lambda x, y, k: App(imc.tensor(k), (x, y))  # noqa: E731
    assert first == ot(ot(ot(Gen("A"), I, 3), ot(I, I, 3), 2), ot(ot(I, I, 3), ot(I, Gen("B"), 3), 2), 1)


def test_eckmann_hilton_triangles_are_hexagon_instances(m3):
    for tri in imc.eckmann_hilton_triangles(1, 2, 3):
        j = face_instance(tri["left"], tri["right"], m3, 4)
        assert j is not None and j.kind == "axiom"
        assert decide_commutes(m3, tri["left"], tri["right"]).equal


def test_general_position_means_repetition_free(m2):
    for t in suite.sources(2, 3):
        g = explore([t], m2)
        for v in g.vertices:
            for p in hom_paths(g, t, v)[:3]:
                if p:
                    assert is_general_position(path_morphism(p, m2), m2)
    rep = P("A ot1 A", 2)
    assert not imc.is_repetition_free(rep)


def test_ordered_terms_cover_all_terms_up_to_renaming():
    for n, k in [(2, 3), (3, 3)]:
        ordered = set(imc.ordered_terms(k, n))
        every = imc.all_terms("ABC"[:k], n)
        assert ordered <= set(every)
        for t in every:
            order = [g.name for g in imc.leaves(t)]
            rename = {x: Gen("ABC"[order.index(x)]) for x in order}
            assert _rename(t, rename) in ordered


def _rename(t, m):
    if t.kind == "gen":
        return m[t.name]
    if t.kind == "app":
        return App(t.symbol, tuple(_rename(a, m) for a in t.args))
    return t


def test_termination_and_maps_at_small_size():
    assert suite.termination(2, 3).ok
    assert suite.maps(2, 3).ok


def test_coherence_at_small_size():
    r = suite.coherence(2, 3)
    assert r.ok and r.pairs > 0


def test_hexagon_legs_commute():
    checks = suite.hexagons(3)
    assert [c.name for c in checks] == ["hexagon-123"]
    assert all(c.ok for c in checks)

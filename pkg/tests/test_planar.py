import itertools

import pytest
from hypothesis import given, strategies as st

from twocells.graph import Limits, explore, hom_paths
from twocells.planar import (
    PlanarError, bare_subdivision, embeddings, diamond_check, enumerate_diamonds, enumerate_subdivisions,
    euler_ok, faces_of, has_zigzag, is_diamond, maximal_subdivisions, refinement_leq,
    regional_diamonds, span_edges, subdivision_dot, subdivision_json,
)
from twocells.rewriting import format_step
from twocells.structfile import load_corpus
from twocells.terms import parse_term


def _pairs(g, src, lim=Limits()):
    out = []
    for t in g.reachable(src):
        paths = hom_paths(g, src, t, lim)
        out.extend((a, b) for a, b in itertools.combinations(paths, 2) if a[0] != b[0])
    return out


@pytest.fixture(scope="module")
def pentagon_graph(monoidal):
    src = parse_term("A ot (B ot (C ot D))", monoidal.sig)
    return src, explore([src], monoidal)


@pytest.fixture(scope="module")
def five_graph(monoidal):
    src = parse_term("A ot (B ot (C ot (D ot E)))", monoidal.sig)
    return src, explore([src], monoidal)


def test_nested_example_has_two_diamonds(nested):
    src = parse_term("I(I(A))", nested.sig)
    g = explore([src], nested)
    ds = enumerate_diamonds(g, src)
    assert len(ds) == 2
    for a, b in ds:
        (sub,) = enumerate_subdivisions(g, a, b)
        assert len(faces_of(sub)) == 1


def test_disjoint_example_has_two_diamonds(disjoint):
    src = parse_term("I(A) ot I(A)", disjoint.sig)
    g = explore([src], disjoint)
    assert len(g.vertices) == 5
    assert len(enumerate_diamonds(g, src)) == 2


def test_pentagon_is_the_only_diamond(pentagon_graph):
    src, g = pentagon_graph
    ((a, b),) = enumerate_diamonds(g, src)
    assert {len(a), len(b)} == {2, 3}


def test_subdivisions_satisfy_euler_and_power(five_graph):
    src, g = five_graph
    for a, b in _pairs(g, src)[:40]:
        for sub in enumerate_subdivisions(g, a, b):
            assert euler_ok(sub)
            for f in faces_of(sub):
                # a face is a parallel pair with a single source and a single sink
                assert f.left[0].source == f.right[0].source == f.source
                assert f.left[-1].target == f.right[-1].target == f.target
                assert not set(f.left) & set(f.right)


def test_faces_of_maximal_subdivisions_are_diamonds_for_four_variables(pentagon_graph):
    src, g = pentagon_graph
    for a, b in _pairs(g, src):
        for sub in maximal_subdivisions(enumerate_subdivisions(g, a, b)):
            for f in faces_of(sub):
                assert is_diamond(g, f.left, f.right)


def test_maximal_subdivision_with_a_non_diamond_face(five_graph, monoidal):
    # the zig-zag that would refine the face runs through vertices already
    # drawn outside it, so it cannot be added and the subdivision stays maximal
    src, g = five_graph
    a, b = next((a, b) for a, b in _pairs(g, src)
                if [format_step(e) for e in a] == ["alpha@1", "alpha@ε", "alpha@ε"]
                and [format_step(e) for e in b] == ["alpha@1.1", "alpha@1", "alpha@1.0",
                                                    "alpha@ε", "alpha@0"])
    found = []
    for sub in maximal_subdivisions(enumerate_subdivisions(g, a, b)):
        for f in faces_of(sub):
            if not is_diamond(g, f.left, f.right):
                found.append((sub, f))
    assert found
    sub, f = found[0]
    zig = [t for t in enumerate_subdivisions(g, f.left, f.right) if has_zigzag(f.left, f.right, t.edges)]
    assert zig
    for t in zig:
        assert list(embeddings(a, b, sub.edges | t.edges)) == []


def test_refinement_is_a_preorder(pentagon_graph):
    src, g = pentagon_graph
    a, b = enumerate_diamonds(g, src)[0]
    subs = enumerate_subdivisions(g, a, b)
    for x in subs:
        assert refinement_leq(x, x)
    assert refinement_leq(bare_subdivision(a, b), subs[-1]) or len(subs) == 1


_NFCA = load_corpus("prop-nfca")
_NFCA_SRC = parse_term("I(A)", _NFCA.sig)
_NFCA_LIM = Limits(max_depth=4)
_NFCA_G = explore([_NFCA_SRC], _NFCA, _NFCA_LIM)
_NFCA_CASES = [(v, a, b) for v in _NFCA_G.vertices if v not in _NFCA_G.frontier
               for a, b in _pairs(_NFCA_G, v, _NFCA_LIM)
               if not (_NFCA_G.frontier & _NFCA_G.reachable(v))]


@given(st.sampled_from(_NFCA_CASES or [None]))
def test_diamond_check_matches_definition(case):
    if case is None:
        return
    _, a, b = case
    subs = enumerate_subdivisions(_NFCA_G, a, b, _NFCA_LIM)
    expected = not any(has_zigzag(a, b, s.edges) for s in subs)
    chk = diamond_check(_NFCA_G, a, b, _NFCA_LIM)
    assert chk.exact and chk.diamond == expected


def test_diamond_check_against_definition_on_five_variables(five_graph):
    src, g = five_graph
    for a, b in _pairs(g, src)[:60]:
        subs = enumerate_subdivisions(g, a, b)
        assert is_diamond(g, a, b) == (not any(has_zigzag(a, b, s.edges) for s in subs))


def test_regional_counts_grow_with_depth():
    counts = []
    for d in range(2, 6):
        lim = Limits(max_depth=d)
        g = explore([_NFCA_SRC], _NFCA, lim)
        counts.append(sum(len(x.diamonds) for x in regional_diamonds(g, lim).values()))
    assert counts == [0, 3, 25, 146]


def test_span_must_be_explored(monoidal):
    src = parse_term("A ot (B ot (C ot (D ot E)))", monoidal.sig)
    g = explore([src], monoidal, Limits(max_depth=1))
    tgt = [v for v in g.vertices if v in g.frontier][0]
    with pytest.raises(PlanarError):
        span_edges(g, src, tgt)


def test_exports(pentagon_graph, monoidal):
    src, g = pentagon_graph
    a, b = enumerate_diamonds(g, src)[0]
    sub = enumerate_subdivisions(g, a, b)[0]
    js = subdivision_json(sub, monoidal.sig)
    assert js["faces"]
    dot = subdivision_dot(sub, monoidal.sig)
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from moserkit.catalogue import parse_graph
from moserkit.digraph import (
    Digraph, GraphError, VertexSet, boundary, boundary_sizes, dump_edge_list, exterior,
    exterior_inclusion_violations, image, induced_subgraph, is_strongly_connected, load_edge_list,
    neg_boundary, preimage, reflexive_closure, submodularity_violations, transpose,
)


def G(spec):
    return parse_graph(spec).graph


@st.composite
def digraphs(draw, max_n=7, reflexive=None):
    n = draw(st.integers(1, max_n))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * n))
    g = Digraph.from_edges(n, edges)
    if reflexive is None:
        reflexive = draw(st.booleans())
    return reflexive_closure(g) if reflexive else g


def subsets(n):
    return st.integers(0, (1 << n) - 1).map(lambda m: VertexSet.from_mask(n, m))


def test_image_examples():
    g = G("circulant:5:0,1")
    f = g.vset([0, 2])
    assert set(image(g, f)) == {(x + s) % 5 for x in (0, 2) for s in (0, 1)} == {0, 1, 2, 3}
    assert len(image(g, g.vset())) == 0
    assert f <= image(g, f)


def test_preimage_examples():
    g = G("circulant:6:0,1,3")
    assert set(preimage(g, g.vset([1]))) == {(1 - s) % 6 for s in (0, 1, 3)} == {0, 1, 4}
    assert len(preimage(g, g.vset())) == 0
    sym = G("circulant:7:0,2,5")
    for m in range(1 << 7):
        f = VertexSet.from_mask(7, m)
        assert preimage(sym, f) == image(sym, f)


def test_boundary_exterior_examples():
    g = G("circulant:6:0,1")
    f = g.vset([0, 1])
    assert set(boundary(g, f)) == {2}
    assert set(exterior(g, f)) == {3, 4, 5}
    full = VertexSet.full(6)
    assert len(boundary(g, full)) == 0 and len(exterior(g, full)) == 0
    h = G("circulant:7:0,1,3")
    for v in range(7):
        b = boundary(h, h.vset([v]))
        assert b == h.vset(h.out_adj[v]) - h.vset([v]) and len(b) == h.out_degree(v) - 1


def test_neg_boundary_examples():
    g = G("circulant:6:0,1")
    assert set(neg_boundary(g, g.vset([3, 4, 5]))) == {2}
    assert len(neg_boundary(g, g.vset())) == 0
    sym = G("circulant:6:0,1,5")
    for m in range(64):
        f = VertexSet.from_mask(6, m)
        assert neg_boundary(sym, f) == boundary(sym, f)


def test_reflexive_closure_examples():
    assert reflexive_closure(G("circulant:5:1,2")) == G("circulant:5:0,1,2")
    g = G("circulant:5:0,1")
    assert reflexive_closure(g) is g


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=6, reflexive=False), st.data())
def test_loops_do_not_change_boundary(g, data):
    closed = reflexive_closure(g)
    assert reflexive_closure(closed) == closed
    for m in range(1 << g.n):
        f = VertexSet.from_mask(g.n, m)
        assert boundary(g, f) == boundary(closed, f)


def test_induced_subgraph_examples():
    g = G("circulant:6:0,1")
    sub, old = induced_subgraph(g, g.vset([0, 1, 2]))
    assert old == (0, 1, 2)
    assert sub.out_adj == ((0, 1), (1, 2), (2,))
    same, ident = induced_subgraph(g, VertexSet.full(6))
    assert same == g and ident == tuple(range(6))
    one, _ = induced_subgraph(g, g.vset([4]))
    assert one.n == 1 and one.reflexive
    with pytest.raises(GraphError):
        induced_subgraph(g, g.vset())


@settings(max_examples=80, deadline=None)
@given(digraphs(), st.data())
def test_partition_and_transpose(g, data):
    f = data.draw(subsets(g.n))
    parts = [f, boundary(g, f), exterior(g, f)]
    assert sum(len(p) for p in parts) == g.n
    assert (parts[0] | parts[1] | parts[2]) == VertexSet.full(g.n)
    assert preimage(g, f) == image(transpose(g), f)
    assert transpose(transpose(g)) == g


@settings(max_examples=80, deadline=None)
@given(digraphs(reflexive=True), st.data())
def test_submodularity_random_pairs(g, data):
    x, y = data.draw(subsets(g.n)), data.draw(subsets(g.n))
    d = lambda s: len(boundary(g, s))
    assert d(x | y) + d(x & y) <= d(x) + d(y)
    e = exterior(g, x)
    assert neg_boundary(g, e) <= boundary(g, x)


def test_whole_lattice_checkers_against_direct_loop():
    rng = random.Random(11)
    for _ in range(5):
        n = rng.randint(2, 5)
        g = reflexive_closure(Digraph.from_edges(n, [(rng.randrange(n), rng.randrange(n)) for _ in range(2 * n)]))
        sizes = boundary_sizes(g)
        bad = 0
        for a, b in itertools.product(range(1 << n), repeat=2):
            x, y = VertexSet.from_mask(n, a), VertexSet.from_mask(n, b)
            assert sizes[a] == len(boundary(g, x))
            bad += len(boundary(g, x | y)) + len(boundary(g, x & y)) > len(boundary(g, x)) + len(boundary(g, y))
        assert submodularity_violations(g) == bad == 0
        assert exterior_inclusion_violations(g) == 0


def test_submodularity_checker_detects_failure(monkeypatch):
    import numpy as np
    from moserkit import digraph

    # |X|^2 is supermodular, so the checker must flag it
    sizes = np.array([bin(m).count("1") ** 2 for m in range(8)])
    monkeypatch.setattr(digraph, "boundary_sizes", lambda g: sizes)
    assert submodularity_violations(Digraph([[0], [1], [2]])) > 0


def test_vertex_transitive_regularity():
    for spec in ("circulant:9:0,1,4", "cayley:D4:0,1,5", "cayley:Q8:0,2,5"):
        g = G(spec)
        assert all(g.out_degree(v) == g.in_degree(v) == g.out_degree(0) for v in range(g.n))


def test_strong_connectivity():
    assert is_strongly_connected(G("circulant:6:0,1"))
    assert not is_strongly_connected(G("circulant:6:0,2"))


def test_edge_list_roundtrip(tmp_path):
    g = G("cayley:D3:1,3")
    p = tmp_path / "g.txt"
    p.write_text(dump_edge_list(g))
    assert load_edge_list(p) == g
    assert parse_graph(f"file:{p}", reflexive=True).graph == reflexive_closure(g)
    p.write_text("3\n0 1\n1 7\n")
    with pytest.raises(GraphError):
        load_edge_list(p)
    p.write_text("x\n")
    with pytest.raises(GraphError):
        load_edge_list(p)


def test_vertex_set_range_check():
    with pytest.raises(GraphError):
        VertexSet(3, [3])

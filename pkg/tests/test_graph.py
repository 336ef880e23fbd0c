import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as o
from cayleytop.elements import Matrix, elementary
from cayleytop.errors import CapExceeded, NotFound
from cayleytop.graph import (bfs_metrics, build_graph, diameter, distances_from, elementary_lengths,
                             all_pairs, export, group_metrics, parse_dot, word_length)
from cayleytop.groups import make_group
from cayleytop.rings import ZMod
from cayleytop.topology import vol
from cayleytop.words import enumerate_ball, parse_word, reduce

# BFS diameters of sl(3, zmod k, st), frozen from the tuple-matrix oracle (k = 2, 3)
# and from the compiled search cross-checked against the order formula (k >= 5)
SL3_DIAMETERS = {2: 12, 3: 16, 5: 20, 7: 23}


def test_cycle6():
    g = build_graph("cycle:n=6")
    assert (g.n_vertices, g.degree, g.n_edges) == (6, 2, 6)


def test_sym4():
    g = build_graph("sym:m=4")
    assert (g.n_vertices, g.degree) == (24, 3)


def test_sl3_zmod2_vertices():
    assert build_graph("sl:m=3,ring=zmod2,gens=st").n_vertices == 168


def test_graph_invariants():
    for spec in ("sym:m=5", "cycle:n=2", "psl2:p=5", "sl:m=3,ring=zmod2,gens=st"):
        g = build_graph(spec)
        A = g.adjacency()
        assert (A != A.T).nnz == 0
        assert A.diagonal().sum() == 0
        assert A.max() == 1
        assert (g.dist >= 0).all()
        # vertex-transitive: every vertex has the same degree
        assert len(set(np.diff(g.indptr).tolist())) == 1


def test_cap():
    with pytest.raises(CapExceeded):
        build_graph("sym:m=8", cap=1000)
    with pytest.raises(CapExceeded):
        build_graph("limit:sym", cap=500)


def test_diameter_examples():
    assert diameter(build_graph("cycle:n=7")) == 3
    ident = (0, 1, 2)
    assert diameter(build_graph("sym:m=3")) == o.all_pairs_diameter(
        ident, o.perm_moves(o.sym_gens(3)), o.perm_mul) == 2
    mul = lambda a, b: o.mat_mul(a, b, 3, 3)
    ref = o.bfs(o.mat_id(3), o.matrix_moves(o.sl_gens(3, 3), 3, 3), mul)
    assert diameter(build_graph("sl:m=3,ring=zmod3,gens=st")) == max(ref.values()) == SL3_DIAMETERS[3]


@pytest.mark.parametrize("n", range(3, 21))
def test_cycle_diameter(n):
    assert diameter(build_graph(f"cycle:n={n}")) == n // 2


def test_all_pairs_agrees_with_identity_eccentricity():
    for spec in ("sym:m=4", "psl2:p=5", "sl:m=3,ring=zmod2,gens=st"):
        g = build_graph(spec)
        D = all_pairs(g)
        assert D.max() == diameter(g)
        assert (D[0] == g.dist).all()


def test_word_length_examples():
    G = make_group("cycle:n=9")
    assert word_length(build_graph(G), G.evaluate(parse_word("s1.s1.s1.s1", 1))) == 4
    G = make_group("sym:m=5")
    assert word_length(build_graph(G), G.generators[1]) == 1
    G = make_group("sl:m=3,ring=zmod2,gens=st")
    g = build_graph(G)
    target = elementary(ZMod(2), 3, 0, 2, 1)
    mul = lambda a, b: o.mat_mul(a, b, 3, 2)
    moves = o.matrix_moves(o.sl_gens(3, 2), 3, 2)
    assert word_length(g, target) == o.bidirectional_distance(o.mat_id(3), target.entries, moves, mul)
    with pytest.raises(NotFound):
        word_length(g, Matrix.identity(ZMod(3), 3))


def test_elementary_lengths_tables():
    rows, mx = elementary_lengths(3, "zmod2")
    assert len(rows) == 12 and mx == 9
    rows3, mx3 = elementary_lengths(3, "zmod3")
    assert all(r.length <= SL3_DIAMETERS[3] for r in rows3)
    assert mx3 == 9


def test_export_edges():
    assert export(build_graph("cycle:n=3"), "edges") == b"0 1\n0 2\n1 2\n"


def test_export_dot_round_trip():
    g = build_graph("sym:m=4")
    assert parse_dot(export(g, "dot")) == set(g.edges())


def test_export_json_consistent():
    g = build_graph("psl2:p=5")
    doc = json.loads(export(g, "json"))
    assert list(doc) == ["spec", "vertices", "degree", "diameter", "sphere_sizes", "edges"]
    assert doc["degree"] == g.degree and doc["diameter"] == diameter(g)
    assert sum(doc["sphere_sizes"]) == doc["vertices"] == 60
    assert export(g, "json") == export(build_graph("psl2:p=5"), "json")


@pytest.mark.parametrize("spec", ["sym:m=5", "psl2:p=7", "sl:m=3,ring=zmod2,gens=st", "cycle:n=12"])
def test_sphere_sizes_match_vol(spec):
    G = make_group(spec)
    sizes = bfs_metrics(build_graph(G)).sphere_sizes
    prev = 0
    for r in range(0, 5):
        v = vol(G, enumerate_ball(G.arity, r))
        if r < len(sizes):
            assert v - prev == sizes[r]
        prev = v


def test_degree_bound():
    # 2k with equality iff no involution or coincidence
    assert build_graph("sym:m=5").degree == 3
    assert build_graph("cycle:n=5").degree == 2
    assert build_graph("cycle:n=2").degree == 1
    assert build_graph("sl:m=3,ring=zmod3,gens=st").degree == 4
    assert build_graph("sl:m=3,ring=zmod2,gens=st").degree == 3


@settings(max_examples=40)
@given(st.lists(st.integers(-2, 2).filter(bool), max_size=20))
def test_word_length_contractive(raw):
    G = make_group("psl2:p=7")
    g = _graph("psl2:p=7")
    w = reduce(2, raw)
    assert word_length(g, G.evaluate(w)) <= len(w)


_CACHE = {}


def _graph(spec):
    if spec not in _CACHE:
        _CACHE[spec] = build_graph(spec)
    return _CACHE[spec]


def test_distances_from_matches_translation():
    # right multiplication is an automorphism: distances from v are those from 1 translated
    g = build_graph("sym:m=5")
    G = g.group
    rng = random.Random(3)
    for v in rng.sample(range(g.n_vertices), 5):
        d = distances_from(g, v)
        h = g.vertices[v]
        for u in rng.sample(range(g.n_vertices), 20):
            assert d[u] == g.dist[g.vertex_of(G.mul(g.vertices[u], h.inverse()))]


def test_compiled_search_matches_graph():
    for k in (2, 3):
        spec = f"sl:m=3,ring=zmod{k},gens=st"
        a = group_metrics(spec, compiled_from=0)
        b = bfs_metrics(build_graph(spec))
        assert a.method == "compiled"
        assert a.sphere_sizes == b.sphere_sizes


def test_compiled_search_sl3_zmod5():
    m = group_metrics("sl:m=3,ring=zmod5,gens=st")
    assert m.method == "compiled"
    assert m.order == o.sl_order_prime_power(3, 5) == 372000
    assert m.diameter == SL3_DIAMETERS[5]
    mul = lambda a, b: o.mat_mul(a, b, 3, 5)
    moves = o.matrix_moves(o.sl_gens(3, 5), 3, 5)
    # first spheres from a depth-limited tuple BFS
    seen, frontier = {o.mat_id(3)}, [o.mat_id(3)]
    sizes = [1]
    for _ in range(6):
        nxt = []
        for g in frontier:
            for s in moves:
                h = mul(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        sizes.append(len(nxt))
        frontier = nxt
    assert m.sphere_sizes[:7] == sizes

import itertools

import networkx as nx
import numpy as np
import pytest

from isodiv import algebra, fixtures
from isodiv.algebra import ColoredGraph, PermGenerators
from isodiv.errors import GeometryError, SizeGuard
from isodiv.tiling import Tile, build_div


def test_gww_generators_match_reference_cycles(gww):
    left, right = gww
    gl, gr = algebra.generators_of(left), algebra.generators_of(right)
    ref_l, ref_r = fixtures.gww_generators()
    assert gl == ref_l and gr == ref_r
    assert gl.cycles("a") == "(4,6)(5,7)"
    assert gr.cycles("a") == "(2,6)(3,7)"


def test_auxiliary_matches_reference(gww):
    left, right = gww
    assert np.array_equal(algebra.auxiliary(left), fixtures.X_LEFT)
    assert np.array_equal(algebra.auxiliary(right), fixtures.X_RIGHT)


def test_gram_trace_kernel(gww):
    for div in gww:
        x = algebra.auxiliary(div)
        q = algebra.structural(div)
        assert q.shape == (div.n, div.k)
        assert np.array_equal(q.gram(), x)
        assert np.trace(x) == 2 * div.k
        w = algebra.orientation_coloring(div)
        assert not np.any(x @ w)
        assert np.array_equal(np.abs(w), np.ones(div.n))


def test_degree_sequence_of_gww(gww):
    for div in gww:
        assert sorted(algebra.graph_of(div).degrees()) == [1, 1, 1, 2, 2, 2, 3]
        assert algebra.graph_of(div).is_tree()


def test_bipartite_coloring_matches_orientation(gww):
    for div in gww:
        w = algebra.orientation_coloring(div)
        assert np.array_equal(algebra.bipartite_coloring(div), w * w[0])


def test_odd_cycle_not_bipartite():
    g = ColoredGraph(3, [(0, 1, "a"), (1, 2, "b"), (0, 2, "c")])
    with pytest.raises(GeometryError):
        algebra.bipartite_coloring(g)


def test_graph_validation():
    with pytest.raises(ValueError):
        ColoredGraph(2, [(0, 0, "a")])
    with pytest.raises(ValueError):
        ColoredGraph(3, [(0, 1, "a"), (0, 2, "a")])
    with pytest.raises(ValueError):
        ColoredGraph(2, [(0, 5, "a")])


def test_perm_generators_validation_and_cycles():
    with pytest.raises(ValueError):
        PermGenerators((1, 2, 0), (0, 1, 2), (0, 1, 2))
    g = PermGenerators.from_cycles(4, a="(1,2)", b="(2,3)", c="(3,4)")
    assert str(g) == "a=(1,2), b=(2,3), c=(3,4)"
    assert algebra.graph_from_generators(g).k == 3


def test_group_orders_small_cases():
    assert algebra.group_order(PermGenerators.identity(3)) == 1
    # path of 4 copies: a, b, c generate the symmetric group on 4 points
    assert algebra.group_order(PermGenerators.from_cycles(4, "(1,2)", "(2,3)", "(3,4)")) == 24
    # a 2-cycle glued twice is still a single transposition
    assert algebra.group_order(PermGenerators.from_cycles(2, "(1,2)", "(1,2)")) == 2
    # hexagon fan: b and c act regularly on 6 copies, b c has order 3
    tri = Tile.equilateral()
    fan = build_div(tri, ["e", "b", "cb", "bcb", "cbcb", "bcbcb"])
    assert algebra.group_order(algebra.generators_of(fan)) == 6


def test_group_order_size_guard():
    with pytest.raises(SizeGuard):
        algebra.group_order(PermGenerators.identity(11))


def _nx_graph(g):
    h = nx.MultiGraph()
    h.add_nodes_from(range(g.n))
    for i, j, lab in g.edges:
        h.add_edge(i, j, color=lab.value)
    return h


def _nx_iso(g1, g2, mode):
    h1, h2 = _nx_graph(g1), _nx_graph(g2)
    if mode == "uncolored":
        return nx.is_isomorphic(h1, h2)
    perms = [("a", "b", "c")] if mode == "exact" else itertools.permutations("abc")
    for p in perms:
        sigma = dict(zip("abc", p))
        match = lambda e1, e2: sorted(sigma[d["color"]] for d in e1.values()) == \
            sorted(d["color"] for d in e2.values())
        if nx.is_isomorphic(h1, h2, edge_match=match):
            return True
    return False


def test_colored_iso_agrees_with_networkx(census_levels):
    graphs = [algebra.graph_of(d) for d in census_levels[5]]
    for g1, g2 in itertools.combinations(graphs, 2):
        for mode in algebra.ISO_MODES:
            res = algebra.colored_iso(g1, g2, mode)
            assert (res is not None) == _nx_iso(g1, g2, mode)
            if res is not None and mode != "uncolored":
                f, sigma = res
                image = {(min(f[i], f[j]), max(f[i], f[j]), sigma[l]) for i, j, l in g1.edges}
                assert image == set(g2.edges)


def test_gww_graphs_differ_only_by_colour(gww):
    gl, gr = (algebra.graph_of(d) for d in gww)
    assert algebra.colored_iso(gl, gr, "exact") is None
    assert algebra.colored_iso(gl, gr, "permute") is not None
    assert algebra.colored_iso(gl, gr, "uncolored") is not None


def test_signatures_are_invariants(gww):
    gl, gr = (algebra.graph_of(d) for d in gww)
    assert algebra.graph_signature(gl, "uncolored") == algebra.graph_signature(gr, "uncolored")
    relabelled = ColoredGraph(gl.n, [((i + 3) % 7, (j + 3) % 7, l) for i, j, l in gl.edges])
    assert algebra.graph_signature(gl) == algebra.graph_signature(relabelled)
    assert algebra.colored_iso(gl, relabelled) is not None


def test_dot_output(gww):
    dot = algebra.graph_of(gww[0]).to_dot("left")
    assert dot.startswith("graph left {")
    assert dot.count(" -- ") == 6
    assert '4 -- 6 [color="a", label="a"]' in dot


def test_reference_incidence_differs_from_derived(gww):
    q = algebra.structural(gww[0]).entries
    assert np.array_equal(q @ q.T, fixtures.X_LEFT)
    ref = fixtures.Q_LEFT_REFERENCE
    assert not np.array_equal(ref @ ref.T, fixtures.X_LEFT)
    assert not algebra.equal_up_to_permutation(q, ref)
    assert algebra.equal_up_to_permutation(q, q[::-1, ::-1])

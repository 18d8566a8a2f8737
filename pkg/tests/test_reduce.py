import json
import random

import pytest

from dipaths.generators import extend_with_vertex
from dipaths.graph import build_graph, is_strongly_connected, min_outdegree, parse_edgelist
from dipaths.paths import longest_dipath
from dipaths.reduce import (
    InsufficientOutdegree,
    InvalidChoice,
    RewiringInfeasible,
    decrement_outdegree,
    eliminate_vertex,
    reduce_full,
    rewire_candidates,
    rewire_vertex,
    sink_strong_components,
    trim_to_exact_outdegree,
)

from conftest import random_min_outdegree


def test_trim_leaves_regular_graph_alone(rt5):
    g, deleted = trim_to_exact_outdegree(rt5, 2)
    assert g == rt5 and deleted == ()


def test_trim_needs_outdegree():
    k4 = build_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    with pytest.raises(InsufficientOutdegree):
        trim_to_exact_outdegree(k4, 1)


def test_trim_deletes_surplus_smallest_heads_kept():
    # vertex 0 has outdegree 3, everything else outdegree 1
    g = build_graph(5, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 4), (4, 0)])
    trimmed, deleted = trim_to_exact_outdegree(g, 1)
    assert deleted == ((0, 2), (0, 3))
    assert [len(a) for a in trimmed.out_adj] == [1] * 5
    assert trimmed.has_arc(0, 1)


def test_sink_components(path3, two_triangles, t3):
    [c] = sink_strong_components(path3)
    assert c.vertices == (2,) and c.graph.n == 1
    [c] = sink_strong_components(two_triangles)
    assert c.vertices == (3, 4, 5)
    assert c.graph == build_graph(3, [(0, 1), (1, 2), (2, 0)])
    [c] = sink_strong_components(t3)
    assert c.graph == t3 and c.vertices == (0, 1, 2)


def test_reduce_full_on_regular_tournament(rt5):
    rep = reduce_full(rt5, 2)
    assert rep.deleted_arcs == () and rep.deleted_vertices == ()
    assert len(rep.components) == 1 and rep.components[0].graph == rt5
    assert rep.passes == 1


def test_reduce_full_drops_source():
    # triangle 0,1,2 plus source 3 -> 0, 3 -> 1
    g = build_graph(4, [(0, 1), (1, 2), (2, 0), (3, 0), (3, 1)])
    rep = reduce_full(g, 1)
    assert rep.deleted_vertices == (3,)
    assert rep.deleted_arcs == ((3, 1),)
    [c] = rep.components
    assert c.vertices == (0, 1, 2)
    assert c.graph == build_graph(3, [(0, 1), (1, 2), (2, 0)])


def test_reduce_full_invariants_on_random_graphs():
    rng = random.Random(2016)
    for _ in range(100):
        g = random_min_outdegree(12, 2, rng, extra=rng.randint(0, 10))
        rep = reduce_full(g, 2)
        assert rep.components
        assert rep.passes <= 2
        for comp in rep.components:
            h = comp.graph
            assert all(len(a) == 2 for a in h.out_adj)
            assert is_strongly_connected(h)
            assert all(len(a) > 0 for a in h.in_adj)  # no sources
            # every component arc is an arc of the input
            assert all(g.has_arc(comp.vertices[u], comp.vertices[w]) for u, w in h.arcs)


def test_reduction_never_lengthens_paths():
    rng = random.Random(7)
    for _ in range(60):
        k = rng.choice((1, 2))
        g = random_min_outdegree(rng.randint(2 * k + 1, 10), k, rng, extra=rng.randint(0, 8))
        base = longest_dipath(g, "naive").length
        rep = reduce_full(g, k)
        assert longest_dipath(trim_to_exact_outdegree(g, k)[0], "naive").length <= base
        for comp in rep.components:
            assert longest_dipath(comp.graph, "naive").length <= base


def test_report_json_round_trips_components(two_triangles):
    rep = reduce_full(two_triangles, 1)
    doc = json.loads(json.dumps(rep.to_json()))
    # trimming keeps 2 -> 0 and drops the bridge 2 -> 3, so both triangles survive
    assert doc["deleted_arcs"] == [[2, 3]] and doc["deleted_vertices"] == []
    assert [c["vertices"] for c in doc["components"]] == [[0, 1, 2], [3, 4, 5]]
    for comp, ref in zip(doc["components"], rep.components):
        g, k = parse_edgelist(comp["edgelist"])
        assert k == 1 and g == ref.graph


def test_decrement_outdegree_examples(t3, rt5, rt7):
    assert decrement_outdegree(t3).arcs == ()
    five_cycle = decrement_outdegree(rt5, {i: (i + 2) % 5 for i in range(5)})
    assert five_cycle.arcs == tuple(sorted((i, (i + 1) % 5) for i in range(5)))
    assert min_outdegree(five_cycle) == 1
    h = decrement_outdegree(rt7, [(i + 3) % 7 for i in range(7)])
    assert [len(a) for a in h.out_adj] == [2] * 7


def test_decrement_outdegree_removes_n_arcs():
    rng = random.Random(3)
    for _ in range(30):
        g = random_min_outdegree(9, 2, rng, extra=5)
        choice = [rng.choice(a) for a in g.out_adj]
        assert decrement_outdegree(g, choice).num_arcs == g.num_arcs - g.n


def test_decrement_outdegree_invalid_choice(t3, path3):
    with pytest.raises(InvalidChoice):
        decrement_outdegree(t3, {0: 2, 1: 2, 2: 0})
    with pytest.raises(InsufficientOutdegree):
        decrement_outdegree(path3)


def test_eliminate_vertex_examples(t3, rt5, rt7):
    assert eliminate_vertex(t3, 2) == build_graph(2, [(0, 1)])
    # in-neighbours of 0 in RT5 are 3 and 4; they drop to outdegree 1
    h = eliminate_vertex(rt5, 0)
    assert h.n == 4 and [len(a) for a in h.out_adj] == [2, 2, 1, 1]
    for v in range(7):
        h = eliminate_vertex(rt7, v)
        assert h.n == 6 and min_outdegree(h) == 2


def test_eliminate_vertex_bound_on_random_graphs():
    rng = random.Random(11)
    for _ in range(40):
        g = random_min_outdegree(10, 3, rng, extra=3)
        for v in range(g.n):
            assert min_outdegree(eliminate_vertex(g, v)) >= min_outdegree(g) - 1


def test_rewire_triangle_infeasible(t3):
    with pytest.raises(RewiringInfeasible) as info:
        rewire_vertex(t3, 2, 1)
    assert info.value.u == 1


def test_rewire_in_tournament_is_infeasible(rt7):
    # every pair of a tournament is already adjacent, so no new head exists
    for v in range(7):
        assert all(not heads for heads in rewire_candidates(rt7, v).values())
        with pytest.raises(RewiringInfeasible):
            rewire_vertex(rt7, v, 3)


def test_rewire_vertex_without_in_neighbours():
    g = build_graph(4, [(3, 0), (0, 1), (1, 2), (2, 0)])
    [h] = rewire_vertex(g, 3, 1)
    assert h == build_graph(3, [(0, 1), (1, 2), (2, 0)])


def test_rewire_undoes_extension(rt5):
    g, _ = extend_with_vertex(rt5, 0, 1, 2)
    z = g.n - 1
    results = rewire_vertex(g, z, 2)
    assert rt5 in results


def test_rewire_results_are_valid():
    rng = random.Random(19)
    checked = 0
    for _ in range(40):
        g = random_min_outdegree(9, 2, rng)
        for v in range(g.n):
            try:
                results = rewire_vertex(g, v, 2, limit=50)
            except RewiringInfeasible:
                continue
            for h in results:
                checked += 1
                assert h.n == g.n - 1
                assert min_outdegree(h) >= 2
                assert h.num_arcs == g.num_arcs - g.outdegree(v)
    assert checked > 0


def test_rewire_skips_mutual_new_arcs():
    # in-neighbours 0 and 1 of vertex 4 may only point at each other
    g = build_graph(5, [(0, 4), (1, 4), (4, 2), (4, 3), (2, 0), (3, 0), (2, 1), (3, 1), (2, 3)])
    cands = rewire_candidates(g, 4)
    assert cands == {0: (1,), 1: (0,)}
    with pytest.raises(RewiringInfeasible):
        rewire_vertex(g, 4, 1)

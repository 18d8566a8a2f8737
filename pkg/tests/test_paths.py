import random

import pytest
from hypothesis import given, settings

from dipaths.generators import rotational_tournament
from dipaths.graph import OrientedGraph, is_dicycle, is_dipath, is_strongly_connected, min_outdegree, remove_arcs
from dipaths.paths import (
    ResourceLimit,
    NotACutVertex,
    covered_vertices,
    cut_vertex_long_path,
    eccentricity_profile,
    find_dipath_at_least,
    geometric_order_bound,
    greedy_long_cycle,
    longest_dipath,
    longest_dipath_from,
    longest_dipath_through,
    maximum_dipaths,
    merge_two_cycles,
    paper_order_bound,
    reach_count,
    starts_dipath_at_least,
)

from conftest import oriented_graphs, random_min_outdegree, random_reduced
from oracles import brute_longest

EXACT = ("subset-dp", "dfs-bb", "milp", "naive")


def glue(block: OrientedGraph, copies: int = 2) -> OrientedGraph:
    """Copies of ``block`` sharing vertex 0 and nothing else."""
    m = block.n
    arcs = []
    for c in range(copies):
        label = lambda i: 0 if i == 0 else c * (m - 1) + i
        arcs.extend((label(u), label(w)) for u, w in block.arcs)
    return OrientedGraph(copies * (m - 1) + 1, arcs)


@pytest.mark.parametrize("algo", EXACT + ("auto",))
def test_longest_examples(algo, t3, rt5, th4):
    assert longest_dipath(t3, algo).length == 2
    assert longest_dipath(rt5, algo).length == 4
    res = longest_dipath(th4, algo)
    assert res.length >= 6
    assert is_dipath(th4, res.vertices) and len(res.vertices) == res.length + 1


def test_theorem4_fixture_witness(th4):
    a, b, c, d, e, v, y = range(7)
    assert is_dipath(th4, (v, c, d, e, a, b, y))


@pytest.mark.parametrize("algo", EXACT)
def test_through_and_from_examples(algo, t3, path3, th4):
    for v in range(3):
        assert longest_dipath_through(t3, v, algo).length == 2
    assert longest_dipath_from(path3, 2, algo).length == 0
    assert longest_dipath_from(th4, 5, algo).length >= 6


@settings(max_examples=150, deadline=None)
@given(oriented_graphs(max_n=7))
def test_algorithms_match_brute_force(g):
    expected = brute_longest(g)
    for algo in EXACT:
        res = longest_dipath(g, algo)
        assert res.length == expected
        assert is_dipath(g, res.vertices) and len(res.vertices) == expected + 1


@settings(max_examples=60, deadline=None)
@given(oriented_graphs(max_n=6))
def test_restricted_queries_match_brute_force(g):
    for v in range(g.n):
        want_from = brute_longest(g, start=v)
        want_through = brute_longest(g, through=v)
        for algo in EXACT:
            res = longest_dipath_from(g, v, algo)
            assert res.length == want_from and res.vertices[0] == v
            res = longest_dipath_through(g, v, algo)
            assert res.length == want_through and v in res.vertices
            assert is_dipath(g, res.vertices)


def test_algorithms_agree_on_seeded_random_graphs():
    rng = random.Random(5)
    for _ in range(120):
        k = rng.choice((1, 2, 3))
        g = random_min_outdegree(rng.randint(2 * k + 1, 10), k, rng, extra=rng.randint(0, 6))
        lengths = {longest_dipath(g, algo).length for algo in EXACT}
        assert len(lengths) == 1


def test_subset_dp_respects_memory_budget(rt5):
    with pytest.raises(ResourceLimit):
        longest_dipath(rt5, "subset-dp", memory_budget=16)
    res = longest_dipath(rt5, "auto", memory_budget=16)
    assert res.algorithm == "milp" and res.length == 4


def test_large_tournament():
    g = rotational_tournament(31)
    res = longest_dipath(g)
    assert res.algorithm == "milp" and res.length == 30
    res = longest_dipath(g, "dfs-bb")
    assert res.length == 30 and is_dipath(g, res.vertices)


def test_milp_and_branch_and_bound_agree_beyond_dp_range():
    rng = random.Random(23)
    for _ in range(6):
        g = random_min_outdegree(rng.randint(22, 28), 2, rng, extra=rng.randint(0, 10))
        a, b = longest_dipath(g, "milp"), longest_dipath(g, "dfs-bb")
        assert a.length == b.length
        assert is_dipath(g, a.vertices) and is_dipath(g, b.vertices)


def test_incumbent_is_kept_when_optimal(rt5):
    res = longest_dipath(rt5, "dfs-bb", incumbent=(0, 1, 2, 3, 4))
    assert res.vertices == (0, 1, 2, 3, 4)


def test_unknown_algorithm(t3):
    with pytest.raises(ValueError):
        longest_dipath(t3, "magic")


def test_find_dipath_at_least(rt5, path3):
    p = find_dipath_at_least(rt5, 3)
    assert p is not None and len(p) - 1 >= 3 and is_dipath(rt5, p)
    assert find_dipath_at_least(path3, 3) is None
    assert starts_dipath_at_least(path3, 0, 2)
    assert not starts_dipath_at_least(path3, 1, 2)


@settings(max_examples=80, deadline=None)
@given(oriented_graphs(max_n=7))
def test_covered_vertices(g):
    through = [brute_longest(g, through=v) for v in range(g.n)]
    for length in range(0, 4):
        want = {v for v in range(g.n) if through[v] >= length}
        assert covered_vertices(g, length) == want


def test_maximum_dipaths(t3, path3):
    assert sorted(maximum_dipaths(t3)) == [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    assert maximum_dipaths(path3) == [(0, 1, 2)]


# -- cycles and constructions --------------------------------------------------------


def test_greedy_cycle_examples(t3, rt5, rt7):
    assert greedy_long_cycle(t3, 1) == (0, 1, 2)
    # hand trace: 0->1->2->3->4, and 4's out-neighbours 0,1 are both used
    assert greedy_long_cycle(rt5, 2) == (0, 1, 2, 3, 4)
    assert greedy_long_cycle(rt7, 3) == (0, 1, 2, 3, 4, 5, 6)


def test_greedy_cycle_requires_outdegree(path3):
    with pytest.raises(ValueError):
        greedy_long_cycle(path3, 1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_greedy_cycle_is_long_on_reduced_graphs(k):
    for g in random_reduced(k, 2 * k + 1, 12, 40, seed=k):
        for s in range(g.n):
            c = greedy_long_cycle(g, k, s)
            assert is_dicycle(g, c) and len(c) >= k + 2


def test_merge_disjoint_cycles(two_triangles):
    res = merge_two_cycles(two_triangles, (0, 1, 2), (3, 4, 5), 1)
    assert res.length == 5
    assert sorted(res.vertices) == list(range(6))
    assert is_dipath(two_triangles, res.vertices)


def test_merge_disjoint_cycles_either_order(two_triangles):
    res = merge_two_cycles(two_triangles, (3, 4, 5), (0, 1, 2), 1)
    assert res.length == 5 and is_dipath(two_triangles, res.vertices)


def test_merge_cycles_sharing_one_vertex(bowtie):
    res = merge_two_cycles(bowtie, (0, 1, 2), (2, 3, 4), 1)
    assert res.length == 4
    assert sorted(res.vertices) == list(range(5))
    assert is_dipath(bowtie, res.vertices)


def test_merge_identical_cycles_not_applicable(t3):
    assert merge_two_cycles(t3, (0, 1, 2), (1, 2, 0), 1) is None


def test_merge_rejects_short_or_invalid_cycles(t3):
    with pytest.raises(ValueError):
        merge_two_cycles(t3, (0, 1, 2), (0, 1, 2), 2)
    with pytest.raises(ValueError):
        merge_two_cycles(t3, (0, 2, 1), (0, 1, 2), 1)


@pytest.mark.parametrize("n, k", [(5, 2), (7, 3)])
def test_cut_vertex_path_on_glued_tournaments(n, k):
    g = glue(rotational_tournament(n))
    assert min_outdegree(g) == k and is_strongly_connected(g)
    res = cut_vertex_long_path(g, 0, k)
    assert is_dipath(g, res.vertices)
    assert res.length >= 2 * k + 2
    assert longest_dipath(g).length >= 2 * k + 2


def test_cut_vertex_path_rejects_non_cut_vertex(rt5):
    with pytest.raises(NotACutVertex):
        cut_vertex_long_path(rt5, 0, 2)


# -- distances ------------------------------------------------------------------------


def test_eccentricities(t3, rt5, path3):
    assert eccentricity_profile(t3) == (2, 2, 2)
    assert eccentricity_profile(rt5) == (2, 2, 2, 2, 2)
    assert eccentricity_profile(path3) == (2, float("inf"), float("inf"))
    assert reach_count(path3, 0, 2) == 2
    assert reach_count(path3, 0, 1) == 1
    assert reach_count(path3, 2, 5) == 0


@settings(max_examples=100, deadline=None)
@given(oriented_graphs(min_n=2, max_n=8))
def test_longest_at_least_diameter_when_strong(g):
    if is_strongly_connected(g):
        assert longest_dipath(g).length >= max(eccentricity_profile(g))


@settings(max_examples=80, deadline=None)
@given(oriented_graphs(max_n=8))
def test_arc_deletion_never_lengthens(g):
    base = longest_dipath(g).length
    for a in g.arcs:
        assert longest_dipath(remove_arcs(g, [a])).length <= base


def test_order_bounds():
    assert [paper_order_bound(k) for k in (1, 2, 3)] == [3, 11, 127]
    assert [geometric_order_bound(k) for k in (1, 2, 3)] == [2, 15, 364]

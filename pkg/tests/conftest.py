import random

import pytest
from hypothesis import strategies as st

from dipaths.generators import random_k_out, rotational_tournament, theorem4_fixture
from dipaths.graph import OrientedGraph, build_graph
from dipaths.reduce import reduce_full

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def t3():
    return build_graph(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def rt5():
    return rotational_tournament(5)


@pytest.fixture
def rt7():
    return rotational_tournament(7)


@pytest.fixture
def th4():
    return theorem4_fixture()


@pytest.fixture
def path3():
    return build_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def two_triangles():
    """Triangles 0,1,2 and 3,4,5 with the single arc 2->3 between them."""
    return build_graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])


@pytest.fixture
def bowtie():
    """Triangles 0,1,2 and 2,3,4 sharing only vertex 2."""
    return build_graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])


def add_random_arcs(g: OrientedGraph, rng: random.Random, extra: int) -> OrientedGraph:
    arcs = set(g.arcs)
    free = [(u, w) for u in range(g.n) for w in range(g.n)
            if u != w and (u, w) not in arcs and (w, u) not in arcs]
    rng.shuffle(free)
    for u, w in free:
        if extra == 0:
            break
        if (w, u) not in arcs:
            arcs.add((u, w))
            extra -= 1
    return OrientedGraph(g.n, arcs)


def random_min_outdegree(n: int, k: int, rng: random.Random, extra: int = 0) -> OrientedGraph:
    """Random graph with minimum outdegree >= k (exactly k plus ``extra`` random arcs)."""
    return add_random_arcs(random_k_out(n, k, rng), rng, extra)


def random_reduced(k: int, n_lo: int, n_hi: int, count: int, seed: int) -> list[OrientedGraph]:
    """``count`` reduced components drawn from seeded random k-out graphs."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_min_outdegree(rng.randint(n_lo, n_hi), k, rng, extra=rng.randint(0, 4))
        for comp in reduce_full(g, k).components:
            if len(out) < count:
                out.append(comp.graph)
    return out


@st.composite
def oriented_graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    arcs = []
    for u in range(n):
        for w in range(u + 1, n):
            pick = draw(st.sampled_from((None, "fwd", "back")))
            if pick == "fwd":
                arcs.append((u, w))
            elif pick == "back":
                arcs.append((w, u))
    return OrientedGraph(n, arcs)

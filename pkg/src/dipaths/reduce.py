"""Reductions that cannot lengthen any dipath.

Deleting arcs or vertices never creates a longer dipath, so a graph with
minimum outdegree k may be trimmed to exact outdegree k and then cut down to
its sink strong components without losing a counterexample.  The subgraph
constructions here (dropping one out-arc per vertex, eliminating a vertex,
rewiring around a deleted vertex) build on the same observation.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .graph import (
    OrientedGraph,
    induced_subgraph,
    min_outdegree,
    strong_components,
    to_edgelist,
)


class InsufficientOutdegree(ValueError):
    pass


class InvalidChoice(ValueError):
    pass


class RewiringInfeasible(ValueError):
    def __init__(self, u: int | None, message: str | None = None):
        super().__init__(message or f"in-neighbour {u} has no admissible new head")
        self.u = u


class Component(NamedTuple):
    """A standalone subgraph plus ``vertices[i]`` = id of local vertex i in the parent."""

    graph: OrientedGraph
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class ReductionReport:
    k: int
    deleted_arcs: tuple[tuple[int, int], ...]
    deleted_vertices: tuple[int, ...]
    components: tuple[Component, ...]
    passes: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "deleted_arcs": [list(a) for a in self.deleted_arcs],
            "deleted_vertices": list(self.deleted_vertices),
            "components": [
                {"vertices": list(c.vertices), "edgelist": to_edgelist(c.graph, self.k)}
                for c in self.components
            ],
            "passes": self.passes,
        }


def trim_to_exact_outdegree(g: OrientedGraph, k: int) -> tuple[OrientedGraph, tuple[tuple[int, int], ...]]:
    """Keep each vertex's ``k`` out-arcs with the smallest heads, delete the rest."""
    if min_outdegree(g) < k:
        raise InsufficientOutdegree(f"minimum outdegree {min_outdegree(g)} is below k={k}")
    kept, deleted = [], []
    for u in range(g.n):
        heads = g.out_adj[u]
        kept.extend((u, w) for w in heads[:k])
        deleted.extend((u, w) for w in heads[k:])
    if not deleted:
        return g, ()
    return OrientedGraph(g.n, kept), tuple(deleted)


def sink_strong_components(g: OrientedGraph) -> list[Component]:
    """Strong components with no arc leaving them, in topological numbering order."""
    cond = strong_components(g)
    has_exit = {a for a, _ in cond.arcs}
    return [Component(*induced_subgraph(g, comp))
            for ci, comp in enumerate(cond.components) if ci not in has_exit]


def reduce_full(g: OrientedGraph, k: int) -> ReductionReport:
    """Trim to outdegree exactly k, keep sink strong components, repeat to a fixpoint.

    ``deleted_arcs`` lists only trimming deletions; arcs at deleted vertices go
    with them.  All ids in the report refer to ``g``.
    """
    if min_outdegree(g) < k:
        raise InsufficientOutdegree(f"minimum outdegree {min_outdegree(g)} is below k={k}")
    work = [Component(g, tuple(range(g.n)))]
    deleted_arcs: list[tuple[int, int]] = []
    passes = 0
    while True:
        passes += 1
        changed = False
        nxt: list[Component] = []
        for comp in work:
            trimmed, dropped = trim_to_exact_outdegree(comp.graph, k)
            labels = comp.vertices
            deleted_arcs.extend((labels[u], labels[w]) for u, w in dropped)
            sinks = sink_strong_components(trimmed)
            if dropped or len(sinks) != 1 or sinks[0].graph.n != trimmed.n:
                changed = True
            nxt.extend(Component(s.graph, tuple(labels[i] for i in s.vertices)) for s in sinks)
        work = nxt
        if not changed:
            break
    # a sink component keeps every out-arc of its vertices, so one pass settles it
    assert passes <= 2, f"reduction took {passes} passes"
    kept = {v for c in work for v in c.vertices}
    work.sort(key=lambda c: c.vertices)
    return ReductionReport(
        k=k,
        deleted_arcs=tuple(sorted(deleted_arcs)),
        deleted_vertices=tuple(v for v in range(g.n) if v not in kept),
        components=tuple(work),
        passes=passes,
    )


def decrement_outdegree(g: OrientedGraph, choice: Mapping[int, int] | Sequence[int] | None = None) -> OrientedGraph:
    """Delete exactly one out-arc per vertex.

    ``choice[u]`` names the head of the arc removed at ``u``; by default the
    smallest head is used.
    """
    if min_outdegree(g) < 1:
        raise InsufficientOutdegree("every vertex needs an out-arc to delete")
    drop = set()
    for u in range(g.n):
        w = g.out_adj[u][0] if choice is None else choice[u]
        if not g.has_arc(u, w):
            raise InvalidChoice(f"{u}->{w} is not an arc")
        drop.add((u, w))
    return OrientedGraph(g.n, [a for a in g.arcs if a not in drop])


def eliminate_vertex(g: OrientedGraph, v: int) -> OrientedGraph:
    """Delete every arc into ``v`` and then ``v`` itself; higher ids shift down by one."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} not in graph")
    if g.n == 1:
        raise ValueError("cannot eliminate the only vertex")
    sub, _ = induced_subgraph(g, (w for w in range(g.n) if w != v))
    return sub


def rewire_candidates(g: OrientedGraph, v: int) -> dict[int, tuple[int, ...]]:
    """Admissible new heads for each in-neighbour of ``v`` (ids in ``g``)."""
    return {u: tuple(w for w in range(g.n) if w not in (u, v) and not g.adjacent(u, w))
            for u in g.in_adj[v]}


def iter_rewirings(g: OrientedGraph, v: int, k: int) -> Iterator[tuple[OrientedGraph, dict[int, int]]]:
    """Yield ``(rewired graph, new head per in-neighbour)`` in a fixed order.

    The rewired graph drops ``v`` and relabels like :func:`eliminate_vertex`;
    the head map uses ids of ``g``.  Combinations in which two in-neighbours
    would point at each other are skipped.
    """
    cands = rewire_candidates(g, v)
    for u, heads in cands.items():
        if not heads:
            raise RewiringInfeasible(u)
    tails = list(cands)
    relabel = {w: (w if w < v else w - 1) for w in range(g.n) if w != v}
    base = [(relabel[a], relabel[b]) for a, b in g.arcs if v not in (a, b)]
    for heads in itertools.product(*(cands[u] for u in tails)):
        new = dict(zip(tails, heads))
        if any(new.get(w) == u for u, w in new.items()):
            continue
        h = OrientedGraph(g.n - 1, base + [(relabel[u], relabel[w]) for u, w in new.items()])
        if min_outdegree(h) >= k:
            yield h, new


def rewire_vertex(g: OrientedGraph, v: int, k: int, limit: int | None = None) -> list[OrientedGraph]:
    """All admissible rewirings around ``v`` (or the first ``limit`` of them)."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} not in graph")
    found = [h for h, _ in itertools.islice(iter_rewirings(g, v, k), limit)]
    if not found and g.in_adj[v]:
        raise RewiringInfeasible(None, f"no rewiring around {v} avoids 2-cycles while keeping outdegree {k}")
    return found

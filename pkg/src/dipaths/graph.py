"""Immutable oriented graphs and their basic structural queries.

An oriented graph here is a digraph on vertices ``0..n-1`` with no loops,
no repeated arcs and no pair of opposite arcs.  Besides the arc set every
graph carries out/in adjacency tuples and integer bitmasks of the same
relation, which the path algorithms use heavily.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import NamedTuple


class GraphError(ValueError):
    """Base class for invalid graph input."""


class LoopArc(GraphError):
    def __init__(self, v: int):
        super().__init__(f"loop arc at vertex {v}")
        self.v = v


class TwoCycle(GraphError):
    def __init__(self, u: int, v: int):
        super().__init__(f"arcs {u}->{v} and {v}->{u} form a 2-cycle")
        self.u, self.v = u, v


class DuplicateArc(GraphError):
    def __init__(self, u: int, v: int):
        super().__init__(f"arc {u}->{v} given twice")
        self.u, self.v = u, v


class VertexOutOfRange(GraphError):
    pass


class GraphFormatError(GraphError):
    """Malformed edge-list text."""


class OrientedGraph:
    """A validated, immutable oriented graph.

    Construction validates every invariant; a failed construction raises and
    never leaves a partially built object behind.
    """

    __slots__ = ("n", "arcs", "out_adj", "in_adj", "out_mask", "in_mask", "_arcset")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]]):
        if n < 1:
            raise VertexOutOfRange(f"graph needs at least one vertex, got n={n}")
        seen: set[tuple[int, int]] = set()
        for arc in arcs:
            u, v = int(arc[0]), int(arc[1])
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"arc {u}->{v} has an endpoint outside [0, {n})")
            if u == v:
                raise LoopArc(u)
            if (u, v) in seen:
                raise DuplicateArc(u, v)
            if (v, u) in seen:
                raise TwoCycle(v, u)
            seen.add((u, v))
        out_adj: list[list[int]] = [[] for _ in range(n)]
        in_adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(seen):
            out_adj[u].append(v)
            in_adj[v].append(u)
        for v in range(n):
            in_adj[v].sort()
        sa = object.__setattr__
        sa(self, "n", n)
        sa(self, "arcs", tuple(sorted(seen)))
        sa(self, "_arcset", frozenset(seen))
        sa(self, "out_adj", tuple(tuple(a) for a in out_adj))
        sa(self, "in_adj", tuple(tuple(a) for a in in_adj))
        sa(self, "out_mask", tuple(sum(1 << w for w in a) for a in out_adj))
        sa(self, "in_mask", tuple(sum(1 << w for w in a) for a in in_adj))

    def __setattr__(self, name, value):
        raise AttributeError("OrientedGraph is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrientedGraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"OrientedGraph(n={self.n}, arcs={list(self.arcs)})"

    def __reduce__(self):
        return (OrientedGraph, (self.n, self.arcs))

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self._arcset

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self._arcset or (v, u) in self._arcset

    def outdegree(self, v: int) -> int:
        return len(self.out_adj[v])

    def indegree(self, v: int) -> int:
        return len(self.in_adj[v])

    def decompose(self) -> tuple[int, list[tuple[int, int]]]:
        """Return ``(n, arcs)`` such that ``build_graph(*g.decompose()) == g``."""
        return self.n, list(self.arcs)

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)


def build_graph(n: int, arcs: Iterable[tuple[int, int]]) -> OrientedGraph:
    return OrientedGraph(n, arcs)


def min_outdegree(g: OrientedGraph) -> int:
    return min(len(a) for a in g.out_adj)


def is_tournament(g: OrientedGraph) -> bool:
    return g.num_arcs == g.n * (g.n - 1) // 2


def induced_subgraph(g: OrientedGraph, vertices: Iterable[int]) -> tuple[OrientedGraph, tuple[int, ...]]:
    """Subgraph induced on ``vertices``, relabelled densely in increasing order.

    Returns the subgraph and the mapping ``local id -> id in g``.
    """
    keep = tuple(sorted(set(vertices)))
    index = {v: i for i, v in enumerate(keep)}
    arcs = [(index[u], index[v]) for u, v in g.arcs if u in index and v in index]
    return OrientedGraph(len(keep), arcs), keep


def remove_arcs(g: OrientedGraph, arcs: Iterable[tuple[int, int]]) -> OrientedGraph:
    drop = set(arcs)
    return OrientedGraph(g.n, [a for a in g.arcs if a not in drop])


# -- paths and cycles as plain vertex tuples ---------------------------------


def is_dipath(g: OrientedGraph, vertices: Sequence[int]) -> bool:
    if not vertices or len(set(vertices)) != len(vertices):
        return False
    if any(not 0 <= v < g.n for v in vertices):
        return False
    return all(g.has_arc(a, b) for a, b in zip(vertices, vertices[1:]))


def is_dicycle(g: OrientedGraph, vertices: Sequence[int]) -> bool:
    if len(vertices) < 3 or not is_dipath(g, vertices):
        return False
    return g.has_arc(vertices[-1], vertices[0])


# -- strong components -------------------------------------------------------


class Condensation(NamedTuple):
    components: tuple[tuple[int, ...], ...]
    arcs: tuple[tuple[int, int], ...]
    component_of: tuple[int, ...]


def strong_components(g: OrientedGraph) -> Condensation:
    """Tarjan's algorithm, iterative.

    Components are numbered in topological order of the condensation, so
    every condensation arc goes from a lower to a higher number.
    """
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    found: list[tuple[int, ...]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            succ = g.out_adj[v]
            if i < len(succ):
                work[-1] = (v, i + 1)
                w = succ[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                found.append(tuple(sorted(comp)))
    # Tarjan emits sink components first.
    found.reverse()
    component_of = [0] * n
    for ci, comp in enumerate(found):
        for v in comp:
            component_of[v] = ci
    carcs = sorted({(component_of[u], component_of[v]) for u, v in g.arcs
                    if component_of[u] != component_of[v]})
    return Condensation(tuple(found), tuple(carcs), tuple(component_of))


def is_strongly_connected(g: OrientedGraph) -> bool:
    full = (1 << g.n) - 1
    return reachable_mask(g, 0) == full and reachable_mask(g, 0, reverse=True) == full


def reachable_mask(g: OrientedGraph, source: int, avoid: int = 0, reverse: bool = False) -> int:
    """Bitmask of vertices reachable from ``source`` (inclusive) without entering ``avoid``."""
    adj = g.in_mask if reverse else g.out_mask
    seen = 1 << source
    frontier = seen
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= adj[low.bit_length() - 1]
            frontier ^= low
        nxt &= ~seen & ~avoid
        seen |= nxt
        frontier = nxt
    return seen


# -- underlying undirected connectivity --------------------------------------


def _underlying(g: OrientedGraph) -> list[set[int]]:
    nbrs: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in g.arcs:
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


def cut_vertices(g: OrientedGraph) -> frozenset[int]:
    """Articulation points of the underlying undirected graph."""
    nbrs = [sorted(s) for s in _underlying(g)]
    n = g.n
    disc = [-1] * n
    low = [0] * n
    result: set[int] = set()
    t = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = t
        t += 1
        root_children = 0
        work = [(root, -1, 0)]
        while work:
            v, parent, i = work[-1]
            if i < len(nbrs[v]):
                work[-1] = (v, parent, i + 1)
                w = nbrs[v][i]
                if disc[w] == -1:
                    disc[w] = low[w] = t
                    t += 1
                    if v == root:
                        root_children += 1
                    work.append((w, v, 0))
                elif w != parent:
                    low[v] = min(low[v], disc[w])
                continue
            work.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[v])
                if parent != root and low[v] >= disc[parent]:
                    result.add(parent)
        if root_children > 1:
            result.add(root)
    return frozenset(result)


def _local_vertex_cut(nbrs: list[set[int]], s: int, t: int) -> set[int]:
    """Minimum s-t vertex separator (s, t non-adjacent) via unit-capacity max-flow.

    Vertex v is split into nodes 2v (in) and 2v+1 (out) joined by a unit arc;
    every undirected edge becomes two infinite-capacity arcs between the halves.
    """
    n = len(nbrs)
    big = n + 1
    cap: dict[tuple[int, int], int] = {}
    adj: list[list[int]] = [[] for _ in range(2 * n)]

    def add(a: int, b: int, c: int) -> None:
        if (a, b) not in cap:
            adj[a].append(b)
            adj[b].append(a)
            cap[(a, b)] = 0
            cap.setdefault((b, a), 0)
        cap[(a, b)] += c

    for v in range(n):
        add(2 * v, 2 * v + 1, big if v in (s, t) else 1)
        for w in nbrs[v]:
            add(2 * v + 1, 2 * w, big)
    source, sink = 2 * s + 1, 2 * t
    while True:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            a = queue.popleft()
            for b in adj[a]:
                if b not in parent and cap[(a, b)] > 0:
                    parent[b] = a
                    queue.append(b)
        if sink not in parent:
            break
        b = sink
        while b != source:
            a = parent[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
    # parent now holds the residual-reachable side of a minimum cut
    return {v for v in range(n) if 2 * v in parent and 2 * v + 1 not in parent}


def minimum_vertex_cut(g: OrientedGraph) -> frozenset[int] | None:
    """A minimum separating vertex set of the underlying graph.

    Returns None when the underlying graph is complete (no separator exists).
    A disconnected underlying graph yields the empty set.
    """
    nbrs = _underlying(g)
    best: set[int] | None = None
    for s in range(g.n):
        for t in range(s + 1, g.n):
            if t in nbrs[s]:
                continue
            cut = _local_vertex_cut(nbrs, s, t)
            if best is None or len(cut) < len(best):
                best = cut
                if not best:
                    return frozenset()
    return None if best is None else frozenset(best)


def underlying_connectivity(g: OrientedGraph) -> int:
    """Vertex connectivity of the underlying simple graph (n-1 for complete graphs)."""
    cut = minimum_vertex_cut(g)
    return g.n - 1 if cut is None else len(cut)


# -- edge-list text format ---------------------------------------------------


def to_edgelist(g: OrientedGraph, k: int | None = None) -> str:
    """Canonical text: ``n k`` header then one sorted ``tail head`` line per arc."""
    if k is None:
        k = min_outdegree(g)
    lines = [f"{g.n} {k}"]
    lines.extend(f"{u} {v}" for u, v in g.arcs)
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> tuple[OrientedGraph, int]:
    """Parse edge-list text; returns the graph and its declared ``k``."""
    rows = []
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {raw!r}") from None
    if not rows:
        raise GraphFormatError("missing 'n k' header line")
    (n, k), arcs = rows[0], rows[1:]
    g = OrientedGraph(n, arcs)
    if min_outdegree(g) < k:
        raise GraphFormatError(f"declared k={k} but minimum outdegree is {min_outdegree(g)}")
    return g, k


def load_graph(path: str | Path) -> tuple[OrientedGraph, int]:
    return parse_edgelist(Path(path).read_text(encoding="utf-8"))


def save_graph(g: OrientedGraph, path: str | Path, k: int | None = None) -> None:
    Path(path).write_text(to_edgelist(g, k), encoding="utf-8", newline="\n")

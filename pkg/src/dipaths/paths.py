"""Longest dipaths, long cycles and the constructions built from them.

Four exact longest-dipath algorithms are provided and are expected to agree:

* ``subset-dp``: reachability DP over (visited subset, endpoint) states,
  vectorised with numpy.  One uint32 word per subset holds the bitset of
  feasible endpoints; with bookkeeping this costs about 17 bytes per subset.
* ``dfs-bb``: depth-first branch and bound.  A partial path is abandoned when
  its length plus the number of vertices still reachable from its endpoint
  (avoiding the path) cannot beat the incumbent, or when a maximum matching
  on those vertices says the same.
* ``milp``: a 0/1 program solved with HiGHS through scipy, with cycles cut
  off lazily.  ``auto`` uses it above the subset-dp cutoff, where it copes
  with near-hamiltonian graphs on which dfs-bb stalls.
* ``naive``: plain enumeration of every dipath; only meant as an oracle.

Lengths are always counted in arcs.
"""

from __future__ import annotations

import time
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from .graph import (
    OrientedGraph,
    cut_vertices,
    induced_subgraph,
    is_dicycle,
    is_strongly_connected,
    min_outdegree,
    reachable_mask,
)

ALGORITHMS = ("auto", "subset-dp", "dfs-bb", "milp", "naive")
DP_MAX_N = 24
AUTO_DP_MAX_N = 20
DEFAULT_MEMORY_BUDGET = 2 * 1024**3
# uint32 reach word, int64 layer index, uint32 arange, uint8 popcount
DP_BYTES_PER_SUBSET = 17


class ResourceLimit(RuntimeError):
    pass


class NoConnectingPath(RuntimeError):
    pass


class NotACutVertex(ValueError):
    pass


@dataclass(frozen=True)
class PathResult:
    length: int
    vertices: tuple[int, ...]
    exact: bool = True
    algorithm: str = ""
    elapsed_ms: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "vertices": list(self.vertices),
            "exact": self.exact,
            "algorithm": self.algorithm,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- naive enumeration -------------------------------------------------------


def _naive(g: OrientedGraph, starts: Sequence[int], through: int | None) -> tuple[int, ...]:
    best: list[tuple[int, ...]] = [()]
    path: list[int] = []
    on_path = [False] * g.n

    def visit(v: int) -> None:
        path.append(v)
        on_path[v] = True
        if len(path) > len(best[0]) and (through is None or on_path[through]):
            best[0] = tuple(path)
        for w in g.out_adj[v]:
            if not on_path[w]:
                visit(w)
        on_path[v] = False
        path.pop()

    for s in starts:
        visit(s)
    return best[0]


# -- subset dynamic programming ----------------------------------------------


_BYTE_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


def _popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.uint32)
    counts = np.zeros(1 << n, dtype=np.uint8)
    for shift in range(0, n, 8):
        counts += _BYTE_POPCOUNT[(masks >> shift) & 0xFF]
    return counts


@lru_cache(maxsize=None)
def _small_layers(n: int) -> tuple[np.ndarray, ...]:
    counts = _popcounts(n)
    return tuple(np.flatnonzero(counts == p) for p in range(n + 1))


def _layers(n: int) -> Sequence[np.ndarray]:
    """Subset masks grouped by popcount, each group in increasing order."""
    if n <= 16:
        return _small_layers(n)
    counts = _popcounts(n)
    return [np.flatnonzero(counts == p) for p in range(n + 1)]


def _reach_table(g: OrientedGraph, starts: Sequence[int], memory_budget: int) -> tuple[np.ndarray, Sequence[np.ndarray]]:
    """``reach[S]`` = bitset of endpoints v such that some allowed start reaches
    v along a dipath whose vertex set is exactly S."""
    n = g.n
    if n > DP_MAX_N:
        raise ResourceLimit(f"subset-dp is limited to n <= {DP_MAX_N}, got n={n}")
    need = DP_BYTES_PER_SUBSET * (1 << n)
    if need > memory_budget:
        raise ResourceLimit(f"subset-dp needs ~{need} bytes for n={n}, budget is {memory_budget}")
    reach = np.zeros(1 << n, dtype=np.uint32)
    for s in starts:
        reach[1 << s] = 1 << s
    in_mask = [np.uint32(m) for m in g.in_mask]
    layers = _layers(n)
    for p in range(1, n):
        live = layers[p][reach[layers[p]] != 0]
        if live.size == 0:
            break
        r = reach[live]
        for w in range(n):
            bit = 1 << w
            hit = ((live & bit) == 0) & ((r & in_mask[w]) != 0)
            if hit.any():
                reach[live[hit] | bit] |= np.uint32(bit)
    return reach, layers


def _subset_dp(g: OrientedGraph, starts: Sequence[int], through: int | None,
               memory_budget: int) -> tuple[int, ...]:
    reach, layers = _reach_table(g, starts, memory_budget)
    mask = 0
    for p in range(g.n, 0, -1):
        live = layers[p][reach[layers[p]] != 0]
        if through is not None:
            live = live[((live >> through) & 1) == 1]
        if live.size:
            mask = int(live[0])
            break
    if not mask:
        return ()
    end = next(_bits(int(reach[mask])))
    rev = [end]
    while mask & (mask - 1):
        mask ^= 1 << end
        end = next(_bits(int(reach[mask]) & g.in_mask[end]))
        rev.append(end)
    return tuple(reversed(rev))


# -- depth-first branch and bound --------------------------------------------


def _matching_size(out_mask: Sequence[int], tails: int, heads: int, limit: int) -> int:
    """Maximum matching from ``tails`` to ``heads`` along arcs, stopping early at ``limit``.

    The arcs of a dipath pair each tail with a distinct head, so this bounds
    how many arcs any dipath inside the two sets can use.
    """
    match: dict[int, int] = {}  # head -> tail

    def augment(x: int, seen: list[int]) -> bool:
        cand = out_mask[x] & heads & ~seen[0]
        while cand:
            low = cand & -cand
            cand ^= low
            seen[0] |= low
            y = low.bit_length() - 1
            if y not in match or augment(match[y], seen):
                match[y] = x
                return True
        return False

    size = 0
    for x in _bits(tails):
        if augment(x, [0]):
            size += 1
            if size >= limit:
                break
    return size


def _dfs_bb(g: OrientedGraph, starts: Sequence[int], through: int | None,
            incumbent: tuple[int, ...] = (), target: int | None = None,
            node_budget: int | None = None) -> tuple[tuple[int, ...], bool]:
    """Returns (best path, complete).  ``complete`` is False if the node budget ran out.

    Starts are searched round-robin under node allowances that grow fourfold
    per round, so one start with a huge subtree cannot hold up another whose
    long path is easy to find.  A start counts as done only once its whole
    subtree was searched against the incumbent.
    """
    n = g.n
    out_mask = g.out_mask
    best = [tuple(incumbent)]
    cap = n if target is None else min(n, target + 1)  # vertex count that ends the search
    if n:
        # no dipath has more arcs than a maximum matching of the whole graph
        full = (1 << n) - 1
        cap = min(cap, _matching_size(out_mask, full, full, n) + 1)
    if len(best[0]) >= cap:
        return best[0], True
    path: list[int] = []
    left = [0]
    need_bit = 0 if through is None else 1 << through

    class _Found(Exception):
        pass

    class _OutOfNodes(Exception):
        pass

    def visit(v: int, visited: int) -> None:
        left[0] -= 1
        if left[0] < 0:
            raise _OutOfNodes
        path.append(v)
        if len(path) > len(best[0]) and (visited & need_bit) == need_bit:
            best[0] = tuple(path)
            if len(path) >= cap:
                raise _Found
        free = out_mask[v] & ~visited
        if free:
            ahead = reachable_mask(g, v, avoid=visited & ~(1 << v))
            if need_bit and not (visited & need_bit) and not (ahead & need_bit):
                path.pop()
                return
            room = len(best[0]) - len(path) + 1  # arcs still needed to beat the incumbent
            if bin(ahead).count("1") - 1 >= room and (
                    # the reach count alone is weak on strong graphs; a matching is tighter
                    _matching_size(out_mask, ahead, ahead & ~(1 << v), room) >= room):
                # fewest onward moves first tends to find long paths early
                for w in sorted(_bits(free), key=lambda w: bin(out_mask[w] & ~visited).count("1")):
                    visit(w, visited | (1 << w))
        path.pop()

    bound = {}
    for s in starts:
        ahead = reachable_mask(g, s)
        bound[s] = _matching_size(out_mask, ahead, ahead & ~(1 << s), n)
    pending = sorted(starts, key=lambda s: (-bound[s], len(g.in_adj[s]), s))
    spent, allowance = 0, 256
    while pending:
        unfinished = []
        for s in pending:
            if bound[s] + 1 <= len(best[0]):
                continue
            quota = allowance if node_budget is None else min(allowance, node_budget - spent)
            if quota <= 0:
                return best[0], False
            left[0] = quota
            path.clear()
            try:
                visit(s, 1 << s)
            except _Found:
                return best[0], True
            except _OutOfNodes:
                unfinished.append(s)
            spent += quota - max(left[0], 0)
        pending = unfinished
        allowance *= 4
    return best[0], True


# -- integer programming -----------------------------------------------------


def _milp(g: OrientedGraph, starts: Sequence[int], through: int | None,
          required: Sequence[int] = ()) -> tuple[int, ...]:
    """Longest dipath as a 0/1 program solved by HiGHS, cutting off cycles lazily.

    Variables are one per arc plus, per vertex, used / first / last flags.
    Every used vertex has in-degree plus first-flag 1 and out-degree plus
    last-flag 1, with exactly one first and one last vertex.  That admits a
    path together with disjoint cycles; each cycle found on S is cut with
    x(S) <= |S| - 1 and the program is solved again.  ``required`` is a
    dipath that must appear as a subpath.
    """
    n, arcs = g.n, g.arcs
    if n == 0 or not starts:
        return ()
    m = len(arcs)
    used, first, last = m, m + n, m + 2 * n
    size = m + 3 * n
    rows, cols, vals = [], [], []
    nrows = 0

    def add(entries, coef=1.0):
        for j in entries:
            rows.append(nrows)
            cols.append(j)
            vals.append(coef)

    for v in range(n):
        add([i for i, (_, b) in enumerate(arcs) if b == v] + [first + v])
        add([used + v], -1.0)
        nrows += 1
        add([i for i, (a, _) in enumerate(arcs) if a == v] + [last + v])
        add([used + v], -1.0)
        nrows += 1
    add([first + v for v in range(n)])
    nrows += 1
    add([last + v for v in range(n)])
    nrows += 1
    lo, hi = [0.0] * (2 * n) + [1.0, 1.0], [0.0] * (2 * n) + [1.0, 1.0]

    lb, ub = np.zeros(size), np.ones(size)
    allowed = set(starts)
    for v in range(n):
        if v not in allowed:
            ub[first + v] = 0
    if through is not None:
        lb[used + through] = 1
    index = {a: i for i, a in enumerate(arcs)}
    for v in required:
        lb[used + v] = 1
    for a in zip(required, required[1:]):
        lb[index[a]] = 1
    cost = np.zeros(size)
    cost[:m] = -1.0
    while True:
        matrix = sparse.csr_matrix((vals, (rows, cols)), shape=(nrows, size))
        res = milp(cost, constraints=LinearConstraint(matrix, lo, hi),
                   integrality=np.ones(size), bounds=Bounds(lb, ub))
        if res.status == 2:  # infeasible: no admissible dipath
            return ()
        if res.status != 0:
            raise ResourceLimit(f"integer program stopped early: {res.message}")
        x = res.x
        succ = {a: b for i, (a, b) in enumerate(arcs) if x[i] > 0.5}
        v = next(v for v in range(n) if x[first + v] > 0.5)
        path, seen = [v], {v}
        while path[-1] in succ:
            path.append(succ[path[-1]])
            seen.add(path[-1])
        cut = False
        for v in sorted(succ):
            if v in seen:
                continue
            cycle = {v}
            w = succ[v]
            while w != v:
                cycle.add(w)
                w = succ[w]
            seen |= cycle
            add([i for i, (a, b) in enumerate(arcs) if a in cycle and b in cycle])
            nrows += 1
            lo.append(0.0)
            hi.append(len(cycle) - 1.0)
            cut = True
        if not cut:
            return tuple(path)


# -- public queries ----------------------------------------------------------


def _pick(algo: str, n: int, memory_budget: int) -> str:
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
    if algo != "auto":
        return algo
    if n <= AUTO_DP_MAX_N and DP_BYTES_PER_SUBSET * (1 << n) <= memory_budget:
        return "subset-dp"
    return "milp"


def _run(g: OrientedGraph, starts: Sequence[int], through: int | None, algo: str,
         memory_budget: int, incumbent: Sequence[int] = ()) -> PathResult:
    t0 = time.perf_counter()
    chosen = _pick(algo, g.n, memory_budget)
    if chosen == "subset-dp":
        try:
            verts = _subset_dp(g, starts, through, memory_budget)
        except ResourceLimit:
            if algo != "auto":
                raise
            chosen = "milp"
    if chosen == "dfs-bb":
        verts, _ = _dfs_bb(g, starts, through, incumbent=tuple(incumbent))
    elif chosen == "milp":
        verts = _milp(g, starts, through)
    elif chosen == "naive":
        verts = _naive(g, starts, through)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return PathResult(max(len(verts) - 1, 0), verts, True, chosen, elapsed)


def longest_dipath(g: OrientedGraph, algo: str = "auto", *,
                   memory_budget: int = DEFAULT_MEMORY_BUDGET,
                   incumbent: Sequence[int] = ()) -> PathResult:
    """Exact longest dipath of ``g`` with a witness.

    ``incumbent`` may supply a known dipath of ``g``; dfs-bb then only looks
    for strictly longer ones.
    """
    return _run(g, range(g.n), None, algo, memory_budget, incumbent)


def longest_dipath_through(g: OrientedGraph, v: int, algo: str = "auto", *,
                           memory_budget: int = DEFAULT_MEMORY_BUDGET) -> PathResult:
    return _run(g, range(g.n), v, algo, memory_budget)


def longest_dipath_from(g: OrientedGraph, v: int, algo: str = "auto", *,
                        memory_budget: int = DEFAULT_MEMORY_BUDGET) -> PathResult:
    return _run(g, (v,), None, algo, memory_budget)


def find_dipath_at_least(g: OrientedGraph, length: int,
                         node_budget: int | None = None) -> tuple[int, ...] | None:
    """Some dipath with at least ``length`` arcs, or None if none was found.

    Without a node budget None means no such dipath exists.
    """
    if length <= 0:
        return (0,)
    path, _ = _dfs_bb(g, range(g.n), None, target=length, node_budget=node_budget)
    return path if len(path) - 1 >= length else None


def covered_vertices(g: OrientedGraph, length: int, *,
                     memory_budget: int = DEFAULT_MEMORY_BUDGET) -> frozenset[int]:
    """Vertices lying on at least one dipath with ``length`` or more arcs."""
    if length <= 0:
        return frozenset(range(g.n))
    if length >= g.n:
        return frozenset()
    if _pick("auto", g.n, memory_budget) == "subset-dp":
        reach, layers = _reach_table(g, range(g.n), memory_budget)
        union = 0
        for p in range(length + 1, g.n + 1):
            live = layers[p][reach[layers[p]] != 0]
            if live.size:
                union |= int(np.bitwise_or.reduce(live))
        return frozenset(_bits(union))
    return frozenset(v for v in range(g.n)
                     if len(_dfs_bb(g, range(g.n), v, target=length)[0]) - 1 >= length)


def starts_dipath_at_least(g: OrientedGraph, v: int, length: int) -> bool:
    """Whether some dipath with ``length`` or more arcs begins at ``v``."""
    path, _ = _dfs_bb(g, (v,), None, target=length)
    return len(path) - 1 >= length


def maximum_dipaths(g: OrientedGraph, length: int | None = None) -> list[tuple[int, ...]]:
    """Every dipath of maximum length (or of exactly ``length`` arcs)."""
    if length is None:
        length = longest_dipath(g).length
    found: list[tuple[int, ...]] = []
    path: list[int] = []

    def visit(v: int, visited: int) -> None:
        path.append(v)
        if len(path) - 1 == length:
            found.append(tuple(path))
        else:
            ahead = reachable_mask(g, v, avoid=visited & ~(1 << v))
            if len(path) - 1 + bin(ahead).count("1") - 1 >= length:
                for w in _bits(g.out_mask[v] & ~visited):
                    visit(w, visited | (1 << w))
        path.pop()

    for s in range(g.n):
        visit(s, 1 << s)
    return found


# -- cycles --------------------------------------------------------------------


def greedy_long_cycle(g: OrientedGraph, k: int, start: int = 0) -> tuple[int, ...]:
    """Grow a dipath from ``start`` until its end has every out-neighbour on it.

    Ties go to the smallest vertex id.  The end vertex then closes a cycle
    with its earliest out-neighbour on the path; that cycle has at least
    ``k + 2`` vertices whenever every vertex has outdegree at least ``k``.
    """
    if k < 1 or min_outdegree(g) < k:
        raise ValueError(f"greedy_long_cycle needs minimum outdegree >= k >= 1 (k={k})")
    path = [start]
    position = {start: 0}
    while True:
        end = path[-1]
        nxt = [w for w in g.out_adj[end] if w not in position]
        if not nxt:
            first = min(position[w] for w in g.out_adj[end])
            return tuple(path[first:])
        position[nxt[0]] = len(path)
        path.append(nxt[0])


def _rotate_to_end(cycle: Sequence[int], v: int) -> tuple[int, ...]:
    i = cycle.index(v)
    return tuple(cycle[i + 1:]) + tuple(cycle[:i + 1])


def _rotate_to_start(cycle: Sequence[int], v: int) -> tuple[int, ...]:
    i = cycle.index(v)
    return tuple(cycle[i:]) + tuple(cycle[:i])


def shortest_dipath(g: OrientedGraph, sources: Iterable[int], targets: Iterable[int]) -> tuple[int, ...] | None:
    """BFS shortest dipath from any source to any target (sources tried as a set)."""
    targets = set(targets)
    parent: dict[int, int] = {}
    queue = deque()
    for s in sorted(set(sources)):
        parent[s] = -1
        queue.append(s)
    while queue:
        u = queue.popleft()
        if u in targets:
            rev = [u]
            while parent[rev[-1]] != -1:
                rev.append(parent[rev[-1]])
            return tuple(reversed(rev))
        for w in g.out_adj[u]:
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return None


def merge_two_cycles(g: OrientedGraph, c1: Sequence[int], c2: Sequence[int], k: int) -> PathResult | None:
    """Join two long cycles that share at most one vertex into one dipath.

    Returns None when the cycles share two or more vertices.
    """
    for c in (c1, c2):
        if not is_dicycle(g, c) or len(c) < k + 2:
            raise ValueError(f"{tuple(c)} is not a cycle of length >= {k + 2}")
    shared = set(c1) & set(c2)
    if len(shared) >= 2:
        return None
    if shared:
        (v,) = shared
        verts = _rotate_to_end(c1, v) + _rotate_to_start(c2, v)[1:]
        return PathResult(len(verts) - 1, verts, False, "two-cycle-merge")
    for a, b in ((c1, c2), (c2, c1)):
        link = shortest_dipath(g, a, b)
        if link is not None:
            verts = _rotate_to_end(a, link[0]) + link[1:-1] + _rotate_to_start(b, link[-1])
            return PathResult(len(verts) - 1, verts, False, "two-cycle-merge")
    raise NoConnectingPath(f"no dipath joins {tuple(c1)} and {tuple(c2)}")


def _underlying_pieces(g: OrientedGraph, removed: int) -> list[list[int]]:
    nbrs: list[set[int]] = [set() for _ in range(g.n)]
    for u, w in g.arcs:
        nbrs[u].add(w)
        nbrs[w].add(u)
    seen = {removed}
    pieces = []
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        piece, stack = [s], [s]
        while stack:
            for w in nbrs[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    piece.append(w)
                    stack.append(w)
        pieces.append(sorted(piece))
    return pieces


def cut_vertex_long_path(g: OrientedGraph, v: int, k: int) -> PathResult:
    """Dipath of length >= 2k + 2 through an underlying cut vertex ``v``.

    Each side of ``v`` loses at most one out-arc per vertex when ``v`` is
    removed, so it holds a greedy cycle of length >= k + 1.  The result runs
    around the first side's cycle, through ``v``, and around the second's.
    """
    if v not in cut_vertices(g):
        raise NotACutVertex(f"vertex {v} is not a cut vertex of the underlying graph")
    if k < 2 or min_outdegree(g) < k or not is_strongly_connected(g):
        raise ValueError("cut_vertex_long_path needs a strong graph with minimum outdegree >= k >= 2")
    side_x, side_y = _underlying_pieces(g, v)[:2]
    cycles = []
    for side in (side_x, side_y):
        sub, labels = induced_subgraph(g, side)
        local = greedy_long_cycle(sub, k - 1, 0)
        cycles.append(tuple(labels[i] for i in local))
    cx, cy = cycles
    into_v = shortest_dipath(g, cx, [v])
    out_of_v = shortest_dipath(g, [v], cy)
    if into_v is None or out_of_v is None:
        raise NoConnectingPath(f"cycles on the sides of {v} do not connect through it")
    verts = _rotate_to_end(cx, into_v[0]) + into_v[1:] + out_of_v[1:-1] + _rotate_to_start(cy, out_of_v[-1])
    return PathResult(len(verts) - 1, verts, False, "cut-vertex-construction")


# -- distances -----------------------------------------------------------------


def bfs_distances(g: OrientedGraph, source: int) -> list[float]:
    dist = [float("inf")] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.out_adj[u]:
            if dist[w] == float("inf"):
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def eccentricity_profile(g: OrientedGraph) -> tuple[float, ...]:
    """Per-vertex maximum shortest-path distance (``inf`` if something is unreachable)."""
    return tuple(max(bfs_distances(g, v)) for v in range(g.n))


def reach_count(g: OrientedGraph, v: int, x: int) -> int:
    """Number of vertices other than ``v`` at distance at most ``x`` from ``v``."""
    return sum(1 for w, d in enumerate(bfs_distances(g, v)) if w != v and d <= x)


def paper_order_bound(k: int) -> int:
    """Order at and above which a length-2k dipath is claimed: (2k-1)^k + 2."""
    return (2 * k - 1) ** k + 2


def geometric_order_bound(k: int) -> int:
    """Out-branching count 1 + k + k^2 + ... + k^(2k-1)."""
    return 1 + sum(k ** i for i in range(1, 2 * k))


"""Seeded graph families, exhaustive enumeration, vertex extension and growth runs."""

from __future__ import annotations

import csv
import io
import itertools
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

from .graph import (
    OrientedGraph,
    cut_vertices,
    is_strongly_connected,
    min_outdegree,
    underlying_connectivity,
)
from .paths import longest_dipath

MODELS = ("random-k-out", "rotational-tournament", "cut-gadget", "theorem4-fixture")

# vertex names of the fixed 7-vertex fixture, in id order
THEOREM4_LABELS = ("a", "b", "c", "d", "e", "v", "y")


class GenerationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    model: str
    n: int = 7
    k: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.model in ("random-k-out", "cut-gadget") and self.n < 2 * self.k + 1:
            raise ValueError(f"n={self.n} is below the minimum order 2k+1={2 * self.k + 1}")
        if self.model == "cut-gadget" and (self.k < 1 or self.n < 4 * self.k + 1):
            raise ValueError("cut-gadget needs two blocks of order >= 2k+1, so n >= 4k+1")
        if self.model == "rotational-tournament" and self.n % 2 == 0:
            raise ValueError("rotational tournaments need odd n")


def rotational_tournament(n: int) -> OrientedGraph:
    """Vertex i dominates i+1, ..., i+(n-1)/2 (mod n)."""
    if n % 2 == 0:
        raise ValueError("rotational tournaments need odd n")
    return OrientedGraph(n, [(i, (i + j) % n) for i in range(n) for j in range(1, (n - 1) // 2 + 1)])


def theorem4_fixture() -> OrientedGraph:
    a, b, c, d, e, v, y = range(7)
    return OrientedGraph(7, [(a, b), (b, c), (c, d), (d, e), (e, a),
                             (a, v), (v, c), (v, d), (v, e), (b, y)])


def random_k_out(n: int, k: int, rng: random.Random, retries: int = 1000) -> OrientedGraph:
    """Every vertex gets exactly k out-arcs; heads avoid loops and 2-cycles.

    Vertices pick their heads one after another in a shuffled order; an
    attempt that leaves some vertex with fewer than k admissible heads is
    discarded and restarted.
    """
    if n < 2 * k + 1:
        raise ValueError(f"n={n} is below the minimum order 2k+1")
    for _ in range(retries):
        order = list(range(n))
        rng.shuffle(order)
        arcs: set[tuple[int, int]] = set()
        for u in order:
            heads = [w for w in range(n) if w != u and (w, u) not in arcs]
            if len(heads) < k:
                break
            arcs.update((u, w) for w in rng.sample(heads, k))
        else:
            return OrientedGraph(n, arcs)
    raise GenerationFailed(f"no {k}-out oriented graph on {n} vertices after {retries} attempts")


def _gadget_block(m: int, k: int, rng: random.Random, retries: int) -> OrientedGraph:
    for _ in range(retries):
        g = random_k_out(m, k, rng, retries)
        if is_strongly_connected(g) and not cut_vertices(g):
            return g
    raise GenerationFailed(f"no strong 2-connected {k}-out block of order {m}")


def cut_gadget(n: int, k: int, rng: random.Random, retries: int = 1000) -> OrientedGraph:
    """Two strong, underlying-2-connected k-out blocks glued at one vertex.

    The glued vertex keeps the out-arcs of both blocks, so it is the unique
    cut vertex and the whole graph stays strong with minimum outdegree k.
    """
    a = rng.randint(2 * k + 1, n - 2 * k)
    b = n + 1 - a
    block_a = _gadget_block(a, k, rng, retries)
    block_b = _gadget_block(b, k, rng, retries)
    shared_a, shared_b = rng.randrange(a), rng.randrange(b)
    # block_b vertex j -> a + position among non-shared vertices, shared -> shared_a
    others = [j for j in range(b) if j != shared_b]
    to_global = {j: a + i for i, j in enumerate(others)}
    to_global[shared_b] = shared_a
    arcs = list(block_a.arcs) + [(to_global[u], to_global[w]) for u, w in block_b.arcs]
    perm = list(range(n))
    rng.shuffle(perm)
    return OrientedGraph(n, [(perm[u], perm[w]) for u, w in arcs])


def generate(spec: GenSpec) -> OrientedGraph:
    rng = random.Random(spec.seed)
    if spec.model == "random-k-out":
        return random_k_out(spec.n, spec.k, rng)
    if spec.model == "rotational-tournament":
        return rotational_tournament(spec.n)
    if spec.model == "cut-gadget":
        return cut_gadget(spec.n, spec.k, rng)
    return theorem4_fixture()


# -- exhaustive enumeration ----------------------------------------------------


def _head_choices(n: int, k: int, u: int, into: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """k-subsets of admissible heads for u given the arcs already chosen."""
    cands = [w for w in range(n) if w != u and not (into[u] >> w) & 1]
    return itertools.combinations(cands, k)


def _extend(n: int, k: int, u: int, heads: tuple[int, ...], into: list[int], indeg: list[int]) -> bool:
    """Record u's heads; False if some later vertex can no longer reach outdegree k."""
    for w in heads:
        into[w] |= 1 << u
        indeg[w] += 1
    # a later vertex w may not point at any earlier vertex that already points at w
    return all(n - 1 - indeg[w] >= k for w in range(u + 1, n))


def _undo(u: int, heads: tuple[int, ...], into: list[int], indeg: list[int]) -> None:
    for w in heads:
        into[w] &= ~(1 << u)
        indeg[w] -= 1


def enumeration_prefixes(n: int, k: int, depth: int) -> list[tuple[tuple[int, ...], ...]]:
    """All feasible head choices for vertices ``0..depth-1``, in enumeration order."""
    depth = min(depth, n)
    out: list[tuple[tuple[int, ...], ...]] = []
    into, indeg = [0] * n, [0] * n
    chosen: list[tuple[int, ...]] = []

    def rec(u: int) -> None:
        if u == depth:
            out.append(tuple(chosen))
            return
        for heads in _head_choices(n, k, u, into):
            if _extend(n, k, u, heads, into, indeg):
                chosen.append(heads)
                rec(u + 1)
                chosen.pop()
            _undo(u, heads, into, indeg)

    rec(0)
    return out


def canonical_code(g: OrientedGraph) -> int:
    """Lexicographically smallest row-major adjacency matrix over all relabellings."""
    return min(_code(g, p) for p in itertools.permutations(range(g.n)))


def _code(g: OrientedGraph, perm: Sequence[int]) -> int:
    n = g.n
    top = n * n - 1
    return sum(1 << (top - (perm[u] * n + perm[w])) for u, w in g.arcs)


def is_canonical(g: OrientedGraph) -> bool:
    """True iff no relabelling gives a lexicographically smaller adjacency matrix."""
    mine = _code(g, range(g.n))
    return all(_code(g, p) >= mine for p in itertools.permutations(range(g.n)))


def enumerate_k_out_regular(n: int, k: int, *, strongly_connected: bool = False,
                            min_connectivity: int | None = None, iso_reject: bool = False,
                            prefix: Sequence[tuple[int, ...]] = ()) -> Iterator[OrientedGraph]:
    """Every labelled oriented graph on n vertices with all outdegrees exactly k.

    Vertex u's head set is chosen after those of 0..u-1, skipping heads that
    would close a 2-cycle.  ``prefix`` fixes the head sets of the first
    vertices, which is how the stream is split into independent shards.
    With ``iso_reject`` only the lexicographically minimal labelling of each
    isomorphism class is yielded (n! relabellings per graph; keep n <= 8).
    """
    if n < 2 * k + 1:
        return
    into, indeg = [0] * n, [0] * n
    arcs: list[tuple[int, int]] = []
    for u, heads in enumerate(prefix):
        if heads not in set(_head_choices(n, k, u, into)) or not _extend(n, k, u, heads, into, indeg):
            raise ValueError(f"prefix entry {u}: {heads} is not a feasible head set")
        arcs.extend((u, w) for w in heads)

    def rec(u: int) -> Iterator[OrientedGraph]:
        if u == n:
            g = OrientedGraph(n, arcs)
            if strongly_connected and not is_strongly_connected(g):
                return
            if min_connectivity is not None and underlying_connectivity(g) < min_connectivity:
                return
            if iso_reject and not is_canonical(g):
                return
            yield g
            return
        for heads in _head_choices(n, k, u, into):
            if _extend(n, k, u, heads, into, indeg):
                mark = len(arcs)
                arcs.extend((u, w) for w in heads)
                yield from rec(u + 1)
                del arcs[mark:]
            _undo(u, heads, into, indeg)

    yield from rec(len(prefix))


# -- vertex extension ----------------------------------------------------------


EXTEND_STRATEGIES = ("first-admissible", "mirror-tail", "minimize-longest-path")


class NoAdmissibleHeads(ValueError):
    pass


def extend_with_vertex(g: OrientedGraph, x: int, y: int, k: int,
                       strategy: str = "first-admissible") -> tuple[OrientedGraph, tuple[int, ...]]:
    """Subdivide arc x->y with a new vertex z = n and give z k-1 further heads.

    ``first-admissible`` takes the smallest admissible ids, ``mirror-tail``
    copies x's other out-neighbours, and ``minimize-longest-path`` tries
    every head set and keeps the first one minimising the longest dipath.
    """
    if not g.has_arc(x, y):
        raise ValueError(f"{x}->{y} is not an arc")
    if strategy not in EXTEND_STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    z = g.n
    # z's only in-neighbour is x, so any head other than x and y is admissible
    admissible = [w for w in range(g.n) if w not in (x, y)]
    if strategy == "mirror-tail":
        admissible = [w for w in g.out_adj[x] if w != y]
    if len(admissible) < k - 1:
        raise NoAdmissibleHeads(f"need {k - 1} extra heads, only {len(admissible)} admissible")
    base = [a for a in g.arcs if a != (x, y)] + [(x, z), (z, y)]

    def build(extra: Sequence[int]) -> OrientedGraph:
        return OrientedGraph(g.n + 1, base + [(z, w) for w in extra])

    if strategy == "minimize-longest-path":
        best = None
        for extra in itertools.combinations(admissible, k - 1):
            h = build(extra)
            length = longest_dipath(h).length
            if best is None or length < best[0]:
                best = (length, h, extra)
        return best[1], tuple(best[2])
    extra = tuple(admissible[:k - 1])
    return build(extra), extra


# -- growth simulation -----------------------------------------------------------


@dataclass
class GrowthTrace:
    p_new: float
    k: int
    seed: int
    steps: int
    out_cap: int
    rows: list[tuple[int, int, int, int]] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "n", "arcs", "longest"])
        writer.writerows(self.rows)
        return buf.getvalue()


def grow_simulation(steps: int, p_new: float, k: int, seed: int = 0,
                    out_cap: int | None = None) -> GrowthTrace:
    """Grow an oriented graph from the rotational tournament on 2k+1 vertices.

    Each step picks a vertex with outdegree below ``out_cap`` (default 2k)
    uniformly at random and gives it one new out-arc.  With probability
    ``p_new`` the head is a fresh vertex, which in turn receives k out-arcs
    to random existing vertices so the minimum outdegree stays k; otherwise
    the head is a random existing vertex not yet adjacent to the tail.
    Steps with no admissible move leave the graph unchanged.
    """
    if not 0.0 <= p_new <= 1.0:
        raise ValueError("p_new must lie in [0, 1]")
    if k < 1:
        raise ValueError("k must be positive")
    cap = 2 * k if out_cap is None else out_cap
    rng = random.Random(seed)
    g = rotational_tournament(2 * k + 1)
    n, arcs = g.n, set(g.arcs)
    outdeg = [k] * n
    trace = GrowthTrace(p_new, k, seed, steps, cap)
    best = longest_dipath(g).vertices
    trace.rows.append((0, n, len(arcs), len(best) - 1))
    for step in range(1, steps + 1):
        tails = [u for u in range(n) if outdeg[u] < cap]
        changed = False
        if tails:
            u = rng.choice(tails)
            if rng.random() < p_new:
                z = n
                heads = rng.sample([w for w in range(n) if w != u], k)
                arcs.add((u, z))
                arcs.update((z, w) for w in heads)
                n += 1
                outdeg[u] += 1
                outdeg.append(k)
                changed = True
            else:
                free = [w for w in range(n) if w != u and (u, w) not in arcs and (w, u) not in arcs]
                if free:
                    w = rng.choice(free)
                    arcs.add((u, w))
                    outdeg[u] += 1
                    changed = True
        if changed:
            g = OrientedGraph(n, arcs)
            best = longest_dipath(g).vertices
        trace.rows.append((step, n, len(arcs), len(best) - 1))
    assert min_outdegree(g) >= k
    return trace

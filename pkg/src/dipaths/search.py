"""Conjecture verdicts, theorem checks and the pruned counterexample search.

Everything here reports through :class:`Verdict` or :class:`SearchReport`,
both of which serialise to deterministic JSON.  A pruned graph is never just
dropped: every prune rule must hand back a dipath of length at least 2k that
the caller can re-validate.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from collections import Counter
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .graph import (
    OrientedGraph,
    cut_vertices,
    is_dipath,
    is_strongly_connected,
    min_outdegree,
    minimum_vertex_cut,
    to_edgelist,
)
from .generators import enumerate_k_out_regular, enumeration_prefixes, random_k_out
from .paths import (
    covered_vertices,
    cut_vertex_long_path,
    find_dipath_at_least,
    geometric_order_bound,
    greedy_long_cycle,
    longest_dipath,
    maximum_dipaths,
    merge_two_cycles,
    paper_order_bound,
    starts_dipath_at_least,
)
from .reduce import (
    RewiringInfeasible,
    decrement_outdegree,
    eliminate_vertex,
    iter_rewirings,
    reduce_full,
    sink_strong_components,
)

SUBJECTS = ("conjecture1", "conjecture2", "conjecture3", "conjecture4",
            "theorem2", "theorem3", "theorem4", "theorem5", "theorem8")
PRUNE_RULES = ("not-strong", "cut-vertex", "connectivity<3", "two-cycle-filter")

# largest order searched exhaustively per k unless the caller raises it
EXHAUSTIVE_MAX_N = {1: 7, 2: 6, 3: 7}
# node budget of the fallback witness search used by the connectivity rule
FALLBACK_NODE_BUDGET = 20_000


class HypothesisViolation(ValueError):
    pass


class InfeasibleScale(ValueError):
    pass


@dataclass
class Verdict:
    subject: str
    holds: bool | None
    witness: tuple[int, ...] | None = None
    certificate: str | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "holds": self.holds,
            "witness": None if self.witness is None else list(self.witness),
            "certificate": self.certificate,
            "details": self.details,
        }


def _require_outdegree(g: OrientedGraph, k: int) -> None:
    if min_outdegree(g) < k:
        raise HypothesisViolation(f"minimum outdegree {min_outdegree(g)} is below k={k}")


# -- conjectures -----------------------------------------------------------------


def check_conjecture1(g: OrientedGraph, k: int, algo: str = "auto") -> Verdict:
    """Holds iff ``g`` has a dipath of length 2k."""
    _require_outdegree(g, k)
    res = longest_dipath(g, algo)
    details = {"longest": res.length, "target": 2 * k, "algorithm": res.algorithm}
    if res.length >= 2 * k:
        return Verdict("conjecture1", True, res.vertices, None, details)
    return Verdict("conjecture1", False, None, to_edgelist(g, k), details)


def check_conjecture2(g: OrientedGraph, k: int) -> Verdict:
    """Every vertex lies on a 2k-dipath and every non-cut vertex starts one."""
    _require_outdegree(g, k)
    target = 2 * k
    on = covered_vertices(g, target)
    cuts = cut_vertices(g)
    not_on = [v for v in range(g.n) if v not in on]
    not_start = [v for v in range(g.n)
                 if v not in cuts and not starts_dipath_at_least(g, v, target)]
    details = {
        "target": target,
        "cut_vertices": sorted(cuts),
        "not_on_long_path": not_on,
        "not_starting_long_path": not_start,
    }
    holds = not not_on and not not_start
    return Verdict("conjecture2", holds, None, None if holds else to_edgelist(g, k), details)


def test_conjecture3(g: OrientedGraph, k: int, limit_per_vertex: int | None = None) -> Verdict:
    """Look for a vertex whose deletion plus rewiring does not lengthen the longest dipath."""
    _require_outdegree(g, k)
    base = longest_dipath(g).length
    per_vertex = {}
    witness = None
    for v in range(g.n):
        try:
            best = None
            tried = 0
            for h, heads in itertools.islice(iter_rewirings(g, v, k), limit_per_vertex):
                tried += 1
                length = longest_dipath(h).length
                if best is None or length < best[0]:
                    best = (length, h, heads)
        except RewiringInfeasible as exc:
            per_vertex[str(v)] = {"infeasible": True, "blocked_in_neighbour": exc.u}
            continue
        if best is None:
            per_vertex[str(v)] = {"infeasible": True, "blocked_in_neighbour": None}
            continue
        per_vertex[str(v)] = {"infeasible": False, "rewirings": tried, "best_longest": best[0]}
        if best[0] <= base and witness is None:
            witness = (v, best)
    details = {"longest": base, "vertices": per_vertex}
    if witness is None:
        if all(d["infeasible"] for d in per_vertex.values()):
            details["reason"] = "all-infeasible"
        return Verdict("conjecture3", False, None, None, details)
    v, (length, h, heads) = witness
    details["vertex"] = v
    details["new_heads"] = {str(u): w for u, w in sorted(heads.items())}
    return Verdict("conjecture3", True, None, to_edgelist(h, k), details)


# keep pytest from collecting these when a test module imports them
test_conjecture3.__test__ = False


def _decrease(g: OrientedGraph, base: int, choice: Sequence[int]) -> int:
    return base - longest_dipath(decrement_outdegree(g, choice)).length


def _greedy_choice(g: OrientedGraph) -> list[int]:
    """Repeatedly drop the out-arc (of a still-unassigned vertex) used by most maximum dipaths."""
    h = g
    choice: dict[int, int] = {}
    while len(choice) < g.n:
        uses: Counter = Counter()
        for p in maximum_dipaths(h):
            uses.update(a for a in zip(p, p[1:]) if a[0] not in choice)
        if not uses:
            break
        (u, w), _ = min(uses.items(), key=lambda kv: (-kv[1], kv[0]))
        choice[u] = w
        h = OrientedGraph(h.n, [a for a in h.arcs if a != (u, w)])
    return [choice.get(u, g.out_adj[u][0]) for u in range(g.n)]


def test_conjecture4(g: OrientedGraph, k: int, budget: int = 10_000, seed: int = 0) -> Verdict:
    """Search for one deleted out-arc per vertex that shortens the longest dipath by 2.

    ``holds`` is True once such a choice is found, False only after the whole
    choice space was enumerated, and None when the budget ran out first.
    """
    if k < 1 or min_outdegree(g) != k:
        raise HypothesisViolation(f"need minimum outdegree exactly k >= 1 (k={k}, got {min_outdegree(g)})")
    base = longest_dipath(g).length
    total = math.prod(len(a) for a in g.out_adj)
    best_dec, best_choice, evaluated = None, None, 0

    def consider(choice: Sequence[int]) -> bool:
        nonlocal best_dec, best_choice, evaluated
        evaluated += 1
        dec = _decrease(g, base, choice)
        if best_dec is None or dec > best_dec:
            best_dec, best_choice = dec, list(choice)
        return dec >= 2

    exhaustive = total <= budget
    found = False
    if exhaustive:
        for choice in itertools.product(*g.out_adj):
            found = consider(choice) or found
    else:
        if g.n <= 12:
            found = consider(_greedy_choice(g))
        rng = random.Random(seed)
        while not found and evaluated < budget:
            found = consider([rng.choice(a) for a in g.out_adj])
    details = {
        "longest": base,
        "choices": total,
        "evaluated": evaluated,
        "exhaustive": exhaustive,
        "best_decrease": best_dec,
        "best_choice": best_choice,
    }
    holds = True if found else (False if exhaustive else None)
    return Verdict("conjecture4", holds, None, None, details)


test_conjecture4.__test__ = False


# -- theorem checks ----------------------------------------------------------------


def _theorem_instance(subject: str, g: OrientedGraph, k: int | None) -> tuple[list[str], bool, dict]:
    """Returns (hypothesis problems, conclusion holds, info) for one graph."""
    problems: list[str] = []
    kk = min_outdegree(g) if k is None else k
    if subject == "theorem2":
        if min_outdegree(g) < 1:
            problems.append("minimum outdegree below 1")
        on = covered_vertices(g, 2)
        return problems, len(on) == g.n, {"uncovered": sorted(set(range(g.n)) - on)}
    if subject == "theorem3":
        if min_outdegree(g) < 2:
            problems.append("minimum outdegree below 2")
        if not is_strongly_connected(g):
            problems.append("not strongly connected")
        on = covered_vertices(g, 4)
        return problems, len(on) == g.n, {"uncovered": sorted(set(range(g.n)) - on)}
    if subject == "theorem4":
        if min_outdegree(g) < 3:
            problems.append("minimum outdegree below 3")
        res = longest_dipath(g)
        return problems, res.length >= 6, {"longest": res.length, "witness": list(res.vertices)}
    if subject == "theorem5":
        cuts = sorted(cut_vertices(g))
        if kk < 2 or min_outdegree(g) < kk:
            problems.append(f"minimum outdegree below k={kk} or k < 2")
        if not is_strongly_connected(g):
            problems.append("not strongly connected")
        if not cuts:
            problems.append("no cut vertex")
        if problems:
            return problems, longest_dipath(g).length >= 2 * kk + 2, {}
        built = cut_vertex_long_path(g, cuts[0], kk)
        exact = longest_dipath(g).length
        ok = built.length >= 2 * kk + 2 and is_dipath(g, built.vertices) and exact >= 2 * kk + 2
        return problems, ok, {"constructed": built.length, "longest": exact,
                              "witness": list(built.vertices)}
    if subject == "theorem8":
        on = covered_vertices(g, 2 * kk - 1)
        return problems, len(on) == g.n, {"unsaturated": sorted(set(range(g.n)) - on)}
    raise ValueError(f"{subject!r} is not a theorem subject")


def verify_theorem(subject: str, graphs: OrientedGraph | Iterable[OrientedGraph],
                   k: int | None = None, strict: bool = True) -> Verdict:
    """Evaluate a proved statement on each instance; any failure points at a bug here.

    With ``strict`` an instance outside the statement's hypotheses raises
    :class:`HypothesisViolation`; otherwise it is evaluated and listed under
    ``hypothesis_skipped``.  ``theorem8`` is evaluated as a saturation check:
    every vertex must lie on a dipath of length at least 2k-1.
    """
    if isinstance(graphs, OrientedGraph):
        graphs = [graphs]
    failures, skipped, infos = [], [], []
    count = 0
    for i, g in enumerate(graphs):
        count += 1
        problems, ok, info = _theorem_instance(subject, g, k)
        if problems:
            if strict:
                raise HypothesisViolation(f"instance {i}: " + "; ".join(problems))
            skipped.append({"instance": i, "problems": problems})
        if not ok:
            failures.append(i)
        infos.append(info)
    details = {"instances": count, "failures": failures, "hypothesis_skipped": skipped}
    witness = None
    if count == 1:
        details.update(infos[0])
        if infos[0].get("witness"):
            witness = tuple(infos[0]["witness"])
    return Verdict(subject, not failures, witness, None, details)


# -- pruning -----------------------------------------------------------------------


@dataclass(frozen=True)
class Rejection:
    reason: str
    certificate: tuple[int, ...]
    details: dict = field(default_factory=dict, compare=False)


def _not_strong_certificate(g: OrientedGraph, k: int) -> tuple[int, ...] | None:
    # a dipath inside a sink component is a dipath of g
    for comp in sorted(sink_strong_components(g), key=lambda c: (c.graph.n, c.vertices)):
        local = find_dipath_at_least(comp.graph, 2 * k)
        if local is not None:
            return tuple(comp.vertices[i] for i in local)
    return None


def _two_cut_certificate(g: OrientedGraph, k: int, cut: Iterable[int]) -> tuple[tuple[int, ...] | None, str]:
    """Delete one vertex of a 2-cut so the other becomes a cut vertex with outdegree >= k-1."""
    cut = sorted(cut)
    if k - 1 >= 2:
        for u, w in (cut, cut[::-1]):
            h = eliminate_vertex(g, u)
            w2 = w if w < u else w - 1
            if (min_outdegree(h) >= k - 1 and is_strongly_connected(h)
                    and w2 in cut_vertices(h)):
                local = cut_vertex_long_path(h, w2, k - 1).vertices
                return tuple(x if x < u else x + 1 for x in local), "cut-vertex-after-deletion"
    path = find_dipath_at_least(g, 2 * k, node_budget=FALLBACK_NODE_BUDGET)
    return path, "bounded-search"


def long_cycles(g: OrientedGraph, k: int) -> list[tuple[int, ...]]:
    """Distinct greedy cycles (length >= k+2) started from every vertex."""
    seen, out = set(), []
    for s in range(g.n):
        c = greedy_long_cycle(g, k, s)
        key = frozenset(c)
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def prune_filters(g: OrientedGraph, k: int) -> Rejection | None:
    """Cheap sufficient conditions for a dipath of length 2k.

    Rules run in the order of :data:`PRUNE_RULES`; the first one that
    produces a certificate wins.  None means the graph must be evaluated.
    """
    if k < 1:
        return Rejection("not-strong", (0,)) if not is_strongly_connected(g) else None
    if not is_strongly_connected(g):
        cert = _not_strong_certificate(g, k)
        if cert is not None:
            return Rejection("not-strong", cert)
        return None
    if k >= 2:
        cuts = sorted(cut_vertices(g))
        if cuts:
            res = cut_vertex_long_path(g, cuts[0], k)
            return Rejection("cut-vertex", res.vertices, {"cut_vertex": cuts[0]})
        sep = minimum_vertex_cut(g)
        if sep is not None and len(sep) == 2:
            cert, how = _two_cut_certificate(g, k, sep)
            if cert is not None:
                return Rejection("connectivity<3", cert, {"cut": sorted(sep), "construction": how})
    cycles = long_cycles(g, k)
    for c1, c2 in itertools.combinations(cycles, 2):
        shared = len(set(c1) & set(c2))
        if shared <= 1:
            res = merge_two_cycles(g, c1, c2, k)
            return Rejection("two-cycle-filter", res.vertices,
                             {"shared": shared, "cycles": [list(c1), list(c2)]})
    return None


# -- counterexample search -----------------------------------------------------------


@dataclass
class SearchReport:
    k: int
    n_min: int
    n_max: int
    mode: str
    seed: int = 0
    budget: int = 0
    bound: str = "paper"
    samples: int = 0
    examined: int = 0
    evaluated: int = 0
    pruned: dict = field(default_factory=lambda: {r: 0 for r in PRUNE_RULES})
    counterexamples: list = field(default_factory=list)
    near_miss_count: int = 0
    near_misses: list = field(default_factory=list)
    near_miss_limit: int = 100
    elapsed_s: float = 0.0

    def merge(self, other: SearchReport) -> SearchReport:
        out = SearchReport(self.k, self.n_min, self.n_max, self.mode, self.seed, self.budget,
                           self.bound, near_miss_limit=self.near_miss_limit)
        out.samples = self.samples + other.samples
        out.examined = self.examined + other.examined
        out.evaluated = self.evaluated + other.evaluated
        out.pruned = {r: self.pruned[r] + other.pruned[r] for r in PRUNE_RULES}
        out.counterexamples = sorted(self.counterexamples + other.counterexamples, key=_record_key)
        out.near_miss_count = self.near_miss_count + other.near_miss_count
        out.near_misses = sorted(self.near_misses + other.near_misses, key=_record_key)[:self.near_miss_limit]
        out.elapsed_s = max(self.elapsed_s, other.elapsed_s)
        return out

    @property
    def pruned_total(self) -> int:
        return sum(self.pruned.values())

    def to_json(self) -> dict:
        """Deterministic payload; elapsed time is deliberately left out."""
        return {
            "k": self.k,
            "orders": [self.n_min, self.n_max],
            "mode": self.mode,
            "seed": self.seed,
            "budget": self.budget,
            "bound": self.bound,
            "samples": self.samples,
            "examined": self.examined,
            "evaluated": self.evaluated,
            "pruned": dict(self.pruned),
            "counterexample_count": len(self.counterexamples),
            "counterexamples": self.counterexamples,
            "near_miss_count": self.near_miss_count,
            "near_misses": self.near_misses,
        }


def _record_key(rec: dict) -> tuple:
    return rec["n"], rec["edgelist"]


def order_cap(k: int, bound: str = "paper") -> int:
    """Largest order a counterexample could have under the chosen reachability bound."""
    if bound == "paper":
        return paper_order_bound(k) - 1
    if bound == "geometric":
        return geometric_order_bound(k)
    raise ValueError(f"unknown bound {bound!r}")


def _examine(report: SearchReport, g: OrientedGraph, k: int) -> None:
    report.examined += 1
    rej = prune_filters(g, k)
    if rej is not None:
        report.pruned[rej.reason] += 1
        return
    report.evaluated += 1
    res = longest_dipath(g)
    if res.length < 2 * k:
        report.counterexamples.append({"n": g.n, "longest": res.length, "edgelist": to_edgelist(g, k)})
    elif res.length == 2 * k:
        report.near_miss_count += 1
        rec = {"n": g.n, "longest": res.length, "edgelist": to_edgelist(g, k),
               "saturated": len(covered_vertices(g, 2 * k - 1)) == g.n}
        report.near_misses.append(rec)
        if len(report.near_misses) > 2 * report.near_miss_limit:
            report.near_misses = sorted(report.near_misses, key=_record_key)[:report.near_miss_limit]


@dataclass(frozen=True)
class _Task:
    k: int
    n_min: int
    n_max: int
    mode: str
    budget: int
    seed: int
    bound: str
    shard: int
    shards: int
    near_miss_limit: int


def _exhaustive_units(k: int, n_min: int, n_max: int) -> list[tuple[int, tuple]]:
    return [(n, prefix) for n in range(n_min, n_max + 1)
            for prefix in enumeration_prefixes(n, k, 2)]


def _run_shard(task: _Task) -> SearchReport:
    report = SearchReport(task.k, task.n_min, task.n_max, task.mode, task.seed, task.budget,
                          task.bound, near_miss_limit=task.near_miss_limit)
    k = task.k
    if task.mode == "exhaustive":
        units = _exhaustive_units(k, task.n_min, task.n_max)
        for n, prefix in units[task.shard::task.shards]:
            for g in enumerate_k_out_regular(n, k, prefix=prefix):
                _examine(report, g, k)
    else:
        for i in range(task.shard, task.budget, task.shards):
            rng = random.Random(f"{task.seed}:{i}")
            n = rng.randint(task.n_min, task.n_max)
            g = random_k_out(n, k, rng)
            report.samples += 1
            for comp in reduce_full(g, k).components:
                _examine(report, comp.graph, k)
    report.near_misses = sorted(report.near_misses, key=_record_key)[:report.near_miss_limit]
    return report


def search_counterexamples(k: int, n_min: int | None = None, n_max: int | None = None,
                           mode: str = "exhaustive", budget: int = 1000, shards: int = 1,
                           seed: int = 0, bound: str = "paper", workers: int = 1,
                           max_n: dict[int, int] | None = None,
                           near_miss_limit: int = 100) -> SearchReport:
    """Search orders ``n_min..n_max`` for k-out-regular counterexamples.

    ``exhaustive`` enumerates every labelled k-out-regular oriented graph;
    ``random`` draws ``budget`` seeded random k-out graphs and examines the
    components left by :func:`reduce_full`.  Work is cut into ``shards``
    disjoint pieces (run on ``workers`` processes); totals do not depend on
    either number.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown mode {mode!r}")
    if shards < 1:
        raise ValueError("shards must be positive")
    n_min = 2 * k + 1 if n_min is None else n_min
    n_max = order_cap(k, bound) if n_max is None else n_max
    if n_min < 2 * k + 1:
        raise ValueError(f"n_min must be at least 2k+1={2 * k + 1}")
    if mode == "random" and n_max < n_min:
        raise ValueError(f"empty order range [{n_min}, {n_max}] for random sampling")
    if mode == "exhaustive":
        limits = EXHAUSTIVE_MAX_N if max_n is None else max_n
        if k not in limits or n_max > limits[k]:
            raise InfeasibleScale(
                f"exhaustive search for k={k} up to n={n_max} exceeds the configured limit "
                f"({limits.get(k, 'none')})")
    t0 = time.perf_counter()
    tasks = [_Task(k, n_min, n_max, mode, budget, seed, bound, s, shards, near_miss_limit)
             for s in range(shards)]
    if workers > 1 and shards > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_shard, tasks))
    else:
        parts = [_run_shard(t) for t in tasks]
    report = parts[0]
    for part in parts[1:]:
        report = report.merge(part)
    report.elapsed_s = time.perf_counter() - t0
    return report

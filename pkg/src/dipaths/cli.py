"""Command-line entry point.

Exit status: 0 on success, 1 when a search finds a counterexample or a
verified statement fails, 2 on bad input or any other error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .generators import MODELS, GenSpec, generate, grow_simulation
from .graph import GraphError, load_graph, min_outdegree, to_edgelist
from .paths import (
    ALGORITHMS,
    ResourceLimit,
    longest_dipath,
    longest_dipath_from,
    longest_dipath_through,
)
from .reduce import reduce_full
from .search import (
    SUBJECTS,
    InfeasibleScale,
    SearchReport,
    Verdict,
    check_conjecture1,
    check_conjecture2,
    search_counterexamples,
    test_conjecture3,
    test_conjecture4,
    verify_theorem,
)

DEFAULT_SEED = 20160811


def _dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def report_render(report: SearchReport | Verdict, files: list[str] | None = None) -> str:
    """Short line-oriented summary; the JSON output stays authoritative."""
    lines = []
    if isinstance(report, SearchReport):
        lines.append(f"examined {report.examined}, pruned {report.pruned_total}, "
                     f"counterexamples {len(report.counterexamples)}")
        lines.append(f"k={report.k} orders {report.n_min}..{report.n_max} mode={report.mode} "
                     f"evaluated {report.evaluated}, near-misses {report.near_miss_count}")
        lines.extend(f"pruned[{rule}] {count}" for rule, count in report.pruned.items() if count)
    else:
        if report.holds is None:
            lines.append(f"{report.subject}: unknown")
        elif report.holds:
            line = f"{report.subject}: holds"
            if report.witness is not None:
                line += f" (witness length {len(report.witness) - 1})"
            lines.append(line)
        else:
            lines.append(f"{report.subject}: fails")
    lines.extend(f"wrote {f}" for f in files or ())
    return "\n".join(lines) + "\n"


# -- subcommands -------------------------------------------------------------------


def _cmd_gen(args) -> int:
    n = args.n if args.n is not None else 7
    spec = GenSpec(args.model, n, args.k if args.k is not None else 1, args.seed)
    g = generate(spec)
    if args.model in ("random-k-out", "cut-gadget"):
        declared = spec.k
    else:
        declared = min_outdegree(g)
    _emit(to_edgelist(g, declared), args.out)
    return 0


def _load(args):
    g, declared = load_graph(args.input)
    k = declared if args.k is None else args.k
    return g, k


def _cmd_reduce(args) -> int:
    g, k = _load(args)
    report = reduce_full(g, k)
    if args.out is None:
        _emit(_dumps(report.to_json()), None)
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = [out / "report.json"]
    files[0].write_text(_dumps(report.to_json()), encoding="utf-8")
    for i, comp in enumerate(report.components):
        path = out / f"component_{i}.txt"
        path.write_text(to_edgelist(comp.graph, k), encoding="utf-8")
        files.append(path)
    sys.stdout.write("".join(f"wrote {f}\n" for f in files))
    return 0


def _cmd_longest(args) -> int:
    g, _ = _load(args)
    if args.start is not None:
        res = longest_dipath_from(g, args.start, args.algo)
    elif args.through is not None:
        res = longest_dipath_through(g, args.through, args.algo)
    else:
        res = longest_dipath(g, args.algo)
    _emit(_dumps(res.to_json()), args.out)
    return 0


def _cmd_verify(args) -> int:
    g, k = _load(args)
    subject = args.subject
    if subject == "conjecture1":
        verdict = check_conjecture1(g, k, args.algo)
    elif subject == "conjecture2":
        verdict = check_conjecture2(g, k)
    elif subject == "conjecture3":
        verdict = test_conjecture3(g, k)
    elif subject == "conjecture4":
        verdict = test_conjecture4(g, k, budget=args.budget, seed=args.seed)
    else:
        verdict = verify_theorem(subject, g, k, strict=True)
    files = []
    if args.out is None:
        _emit(_dumps(verdict.to_json()), None)
    else:
        _emit(_dumps(verdict.to_json()), args.out)
        files.append(args.out)
        if verdict.holds is False and verdict.certificate:
            cert = Path(args.out).with_suffix(".certificate.txt")
            cert.write_text(verdict.certificate, encoding="utf-8")
            files.append(str(cert))
        sys.stdout.write(report_render(verdict, files))
    return 1 if verdict.holds is False else 0


def _cmd_search(args) -> int:
    report = search_counterexamples(
        args.k, args.n_min, args.n_max, mode=args.mode, budget=args.budget,
        shards=args.shards, seed=args.seed, bound=args.bound, workers=args.workers,
    )
    payload = _dumps(report.to_json())
    if args.out is None:
        _emit(payload, None)
    else:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(payload, encoding="utf-8")
        meta = {"elapsed_s": round(report.elapsed_s, 3), "shards": args.shards, "workers": args.workers}
        (out / "meta.json").write_text(_dumps(meta), encoding="utf-8")
        files = [str(out / "report.json")]
        for kind, records in (("counterexamples", report.counterexamples),
                              ("near_misses", report.near_misses)):
            if not records:
                continue
            (out / kind).mkdir(exist_ok=True)
            seen: dict[int, int] = {}
            for rec in records:
                idx = seen[rec["n"]] = seen.get(rec["n"], -1) + 1
                path = out / kind / f"k{report.k}_n{rec['n']}_{idx}.txt"
                path.write_text(rec["edgelist"], encoding="utf-8")
                if kind == "counterexamples":
                    files.append(str(path))
        sys.stdout.write(report_render(report, files))
    return 1 if report.counterexamples else 0


def _cmd_grow(args) -> int:
    trace = grow_simulation(args.steps, args.p_new, args.k if args.k is not None else 1,
                            args.seed, out_cap=args.out_cap)
    _emit(trace.to_csv(), args.out)
    return 0


# -- argument parsing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dipaths", description="Long dipaths in oriented graphs of given minimum outdegree.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=False):
        if needs_input:
            p.add_argument("--input", required=True, help="edge-list file")
        p.add_argument("--out", help="output path (stdout if omitted)")
        p.add_argument("--k", type=int, help="minimum outdegree (default: declared in the file)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("gen", help="generate a graph")
    common(p)
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("reduce", help="reduce to k-out-regular sink strong components")
    common(p, True)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("longest", help="exact longest dipath")
    common(p, True)
    p.add_argument("--algo", choices=ALGORITHMS, default="auto")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--from", dest="start", type=int, help="only dipaths starting here")
    group.add_argument("--through", type=int, help="only dipaths containing this vertex")
    p.set_defaults(func=_cmd_longest)

    p = sub.add_parser("verify", help="check a conjecture or theorem on one graph")
    common(p, True)
    p.add_argument("--subject", choices=SUBJECTS, default="conjecture1")
    p.add_argument("--algo", choices=ALGORITHMS, default="auto")
    p.add_argument("--budget", type=int, default=10_000, help="choice budget for conjecture4")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="pruned counterexample search")
    common(p)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--budget", type=int, default=1000, help="samples in random mode")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--bound", choices=("paper", "geometric"), default="paper")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("grow", help="probabilistic growth simulation (CSV)")
    common(p)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--p-new", type=float, default=0.5)
    p.add_argument("--out-cap", type=int, help="outdegree cap for growing vertices (default 2k)")
    p.set_defaults(func=_cmd_grow)
    return parser


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "search" and args.k is None:
        parser.error("search requires --k")
    try:
        return args.func(args)
    except (GraphError, InfeasibleScale, ResourceLimit, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()

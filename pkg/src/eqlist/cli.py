"""Command-line front end.

Graphs are read from a file in the edge-list format (``n m`` header, then
``u v`` lines) or its JSON form; ``-`` reads standard input.  Every
subcommand prints a versioned JSON report.

Exit codes: 0 all checks pass, 1 a mathematical violation was found,
2 usage / budget errors.  The worker count for the parallel kernels is
taken from ``--workers`` or the ``EQLIST_WORKERS`` environment variable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .coloring import CapExceeded, ColoringError, is_choosable, solve
from .discharge import audit
from .graph import Graph, GraphError, load_graph
from .potential import check_sparseness, max_potential, sigma
from .report import report_emit
from .safety import bug_safety, check_witness, replay_witness
from .sharpness import generate, verify_sharpness
from .structure import inventory, maximal_bug
from .theorem import verify_theorem

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return args.workers
    try:
        return max(1, int(os.environ.get("EQLIST_WORKERS", "1")))
    except ValueError as exc:
        raise UsageError("EQLIST_WORKERS must be an integer") from exc


def _read_graph(path: str) -> Graph:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return load_graph(text)


def _read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _read_lists(path: str, G: Graph):
    doc = _read_json(path)
    try:
        return [frozenset(int(c) for c in doc[str(v)]) for v in range(G.n)]
    except KeyError as exc:
        raise UsageError(f"list file has no entry for vertex {exc}") from exc


def _emit(args, kind: str, body, **meta) -> None:
    sys.stdout.write(report_emit(kind, body, getattr(args, "output", None), **meta))


# ---------------------------------------------------------------------------
# subcommands


def cmd_potential(args) -> int:
    G = _read_graph(args.graph)
    res = max_potential(G, args.k, args.method)
    body = res.to_json()
    body["sigma"] = sigma(G, args.k)
    body["threshold"] = 2 - body["sigma"]
    _emit(args, "potential", body, k=args.k)
    return EXIT_OK


def cmd_sparse(args) -> int:
    G = _read_graph(args.graph)
    res = check_sparseness(G, args.num, args.den, Fraction(args.add))
    _emit(args, "sparse-check", {"ok": res.ok, "witness": res.witness, "excess": res.excess},
          num=args.num, den=args.den, add=Fraction(args.add))
    return EXIT_OK


def cmd_structure(args) -> int:
    G = _read_graph(args.graph)
    _emit(args, "structure", inventory(G, args.k), k=args.k)
    return EXIT_OK


def cmd_solve(args) -> int:
    G = _read_graph(args.graph)
    lists = _read_lists(args.lists, G) if args.lists else None
    f = solve(G, args.k, lists, args.mode, cap=args.cap)
    body = {"found": f is not None,
            "coloring": None if f is None else {str(v): c for v, c in sorted(f.items())}}
    _emit(args, "solve", body, k=args.k, mode=args.mode)
    return EXIT_OK


def cmd_choosable(args) -> int:
    G = _read_graph(args.graph)
    v = is_choosable(G, args.k, args.mode, budget=args.budget, method=args.method,
                     samples=args.samples, seed=args.seed, workers=_workers(args), cap=args.cap)
    hyp = max_potential(G, args.k).value <= 2 - sigma(G, args.k)
    body = v.to_json()
    body["sparse_hypothesis"] = hyp
    _emit(args, "choosable", body, k=args.k, seed=args.seed)
    if v.status == "budget_exceeded":
        return EXIT_USAGE
    if v.status == "no" and hyp and args.mode == "SE":
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_safety(args) -> int:
    G = _read_graph(args.graph)
    if args.bug:
        B = (args.root, [int(x) for x in args.bug.split(",")])
    else:
        B = maximal_bug(G, args.root)
    verdict = bug_safety(G, B, args.k)
    body = verdict.to_json()
    code = EXIT_OK
    if args.verify and verdict.status == "safe":
        checked = check_witness(G, verdict, args.k)
        replay = replay_witness(G, verdict, args.k, None, limit=args.limit)
        body["verify"] = {"structure_ok": checked, **replay}
        if not checked or replay["failures"]:
            code = EXIT_VIOLATION
    _emit(args, "safety", body, k=args.k, root=args.root)
    return code


def cmd_discharge(args) -> int:
    G = _read_graph(args.graph)
    Y = []
    if args.Y:
        doc = _read_json(args.Y)
        Y = doc["Y"] if isinstance(doc, dict) else doc
    rep = audit(G, args.k, Y)
    _emit(args, "discharge", rep, k=args.k)
    if not (rep.conserved and rep.identity_holds) or rep.failures:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_sharpness(args) -> int:
    G = generate(args.k, args.n, args.l)
    sys.stdout.write(G.to_edge_list())
    if not args.verify:
        return EXIT_OK
    rep = verify_sharpness(G, args.k, n=args.n, l=args.l)
    _emit(args, "gen-sharpness", rep, k=args.k)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_theorem(args) -> int:
    rep = verify_theorem(args.k, args.nmin, args.nmax, args.sampler, seed=args.seed,
                         count=args.count, workers=_workers(args), samples=args.samples,
                         timing=args.timing)
    _emit(args, "verify-theorem", rep, sampler=args.sampler)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eqlist", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def graph_cmd(name, help_, func, k_choices=(3, 4), k_required=True):
        p = sub.add_parser(name, help=help_)
        p.add_argument("graph", help="edge-list or JSON graph file ('-' for stdin)")
        p.add_argument("--k", type=int, choices=k_choices, required=k_required,
                       default=None if k_required else 3)
        p.add_argument("--output", help="also write the JSON report here")
        p.set_defaults(func=func)
        return p

    p = graph_cmd("potential", "maximum potential with witness and extreme set", cmd_potential)
    p.add_argument("--method", choices=("flow", "brute"), default="flow")

    p = sub.add_parser("sparse-check", help="(num/den, add)-sparseness check")
    p.add_argument("graph")
    p.add_argument("--num", type=int, required=True)
    p.add_argument("--den", type=_positive, required=True)
    p.add_argument("--add", default="0", help="additive constant (integer or fraction a/b)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sparse)

    graph_cmd("structure", "threads, bugs and fork roots", cmd_structure, k_required=False)

    p = graph_cmd("solve", "exact colouring in a given mode", cmd_solve, k_choices=None)
    p.add_argument("--mode", choices=("SE", "equitable_list", "equitable_k"), default="SE")
    p.add_argument("--lists", help="JSON file {vertex: [colours]}")
    p.add_argument("--cap", type=_positive, default=32)

    p = graph_cmd("choosable", "SE / equitable k-choosability", cmd_choosable, k_choices=None)
    p.add_argument("--mode", choices=("SE", "equitable"), default="SE")
    p.add_argument("--method", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--budget", type=_positive)
    p.add_argument("--samples", type=_positive, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=_positive, default=10)
    p.add_argument("--workers", type=_positive)

    p = graph_cmd("safety", "bug-safety verdict with a replayable witness", cmd_safety)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--bug", help="comma-separated bug vertices (default: the maximal bug)")
    p.add_argument("--verify", action="store_true",
                   help="re-check the witness and replay it on exact SE colourings")
    p.add_argument("--limit", type=_positive, default=64)

    p = graph_cmd("discharge", "discharging ledger and audit", cmd_discharge)
    p.add_argument("--Y", help="JSON file with a vertex list (or {\"Y\": [...]})")

    p = sub.add_parser("gen-sharpness", help="emit a sharpness-family graph")
    p.add_argument("--k", type=int, choices=(3, 4), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser("verify-theorem", help="check sparse connected graphs for SE choosability")
    p.add_argument("--k", type=int, choices=(3, 4), required=True)
    p.add_argument("--nmin", type=_positive, default=1)
    p.add_argument("--nmax", type=_positive, default=6)
    p.add_argument("--sampler", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=_positive, default=200)
    p.add_argument("--samples", type=_positive, default=100)
    p.add_argument("--workers", type=_positive)
    p.add_argument("--timing", action="store_true", help="include runtimes (not reproducible)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_theorem)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphError, CapExceeded, ColoringError, ValueError, OSError) as exc:
        print(f"eqlist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

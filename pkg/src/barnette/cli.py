"""Command-line interface: ``barnette <subcommand> ...``.

Exit status is 0 on success, 1 when the answer is negative or a domain
check fails, 2 for usage errors and unreadable input.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from multiprocessing import Pool
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .catalog import CatalogError, default_catalog_dir, instantiate_base_graph, load_catalog, validate_catalog
from .census import exhaustive_family_census
from .constructor import ConstructionError, construct_hamiltonian_set
from .dualize import DualizationError, check_barnette_class, g_face_of, tree_to_dual_cycle
from .family import bfs_levels
from .oracle import SearchConstraint, enumerate_hamiltonian_sets
from .planar_core import EmbeddingError, format_triangulation, parse_triangulation
from .rewrite import RewriteError, TraceError, enumerate_family, parse_trace, replay
from .verifier import FLAVORS, verify_hamiltonian_set

log = logging.getLogger("barnette")


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_graph(spec: str, catalog_dir: Optional[str] = None):
    """A graph file, ``-`` for stdin, or ``catalog:NAME[:N]`` for a catalog base graph."""
    if spec.startswith("catalog:"):
        parts = spec.split(":")[1:]
        try:
            cat = load_catalog([catalog_dir or default_catalog_dir()])
            param = int(parts[1]) if len(parts) > 1 else None
            return instantiate_base_graph(cat, parts[0], param).graph
        except (CatalogError, KeyError, ValueError) as exc:
            raise UsageError(f"no catalog graph {spec}: {exc}") from None
    try:
        return parse_triangulation(_read_text(spec))
    except (EmbeddingError, ValueError) as exc:
        raise UsageError(f"{spec}: {exc}") from None


def parse_set(spec: str) -> frozenset:
    """Vertex ids separated by spaces or commas, or a file holding a ``set=`` line."""
    if os.path.exists(spec):
        for line in _read_text(spec).splitlines():
            if line.startswith("set="):
                spec = line[4:]
                break
        else:
            raise UsageError(f"{spec}: no set= line")
    try:
        return frozenset(int(x) for x in spec.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"bad vertex set {spec!r}") from None


def _emit(lines: Sequence[str], out=None) -> None:
    (out or sys.stdout).write("\n".join(lines) + "\n")


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    try:
        cat = load_catalog([args.dir or default_catalog_dir()])
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rep = validate_catalog(cat)
    lines = rep.lines()
    _emit(lines if args.verbose else [ln for ln in lines if not ln.startswith("pass ")])
    return 0 if rep.ok else 1


def _write_graphs(graphs, out_dir: Optional[str], traces=None) -> None:
    lines = []
    for code in sorted(graphs):
        G = graphs[code]
        row = f"{code.hex()} vertices={len(G)} height={bfs_levels(G).height}"
        if traces is not None:
            row += " trace=" + "; ".join(traces[code].serialize().strip().splitlines())
        lines.append(row)
        if out_dir:
            Path(out_dir, f"{code.hex()}.tri").write_text(format_triangulation(G))
    lines.append(f"count={len(graphs)}")
    _emit(lines)


def cmd_enumerate(args) -> int:
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    res = enumerate_family(args.max_vertices, args.height, args.jobs)
    _write_graphs(res.graphs, args.out, res.traces if args.traces else None)
    return 0


def cmd_census(args) -> int:
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    graphs = exhaustive_family_census(args.max_vertices, args.jobs)
    if args.height is not None:
        graphs = {c: G for c, G in graphs.items() if bfs_levels(G).height == args.height}
    _write_graphs(graphs, args.out)
    return 0


def _construct_one(job):
    spec, flavor, trace, catalog_dir = job
    try:
        G = load_graph(spec, catalog_dir)
        cat = load_catalog([catalog_dir]) if catalog_dir else None
        res = construct_hamiltonian_set(G, flavor, cat, with_trace=trace)
    except UsageError as exc:
        return 2, [], str(exc)
    except ConstructionError as exc:
        tag = " (certified)" if exc.certified else ""
        return 1, [f"error={exc.kind}"], f"{exc}{tag}"
    except RewriteError as exc:
        return 1, ["error=decomposition"], str(exc)
    if res.exception:
        return 1, res.lines(), f"exceptional graph {res.exception}: no {flavor} hamiltonian set"
    return 0, res.lines(), ""


def cmd_construct(args) -> int:
    jobs = [(g, args.flavor, args.trace, args.catalog) for g in args.graphs]
    if args.jobs > 1 and len(jobs) > 1:
        with Pool(args.jobs) as pool:
            results = pool.map(_construct_one, jobs)
    else:
        results = [_construct_one(j) for j in jobs]
    worst = 0
    for (spec, *_), (code, lines, err) in zip(jobs, results):
        if len(jobs) > 1:
            print(f"graph={spec}")
        if lines:
            _emit(lines)
        if err:
            print(f"{spec}: {err}", file=sys.stderr)
        worst = max(worst, code)
    return worst


def cmd_verify(args) -> int:
    G = load_graph(args.graph)
    U = parse_set(args.set)
    unknown = sorted(U - set(G.vertices))
    if unknown:
        raise UsageError(f"vertices not in the graph: {unknown}")
    rep = verify_hamiltonian_set(G, U)
    _emit(rep.lines())
    return 0 if rep.holds(args.flavor) else 1


def cmd_oracle(args) -> int:
    G = load_graph(args.graph)
    limit = 0 if args.all else 1
    res = enumerate_hamiltonian_sets(G, SearchConstraint(args.flavor, limit, args.budget))
    _emit(res.lines())
    if res.sets:
        return 0
    return 1


def cmd_dualize(args) -> int:
    G = load_graph(args.graph)
    U = parse_set(args.set)
    try:
        w = tree_to_dual_cycle(G, U)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DualizationError as exc:
        print(f"error: invariant failed: {exc} witness={exc.witness}", file=sys.stderr)
        return 1
    gf = g_face_of(G)
    _emit(w.lines() + [f"g_face={gf}", f"barnette_class={str(check_barnette_class(w.dual, gf)).lower()}"])
    if args.dot:
        Path(args.dot).write_text(w.to_dot())
    return 0


def cmd_replay(args) -> int:
    text = _read_text(args.trace).replace(";", "\n")
    if "trace=" in text:
        text = text.split("trace=", 1)[1]
    try:
        G = replay(parse_trace(text))
    except (TraceError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(format_triangulation(G))
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="barnette", description="Hamiltonian sets in a family of plane triangulations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--log-level", default="WARNING", help="logging level (default WARNING)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="catalog operations")
    csub = c.add_subparsers(dest="action", required=True)
    cc = csub.add_parser("check", help="run every validator on a catalog")
    cc.add_argument("dir", nargs="?", help="catalog directory or file (default: BARNETTE_CATALOG or the packaged data)")
    cc.add_argument("--verbose", action="store_true", help="also list passing checks")
    cc.set_defaults(func=cmd_catalog)

    for name, func, helptext in (("enumerate", cmd_enumerate, "all classes generated from the base graphs"),
                                 ("census", cmd_census, "all classes by independent exhaustive search")):
        e = sub.add_parser(name, help=helptext)
        e.add_argument("--max-vertices", type=_positive, required=True)
        e.add_argument("--height", type=_positive)
        e.add_argument("--out", help="write one graph file per class into this directory")
        e.add_argument("--jobs", type=_positive, default=1)
        if name == "enumerate":
            e.add_argument("--traces", action="store_true", help="append a derivation trace to every line")
        e.set_defaults(func=func)

    k = sub.add_parser("construct", help="build a hamiltonian set")
    k.add_argument("graphs", nargs="+", help="graph files, '-' or catalog:NAME[:N]")
    k.add_argument("--flavor", choices=FLAVORS, default="compatible")
    k.add_argument("--trace", action="store_true", help="include a derivation trace")
    k.add_argument("--catalog", help="catalog directory")
    k.add_argument("--jobs", type=_positive, default=1)
    k.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a vertex set")
    v.add_argument("graph")
    v.add_argument("set", help="ids like \"2 3\" or a file with a set= line")
    v.add_argument("--flavor", choices=FLAVORS, default="any", help="flavor required for exit status 0")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="exhaustive search for hamiltonian sets")
    o.add_argument("graph")
    o.add_argument("--flavor", choices=FLAVORS, default="any")
    o.add_argument("--budget", type=_positive, default=SearchConstraint().budget)
    o.add_argument("--all", action="store_true", help="list every set instead of the first")
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("dualize", help="hamiltonian cycle of the dual cubic graph")
    d.add_argument("graph")
    d.add_argument("set")
    d.add_argument("--dot", help="write a DOT drawing of the dual with the cycle highlighted")
    d.set_defaults(func=cmd_dualize)

    r = sub.add_parser("replay", help="rebuild a graph from a derivation trace")
    r.add_argument("trace", help="trace file, '-' or construct output with a trace= line")
    r.set_defaults(func=cmd_replay)
    return p


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Write the base-graph and operation-pattern catalog files.

Parametric base graphs come from ``barnette.bases``.  The exceptional graphs
are identified by exhaustive search over all family members up to 22
vertices (see the decisions ledger) and are rebuilt here from their
derivation traces.  Every marked set is computed by the exact tree search at
the strongest flavor the graph admits and is re-checked by the validators.

    python3 tools/freeze_catalog.py src/barnette/data
"""

from __future__ import annotations

import sys
from pathlib import Path

from barnette.bases import path_graph, strip_graph, sun_graph
from barnette.catalog import EDGE_KINDS, BaseEntry, format_base, format_pattern
from barnette.oracle import flavor_clauses
from barnette.planar_core import canonical_relabel, trace_faces
from barnette.rewrite import EDGE_PATTERNS, parse_trace, replay
from barnette.treedp import find_tree_set

EXCEPTIONAL = {
    "P": ("start G 3\nstep A\nstep C 0\nstep C 1\nstep C 1\n", "any"),
    "Q": ("start F 1\nstep A\nstep C 0\nstep C 1\nstep C 1\n", "any"),
    "A": ("start G 3\nstep A\nstep C 0\nstep C 0\nstep C 2\nstep C 2\nstep C 1\nstep C 1\n", "minus"),
    "H": ("start G 3\nstep B 0\nstep B 0\nstep B 2\nstep B 2\nstep A\nstep C 0\nstep C 3\n", "compatible"),
}
EXCEPTIONAL_PARAM = {"P": None, "Q": None, "A": 4, "H": 7}


def strongest(G, only=None):
    for flavor in ([only] if only else ["pm", "compatible", "minus", "any"]):
        clauses = list(trace_faces(G).faces) + flavor_clauses(G, flavor)
        S = find_tree_set(G, [v for v in G.vertices if v != G.g], (), clauses)
        if S is not None:
            return S, flavor
    raise SystemExit("no hamiltonian set found")


def entry(name, param, G, only=None):
    G = canonical_relabel(G)
    S, flavor = strongest(G, only)
    return BaseEntry(name, param, G, frozenset(S), flavor)


def main(argv) -> int:
    out = Path(argv[0] if argv else "src/barnette/data")
    out.mkdir(parents=True, exist_ok=True)
    parts = ["# base graphs; marked sets are checked by `barnette catalog check`\n"]
    for n in range(3, 10):
        parts.append(format_base(entry("G", n, strip_graph(n))))
    for n in range(1, 6):
        parts.append(format_base(entry("F", n, path_graph(n))))
    parts.append(format_base(entry("J", None, sun_graph())))
    for name, (trace, only) in EXCEPTIONAL.items():
        G = replay(parse_trace(trace))
        parts.append(format_base(entry(name, EXCEPTIONAL_PARAM[name], G, only)))
    (out / "base_graphs.cat").write_text("\n".join(parts))

    parts = ["# operation sites (j = 0) and their replacements (j = 1)\n"]
    for k, kind in EDGE_KINDS.items():
        site, repl = EDGE_PATTERNS[kind]
        parts.append(format_pattern("edge", k, 0, site))
        parts.append(format_pattern("edge", k, 1, repl))
    (out / "edge_patterns.cat").write_text("\n".join(parts))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

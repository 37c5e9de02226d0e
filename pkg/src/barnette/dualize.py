"""Hamiltonian cycles in the dual cubic graph from hamiltonian sets.

The cut between a hamiltonian set U and its complement crosses every
triangle exactly twice, so the dual edges of the cut form a 2-regular
spanning subgraph of the dual.  It is a single cycle because the complement
of U induces a tree as well; that is checked at run time, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .planar_core import CubicPlaneGraph, PlaneTriangulation, dual_face_of_vertex, dual_graph, trace_faces
from .verifier import verify_hamiltonian_set

__all__ = [
    "CycleWitness",
    "DualizationError",
    "tree_to_dual_cycle",
    "check_barnette_class",
    "verify_cubic_cycle",
    "is_three_connected",
    "triangulation_of_cubic",
    "face_profile",
    "large_faces_pairwise_apart",
    "g_face_of",
    "format_cubic",
    "parse_cubic",
]


class DualizationError(RuntimeError):
    """An invariant of the cut argument failed; ``witness`` names the offending part."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


@dataclass(frozen=True)
class CycleWitness:
    cycle: Tuple[int, ...]                 # dual vertices (face ids of G) in cycle order
    cut_edges: Tuple[Tuple[int, int], ...]  # (u, v) with u in U, crossed between cycle[k] and cycle[k+1]
    dual: CubicPlaneGraph

    def __len__(self) -> int:
        return len(self.cycle)

    def lines(self) -> List[str]:
        return [
            f"length={len(self.cycle)}",
            "cycle=" + " ".join(map(str, self.cycle)),
            "cut=" + " ".join(f"{u}-{v}" for u, v in self.cut_edges),
        ]

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_dot(self, name: str = "dual") -> str:
        on_cycle = {frozenset((self.cycle[k], self.cycle[(k + 1) % len(self.cycle)])) for k in range(len(self.cycle))}
        out = [f"graph {name} {{", "  node [shape=point];"]
        for u in sorted(self.dual.rotation):
            for v in self.dual.rotation[u]:
                if u < v:
                    style = ' [penwidth=3, color="red"]' if frozenset((u, v)) in on_cycle else ""
                    out.append(f"  {u} -- {v}{style};")
        out.append("}")
        return "\n".join(out) + "\n"


def _induced_tree(G: PlaneTriangulation, S: Set[int]) -> Tuple[bool, int, int]:
    """(is_tree, components, edges) for the subgraph induced by S."""
    edges = sum(1 for u in S for v in G.neighbors(u) if v in S) // 2
    seen: Set[int] = set()
    comps = 0
    for s in S:
        if s in seen:
            continue
        comps += 1
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in G.neighbors(x):
                if y in S and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return comps == 1 and edges == len(S) - 1, comps, edges


def tree_to_dual_cycle(G: PlaneTriangulation, U: Iterable[int]) -> CycleWitness:
    """Hamiltonian cycle of the dual, oriented so that the faces around U lie on its left."""
    U = frozenset(U)
    rep = verify_hamiltonian_set(G, U)
    if not rep.is_hamiltonian:
        raise ValueError(f"not a hamiltonian set: {rep.failure}")
    n = len(G)
    rest = set(G.vertices) - U
    ok, k, _ = _induced_tree(G, rest)
    if not ok:
        raise DualizationError(f"complement induces {k} components or a cycle", sorted(rest))
    cut = [(u, v) for u in sorted(U) for v in G.neighbors(u) if v not in U]
    if len(cut) != 2 * n - 4:
        raise DualizationError(f"cut has {len(cut)} edges, expected {2 * n - 4}", cut)
    fs = trace_faces(G)
    fod = fs.face_of_dart()
    # the traced face lies right of its dart: stepping from right of u->v to its left keeps u on the left
    step: Dict[int, Tuple[int, Tuple[int, int]]] = {}
    for u, v in cut:
        a = fod[(u, v)]
        if a in step:
            raise DualizationError(f"face {a} is left twice", fs.faces[a])
        step[a] = (fod[(v, u)], (u, v))
    if len(step) != len(fs.faces):
        missing = sorted(set(range(len(fs.faces))) - set(step))
        raise DualizationError("faces not crossed by the cut", missing)
    cycle = [0]
    crossed = []
    while True:
        nxt, edge = step[cycle[-1]]
        crossed.append(edge)
        if nxt == 0:
            break
        cycle.append(nxt)
        if len(cycle) > len(fs.faces):
            break
    if len(cycle) != len(fs.faces):
        raise DualizationError(f"cut closes a cycle of length {len(cycle)} out of {len(fs.faces)}", cycle)
    dual = dual_graph(G)
    w = CycleWitness(tuple(cycle), tuple(crossed), dual)
    if not verify_cubic_cycle(dual, w.cycle):
        raise DualizationError("dual walk is not a hamiltonian cycle", w.cycle)
    return w


def verify_cubic_cycle(Gstar: CubicPlaneGraph, cycle: Iterable[int]) -> bool:
    cyc = list(cycle)
    if len(cyc) != len(Gstar) or set(cyc) != set(Gstar.rotation):
        return False
    return all(Gstar.adjacent(cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc)))


def is_three_connected(Gstar: CubicPlaneGraph) -> bool:
    verts = sorted(Gstar.rotation)
    if len(verts) < 4:
        return False

    def connected(removed: Set[int]) -> bool:
        left = [v for v in verts if v not in removed]
        seen = {left[0]}
        stack = [left[0]]
        while stack:
            x = stack.pop()
            for y in Gstar.rotation[x]:
                if y not in removed and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(left)

    if not connected(set()):
        return False
    return all(connected({a, b}) for a, b in combinations(verts, 2))


def _face_adjacency(Gstar: CubicPlaneGraph) -> Dict[int, Set[int]]:
    owner: Dict[FrozenSet[int], List[int]] = {}
    for k, f in enumerate(Gstar.faces):
        for i in range(len(f)):
            owner.setdefault(frozenset((f[i], f[(i + 1) % len(f)])), []).append(k)
    adj: Dict[int, Set[int]] = {k: set() for k in range(len(Gstar.faces))}
    for fl in owner.values():
        for a in fl:
            adj[a].update(b for b in fl if b != a)
    return adj


def check_barnette_class(Gstar: CubicPlaneGraph, g_face: int) -> bool:
    """Faces sharing an edge with g_face have at most 5 edges, all others except g_face at most 6."""
    if not Gstar.is_cubic():
        raise ValueError("graph is not cubic")
    if not 0 <= g_face < len(Gstar.faces):
        raise ValueError(f"no face {g_face}")
    near = _face_adjacency(Gstar)[g_face]
    for k, size in Gstar.face_sizes.items():
        if k == g_face:
            continue
        if size > (5 if k in near else 6):
            return False
    return True


def face_profile(Gstar: CubicPlaneGraph) -> Dict[int, int]:
    """Number of faces of each size."""
    out: Dict[int, int] = {}
    for s in Gstar.face_sizes.values():
        out[s] = out.get(s, 0) + 1
    return dict(sorted(out.items()))


def large_faces_pairwise_apart(Gstar: CubicPlaneGraph, size: int) -> bool:
    faces = [k for k, s in Gstar.face_sizes.items() if s == size]
    adj = _face_adjacency(Gstar)
    return all(b not in adj[a] for a, b in combinations(faces, 2))


def triangulation_of_cubic(Gstar: CubicPlaneGraph, g_face: int = 0) -> PlaneTriangulation:
    """Dual triangulation; vertex k is face k of Gstar and g is ``g_face``."""
    owner: Dict[Tuple[int, int], int] = {}
    for k, f in enumerate(Gstar.faces):
        for i in range(len(f)):
            owner[(f[i], f[(i + 1) % len(f)])] = k
    rot: Dict[int, List[int]] = {}
    for k, f in enumerate(Gstar.faces):
        rot[k] = [owner[(f[(i + 1) % len(f)], f[i])] for i in range(len(f))]
    return PlaneTriangulation.from_rotation(rot, g_face)


def g_face_of(G: PlaneTriangulation) -> int:
    """Index of the dual face around g in :func:`dual_graph` numbering."""
    return dual_face_of_vertex(G)[G.g]


def format_cubic(Gstar: CubicPlaneGraph, comment: Optional[str] = None) -> str:
    out = ["cubic v1"]
    if comment:
        out.append(f"# {comment}")
    for v in sorted(Gstar.rotation):
        out.append(f"{v}: " + " ".join(map(str, Gstar.rotation[v])))
    return "\n".join(out) + "\n"


def parse_cubic(text: str) -> CubicPlaneGraph:
    """Read the ``cubic v1`` format: a header line, then ``v: rotation`` lines."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "cubic v1":
        raise ValueError("missing 'cubic v1' header")
    rot: Dict[int, List[int]] = {}
    for ln in lines[1:]:
        head, sep, rest = ln.partition(":")
        if not sep:
            raise ValueError(f"bad line {ln!r}")
        try:
            v = int(head)
            rot[v] = [int(x) for x in rest.split()]
        except ValueError:
            raise ValueError(f"bad line {ln!r}") from None
    for v, ns in rot.items():
        for u in ns:
            if v not in rot.get(u, ()):
                raise ValueError(f"edge {v}-{u} is not symmetric")
    return CubicPlaneGraph(rot)

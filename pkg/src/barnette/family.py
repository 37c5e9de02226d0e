"""Membership, BFS levels, layer cycles and peeling for the family of constrained triangulations.

A pair (G, g) is a member when every vertex other than g has degree at most 6
and every neighbour of g has degree at most 5.  Members split into strata:
stratum 0 when the top BFS level carries a cycle, stratum n >= 1 when it
induces a path on n vertices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .planar_core import PlaneTriangulation, canonical_labels


class StructureError(ValueError):
    """A level set is neither the expected cycle nor path."""


class PeelError(ValueError):
    """G^-1 does not exist as a member; ``kind`` is ``height``, ``not-simple`` or ``not-in-family``."""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


@dataclass(frozen=True)
class LevelStructure:
    level: Dict[int, int]
    height: int

    def layer(self, k: int) -> List[int]:
        return sorted(v for v, lv in self.level.items() if lv == k)

    def sizes(self) -> List[int]:
        out = [0] * (self.height + 1)
        for lv in self.level.values():
            out[lv] += 1
        return out


@dataclass(frozen=True)
class FamilyClass:
    member: bool
    stratum: Optional[int]
    height: int
    reason: str = ""


@dataclass(frozen=True)
class LayerCycle:
    vertices: Tuple[int, ...]
    kind: str  # "cycle" or "path"


def bfs_levels(G: PlaneTriangulation) -> LevelStructure:
    cached = G._cache.get("levels")
    if cached is not None:
        return cached
    level = {G.g: 0}
    queue = deque([G.g])
    while queue:
        v = queue.popleft()
        for u in G.rotation[v]:
            if u not in level:
                level[u] = level[v] + 1
                queue.append(u)
    out = LevelStructure(level, max(level.values()))
    G._cache["levels"] = out
    return out


def degree_violations(G: PlaneTriangulation) -> List[Tuple[int, int, int]]:
    """(vertex, degree, bound) for every vertex breaking the degree conditions."""
    bad = []
    ring = set(G.rotation[G.g])
    for v, ns in G.rotation.items():
        if v == G.g:
            continue
        bound = 5 if v in ring else 6
        if len(ns) > bound:
            bad.append((v, len(ns), bound))
    return sorted(bad)


def is_member(G: PlaneTriangulation) -> bool:
    return not degree_violations(G)


def _boundary_walk(G: PlaneTriangulation, k: int, levels: LevelStructure) -> List[int]:
    """Closed walk around the region of vertices at level >= k, seen from the g side.

    The walk is the traced face of G[levels >= k] that used to contain the
    lower levels; it follows the counterclockwise orientation of that region.
    """
    lv = levels.level
    layer = [v for v in G.rotation if lv[v] == k]
    if len(layer) == 1:
        return layer
    start = None
    for v in sorted(layer):
        ns = G.rotation[v]
        d = len(ns)
        for t in range(d):
            if lv[ns[t]] < k:
                for s in range(1, d):
                    u = ns[(t + s) % d]
                    if lv[u] >= k:
                        start = (v, u)
                        break
                break
        if start is not None:
            break
    if start is None:
        raise StructureError(f"level {k} has no vertex next to level {k - 1}")
    walk = []
    a, b = start
    limit = 4 * len(G.rotation) + 4
    while True:
        walk.append(a)
        ns = G.rotation[b]
        d = len(ns)
        p = G._pos[b][a]
        nxt = None
        for s in range(1, d + 1):
            u = ns[(p + s) % d]
            if lv[u] >= k:
                nxt = u
                break
        a, b = b, nxt
        if (a, b) == start or len(walk) > limit:
            break
    return walk


def layer_cycle(G: PlaneTriangulation, k: int, canonical_start: bool = True) -> LayerCycle:
    """c^k(G): the cycle (or top-level path) on level k, counterclockwise."""
    levels = bfs_levels(G)
    if not 1 <= k <= levels.height:
        raise ValueError(f"level {k} outside 1..{levels.height}")
    key = ("layer", k, canonical_start)
    cached = G._cache.get(key)
    if cached is not None:
        return cached
    walk = _boundary_walk(G, k, levels)
    layer = set(v for v, lv in levels.level.items() if lv == k)
    if len(walk) == len(set(walk)) and set(walk) == layer and len(walk) >= 3:
        seq = walk
        kind = "cycle"
        if canonical_start:
            labels = canonical_labels(G)
            j = min(range(len(seq)), key=lambda t: labels[seq[t]])
            seq = seq[j:] + seq[:j]
        out = LayerCycle(tuple(seq), kind)
    else:
        path = _walk_as_path(G, walk, layer)
        if path is None or k != levels.height:
            raise StructureError(f"level {k} is neither a cycle nor the top-level path")
        if canonical_start and len(path) > 1:
            labels = canonical_labels(G)
            if labels[path[-1]] < labels[path[0]]:
                path = path[::-1]
        out = LayerCycle(tuple(path), "path")
    G._cache[key] = out
    return out


def _walk_as_path(G: PlaneTriangulation, walk: List[int], layer: set) -> Optional[List[int]]:
    n = len(layer)
    if n == 1:
        return list(layer)
    if len(walk) != 2 * n - 2 or set(walk) != layer:
        return None
    # the walk around a path p1..pn reads p1 p2 .. pn .. p2; find the turning points
    m = len(walk)
    for s in range(m):
        seq = walk[s:] + walk[:s]
        forward = seq[:n]
        if len(set(forward)) == n and seq[n:] == forward[1:n - 1][::-1]:
            path = forward
            edges = set()
            for u in path:
                for v in G.rotation[u]:
                    if v in layer:
                        edges.add(frozenset((u, v)))
            want = {frozenset((path[t], path[t + 1])) for t in range(n - 1)}
            if edges != want:
                return None
            return path
    return None


def outer_cycle(G: PlaneTriangulation) -> Tuple[int, ...]:
    """c(G) with the default (declared-outer-face) starting point."""
    return G.outer_cycle()


def stratum_of(G: PlaneTriangulation) -> int:
    levels = bfs_levels(G)
    top = layer_cycle(G, levels.height, canonical_start=False)
    return 0 if top.kind == "cycle" else len(top.vertices)


def check_family_membership(G: PlaneTriangulation) -> FamilyClass:
    levels = bfs_levels(G)
    bad = degree_violations(G)
    if bad:
        v, d, bound = bad[0]
        return FamilyClass(False, None, levels.height, f"vertex {v} has degree {d} > {bound}")
    return FamilyClass(True, stratum_of(G), levels.height)


# --------------------------------------------------------------------------
# Peeling
# --------------------------------------------------------------------------


def peel(G: PlaneTriangulation) -> PlaneTriangulation:
    """G^-1: delete c(G) and join g to every vertex of level 2."""
    levels = bfs_levels(G)
    if levels.height <= 1:
        raise PeelError("height", "peel needs height at least 2")
    lv = levels.level
    try:
        walk = _boundary_walk(G, 2, levels)
    except StructureError as exc:
        raise PeelError("not-simple", str(exc)) from None
    layer2 = [v for v in G.rotation if lv[v] == 2]
    if len(walk) != len(set(walk)) or len(walk) != len(layer2) or len(walk) < 3:
        raise PeelError("not-simple", "level 2 does not form a cycle; g would get parallel edges")
    g = G.g
    rot: Dict[int, List[int]] = {}
    for v, ns in G.rotation.items():
        if lv[v] <= 1:
            continue
        if lv[v] > 2:
            rot[v] = list(ns)
            continue
        d = len(ns)
        outer = [lv[u] == 1 for u in ns]
        blocks = sum(1 for t in range(d) if outer[t] and not outer[t - 1])
        if blocks != 1:
            raise PeelError("not-simple", f"vertex {v} meets level 1 in {blocks} separate blocks")
        # rotate so the level-1 block is contiguous at the end, then replace it by g
        t0 = next(t for t in range(d) if outer[t] and not outer[t - 1])
        seq = [ns[(t0 + s) % d] for s in range(d)]
        inner = [u for u in seq if lv[u] != 1]
        rot[v] = inner + [g]
    rot[g] = list(reversed(walk))
    try:
        H = PlaneTriangulation.from_rotation(rot, g, None, check=True)
    except ValueError as exc:
        raise PeelError("not-simple", f"peeled graph is not a simple triangulation: {exc}") from None
    if not is_member(H):
        raise PeelError("not-in-family", "peeled graph violates the degree conditions")
    return H


def peel_twice(G: PlaneTriangulation) -> PlaneTriangulation:
    return peel(peel(G))

"""Derive the outer-layer site replacement families and write them as catalog data.

Each family starts from its zero pattern (the configuration a site has in the
graph before replacement).  Variants are everything reachable inside the
site by the generating operations that touch the outer layer only:

* C at an outer edge whose inner apex is the site's level-2 vertex t,
* B at an outer edge whose two ends are new vertices of degree <= 4.

Boundary vertices other than g and t keep their degree.  A variant is kept
when it admits a marking that dominates every proper face, induces a forest
connecting the marked boundary vertices exactly as the zero pattern does, and
keeps the (-)compatibility implications on the outer cycle for every context
the site can sit in.  Run from the repository root:

    python3 tools/derive_site_patterns.py > src/barnette/data/site_patterns.cat
"""

from __future__ import annotations

import sys
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

Face = Tuple[int, int, int]

A, B, D, T, Z = 1, 2, 3, 4, 5


class Site:
    def __init__(self, k: int, faces: List[Face], sigma: Tuple[int, ...], marked: Set[int],
                 fixed_degree: Dict[int, int], t_room: int):
        self.k = k
        self.faces = faces
        self.sigma = sigma
        self.marked = marked              # marked boundary vertices (zero pattern marking)
        self.fixed_degree = fixed_degree  # degree in the host graph of unmarked boundary outer vertices
        self.t_room = t_room              # how many neighbours t may gain


def _zero_sites() -> Dict[int, Site]:
    edge = [(A, D, B), (A, B, T)]
    sig = (A, D, B, T)
    sites = {
        1: Site(1, edge, sig, {A}, {B: 5}, 2),
        2: Site(2, edge, sig, {A, B}, {}, 3),
        4: Site(4, edge, sig, {B}, {A: 5}, 2),
    }
    # k = 3: a degree-4 outer vertex z between two marked outer vertices
    sites[3] = Site(3, [(A, D, Z), (Z, D, B), (A, Z, T), (Z, B, T)], sig, {A, B}, {}, 2)
    return sites


def _nxt(faces: Sequence[Face]) -> Dict[int, Dict[int, int]]:
    out: Dict[int, Dict[int, int]] = {}
    for a, b, c in faces:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            out.setdefault(x, {})[y] = z
    return out


def _outer_path(faces: Sequence[Face]) -> List[int]:
    """Vertices adjacent to g from a to b, in order along the outer cycle."""
    after = {z: y for y, z in _nxt(faces)[D].items()}
    path = [A]
    while path[-1] != B:
        path.append(after[path[-1]])
    return path


def _degrees(faces: Sequence[Face]) -> Dict[int, int]:
    adj: Dict[int, Set[int]] = {}
    for f in faces:
        for x in f:
            adj.setdefault(x, set()).update(y for y in f if y != x)
    return {v: len(ns) for v, ns in adj.items()}


def _adjacency(faces: Sequence[Face]) -> Dict[int, Set[int]]:
    adj: Dict[int, Set[int]] = {}
    for f in faces:
        for x in f:
            adj.setdefault(x, set()).update(y for y in f if y != x)
    return adj


def _canonical(faces: Sequence[Face], sigma: Tuple[int, ...]) -> Tuple[Tuple[Face, ...], Dict[int, int]]:
    """Relabel interior vertices by discovery order from the boundary."""
    nx = _nxt(faces)
    lab = {s: s for s in sigma}
    nxt_id = 6
    queue = list(sigma)
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        slot = nx[v]
        k = sigma.index(v) if v in sigma else None
        start = sigma[(k + 1) % len(sigma)] if k is not None else min(slot, key=lambda u: lab.get(u, 10 ** 6))
        order = [start]
        cur = start
        while cur in slot and len(order) <= len(slot):
            cur = slot[cur]
            if cur == start:
                break
            order.append(cur)
        for u in order:
            if u not in lab:
                lab[u] = nxt_id
                nxt_id += 1
                queue.append(u)
    out = []
    for f in faces:
        g = tuple(lab[x] for x in f)
        j = g.index(min(g))
        out.append(g[j:] + g[:j])
    return tuple(sorted(out)), lab


def _apply_C(faces: List[Face], u: int, v: int, w: int) -> Optional[List[Face]]:
    nx = _nxt(faces)
    y = nx[u][v]
    if y != T:
        return None
    rest = [f for f in faces if set(f) not in ({u, D, v}, {u, v, y})]
    return rest + [(u, D, w), (D, v, w), (v, y, w), (y, u, w)]


def _apply_B(faces: List[Face], u: int, v: int, w: int) -> List[Face]:
    rest = [f for f in faces if set(f) != {u, D, v}]
    return rest + [(u, D, w), (D, v, w), (v, u, w)]


def _variants(site: Site) -> Dict[Tuple[Face, ...], List[Face]]:
    t0 = _degrees(site.faces)[T]
    start, _ = _canonical(site.faces, site.sigma)
    seen = {start: list(start)}
    todo = [list(start)]
    while todo:
        faces = todo.pop()
        deg = _degrees(faces)
        path = _outer_path(faces)
        w = max(deg) + 1
        for u, v in zip(path, path[1:]):
            cands = []
            if deg[T] - t0 < site.t_room:
                nf = _apply_C(faces, u, v, w)
                if nf is not None:
                    cands.append(nf)
            if u not in site.sigma and v not in site.sigma and deg[u] <= 4 and deg[v] <= 4:
                cands.append(_apply_B(faces, u, v, w))
            for nf in cands:
                key, _ = _canonical(nf, site.sigma)
                if key not in seen:
                    seen[key] = list(key)
                    todo.append(list(key))
    return seen


def _components(S: Set[int], adj: Dict[int, Set[int]]) -> Optional[List[Set[int]]]:
    """Components of the induced subgraph, or None if it has a cycle."""
    edges = sum(1 for x in S for y in adj[x] if y in S) // 2
    comps = []
    seen: Set[int] = set()
    for s in sorted(S):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in S and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    if edges != len(S) - len(comps):
        return None
    return comps


def _boundary_partition(S: Set[int], adj: Dict[int, Set[int]], boundary: Set[int]) -> Optional[FrozenSet[FrozenSet[int]]]:
    comps = _components(S, adj)
    if comps is None:
        return None
    parts = []
    for c in comps:
        b = c & boundary
        if not b:
            return None
        parts.append(frozenset(b))
    return frozenset(parts)


def _minus_ok(site: Site, zero_path: List[int], path: List[int], S: Set[int], deg: Dict[int, int]) -> bool:
    """(-)compatibility along the new outer path for every admissible context.

    Context before a: p1 is known to be marked when the zero pattern's second
    path vertex is unmarked with degree <= 4 (the host graph needed p1 then).
    Context after b: n1 needs the new second-to-last vertex marked exactly when
    it needed the old one.
    """
    zero_deg = _degrees(site.faces)

    def low(v, dd):
        return site.fixed_degree.get(v, dd.get(v, 6)) <= 4

    p1_known = zero_path[1] not in site.marked and zero_path[1] not in site.sigma and low(zero_path[1], zero_deg)
    seq = ["p1"] + path
    for idx in range(2, len(seq)):
        x = seq[idx]
        if x in S or not low(x, deg):
            continue
        back = seq[idx - 2]
        if back == "p1":
            if not p1_known:
                return False
        elif back not in S:
            return False
    if zero_path[-2] in site.marked:
        if path[-2] not in S:
            return False
    return True


def _plus_ok(site: Site, zero_path: List[int], path: List[int], S: Set[int], deg: Dict[int, int]) -> bool:
    """Mirror image of :func:`_minus_ok`, used for the starred restriction."""
    zero_deg = _degrees(site.faces)

    def low(v, dd):
        return site.fixed_degree.get(v, dd.get(v, 6)) <= 4

    n1_known = zero_path[-2] not in site.marked and zero_path[-2] not in site.sigma and low(zero_path[-2], zero_deg)
    seq = path + ["n1"]
    for idx in range(len(seq) - 2):
        x = seq[idx]
        if x in S or not low(x, deg):
            continue
        fwd = seq[idx + 2]
        if fwd == "n1":
            if not n1_known:
                return False
        elif fwd not in S:
            return False
    if zero_path[1] in site.marked:
        if path[1] not in S:
            return False
    return True


def _markings(site: Site, faces: List[Face]):
    adj = _adjacency(faces)
    deg = {v: len(ns) for v, ns in adj.items()}
    sig = set(site.sigma)
    interior = sorted(v for v in adj if v not in sig)
    want = _zero_partition(site)
    zero_path = _outer_path(site.faces)
    path = _outer_path(faces)
    out = []
    for r in range(len(interior) + 1):
        for combo in combinations(interior, r):
            S = set(site.marked) | set(combo)
            if any(not (S & set(f)) for f in faces):
                continue
            if _boundary_partition(S, adj, set(site.marked)) != want:
                continue
            if not _minus_ok(site, zero_path, path, S, deg):
                continue
            out.append((frozenset(S), _plus_ok(site, zero_path, path, S, deg)))
    return out


def _zero_partition(site: Site) -> FrozenSet[FrozenSet[int]]:
    adj = _adjacency(site.faces)
    return _boundary_partition(set(site.marked), adj, set(site.marked))


def derive(site: Site):
    t0 = _degrees(site.faces)[T]
    rows = []
    for key, faces in _variants(site).items():
        marks = _markings(site, faces)
        if not marks:
            continue
        marks.sort(key=lambda m: (not m[1], len(m[0]), sorted(m[0])))
        S, plus = marks[0]
        gain = _degrees(faces)[T] - t0
        rows.append((gain, not plus, len(_degrees(faces)), key, faces, S, plus))
    rows.sort(key=lambda r: r[:4])
    return rows


def main(argv: Sequence[str]) -> int:
    from barnette.catalog import format_pattern
    from barnette.rewrite import Pattern

    verbose = "--summary" in argv
    sites = _zero_sites()
    print("# outer-layer site replacements, generated by tools/derive_site_patterns.py")
    for k in (1, 2, 3, 4):
        rows = derive(sites[k])
        if verbose:
            print(f"# k={k}: {len(rows)} variants, gains {[r[0] for r in rows]}, plus {[r[6] for r in rows]}")
        for j, (gain, _np, _n, _key, faces, S, plus) in enumerate(rows):
            pat = Pattern.from_left_faces(faces, sites[k].sigma, D, S)
            print(f"# gain at t: {gain}; keeps the mirrored implications: {'yes' if plus else 'no'}")
            print(format_pattern("site", k, j, pat))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

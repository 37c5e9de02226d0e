"""Independent enumeration of family members by triangulating a polygon.

G - g is a triangulated disc whose boundary is c(G).  For every boundary
length m and every budget of interior vertices the search fills the disc one
triangle at a time: take a directed edge u->v of an open hole (hole interior
on its left) and choose the apex of the triangle on its left, either a fresh
interior vertex or another vertex of the same hole.  The root edge is taken at
the hole vertex with the least spare degree, so a saturated vertex forces an
ear immediately.  Nothing here uses the rewrite operations.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .planar_core import PlaneTriangulation, canonical_code, rotation_from_left_faces

# degree bounds inside the disc: boundary vertices also touch g
_BOUNDARY_BOUND = 4
_INTERIOR_BOUND = 6


class CensusLimitError(ValueError):
    pass


CENSUS_CAP = 26


def _discs(m: int, budget: int):
    """Yield face lists of every admissible triangulated m-gon with <= budget interior vertices."""
    deg = [2] * m
    bound = [_BOUNDARY_BOUND] * m
    adj: List[set] = [{(i - 1) % m, (i + 1) % m} for i in range(m)]
    faces: List[Tuple[int, int, int]] = []
    holes: List[List[int]] = [list(range(m))]
    state = {"next": m}

    def pick():
        best = None
        for hi, hole in enumerate(holes):
            for k, v in enumerate(hole):
                spare = bound[v] - deg[v]
                if best is None or spare < best[0]:
                    best = (spare, hi, k)
        return best

    def rec():
        if not holes:
            yield list(faces)
            return
        spare, hi, k = pick()
        if spare < 0:
            return
        hole = holes[hi]
        s = len(hole)
        u, v = hole[k], hole[(k + 1) % s]
        # rotate so that the root edge is hole[0] -> hole[1]
        cyc = hole[k:] + hole[:k]
        del holes[hi]
        # apex on the hole
        for j in range(2, s):
            p = cyc[j]
            new_up = j != s - 1
            new_vp = j != 2
            if new_up and p in adj[u]:
                continue
            if new_vp and p in adj[v]:
                continue
            added = []
            if new_up:
                added.append((u, p))
            if new_vp:
                added.append((v, p))
            ok = True
            for a, b in added:
                adj[a].add(b)
                adj[b].add(a)
                deg[a] += 1
                deg[b] += 1
            for a, b in added:
                if deg[a] > bound[a] or deg[b] > bound[b]:
                    ok = False
            if ok:
                first = cyc[1:j + 1]          # v .. p
                second = cyc[j:] + cyc[:1]    # p .. u
                pushed = 0
                for part in (first, second):
                    if len(part) >= 3:
                        holes.append(part)
                        pushed += 1
                faces.append((u, v, p))
                yield from rec()
                faces.pop()
                for _ in range(pushed):
                    holes.pop()
            for a, b in added:
                adj[a].discard(b)
                adj[b].discard(a)
                deg[a] -= 1
                deg[b] -= 1
        # fresh interior apex
        if state["next"] - m < budget and deg[u] < bound[u] and deg[v] < bound[v]:
            w = state["next"]
            state["next"] += 1
            deg.append(2)
            bound.append(_INTERIOR_BOUND)
            adj.append({u, v})
            adj[u].add(w)
            adj[v].add(w)
            deg[u] += 1
            deg[v] += 1
            holes.append([u, w] + cyc[1:])
            faces.append((u, v, w))
            yield from rec()
            faces.pop()
            holes.pop()
            deg[u] -= 1
            deg[v] -= 1
            adj[u].discard(w)
            adj[v].discard(w)
            adj.pop()
            bound.pop()
            deg.pop()
            state["next"] -= 1
        holes.insert(hi, hole)

    yield from rec()


def _close(m: int, faces: List[Tuple[int, int, int]]) -> PlaneTriangulation:
    g = -1
    allf = list(faces) + [(i, g, (i + 1) % m) for i in range(m)]
    rot = rotation_from_left_faces(allf)
    shift = {v: v + 1 for v in rot}
    shift[g] = 0
    rot = {shift[v]: [shift[u] for u in ns] for v, ns in rot.items()}
    return PlaneTriangulation.from_rotation(rot, 0, None, check=False)


def census_for_boundary(m: int, max_vertices: int) -> Dict[bytes, PlaneTriangulation]:
    out: Dict[bytes, PlaneTriangulation] = {}
    budget = max_vertices - 1 - m
    if budget < 0:
        return out
    for faces in _discs(m, budget):
        G = _close(m, faces)
        code = canonical_code(G)
        if code not in out:
            out[code] = G
    return out


def _census_job(args):
    m, max_vertices = args
    return census_for_boundary(m, max_vertices)


def exhaustive_family_census(max_vertices: int, jobs: int = 1, cap: int = CENSUS_CAP) -> Dict[bytes, PlaneTriangulation]:
    """Every class of the family with at most ``max_vertices`` vertices."""
    if max_vertices > cap:
        raise CensusLimitError(f"census bound {max_vertices} exceeds the cap {cap}")
    out: Dict[bytes, PlaneTriangulation] = {}
    if max_vertices < 4:
        return out
    tasks = [(m, max_vertices) for m in range(3, max_vertices)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_census_job, tasks))
    else:
        parts = [_census_job(t) for t in tasks]
    for part in parts:
        for code in sorted(part):
            out.setdefault(code, part[code])
    return out

"""Shared graph builders and cached enumerations for the test suite."""

from functools import lru_cache
from pathlib import Path

from barnette.planar_core import from_left_faces
from barnette.rewrite import enumerate_family

DATA = Path(__file__).parent / "data"


def icosahedron():
    up = [1 + i for i in range(5)]
    low = [6 + i for i in range(5)]
    faces = []
    for i in range(5):
        j = (i + 1) % 5
        faces += [(0, up[i], up[j]), (up[i], low[i], up[j]), (up[j], low[i], low[j]), (low[i], 11, low[j])]
    return from_left_faces(faces, 0)


def icosahedron_with_degree_seven():
    """Icosahedron with two vertices stacked into faces at the vertex opposite g."""
    G = icosahedron()
    faces = [f for f in _left_faces(G)]
    nxt = 12
    for _ in range(2):
        f = next(f for f in faces if 11 in f)
        faces.remove(f)
        a, b, c = f
        faces += [(a, b, nxt), (b, c, nxt), (c, a, nxt)]
        nxt += 1
    return from_left_faces(faces, 0)


def _left_faces(G):
    seen = set()
    for u in G.vertices:
        for v in G.neighbors(u):
            if (u, v) in seen:
                continue
            w = G.left_apex(u, v)
            seen |= {(u, v), (v, w), (w, u)}
            yield (u, v, w)


@lru_cache(maxsize=None)
def members(max_vertices: int):
    return enumerate_family(max_vertices)

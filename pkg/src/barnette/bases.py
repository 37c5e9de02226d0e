"""Builders for the parametric starting graphs G_n, J and F_n.

Every builder returns a validated triangulation with g = 0.  Non-g vertices
are numbered from 1 so that small instances are easy to read in fixtures.
"""

from __future__ import annotations

from typing import List, Tuple

from .planar_core import PlaneTriangulation, from_left_faces

Face = Tuple[int, int, int]


def _cone(ring: List[int], g: int = 0) -> List[Face]:
    """Faces joining g to a counterclockwise outer cycle."""
    m = len(ring)
    return [(ring[i], g, ring[(i + 1) % m]) for i in range(m)]


def strip_graph(n: int) -> PlaneTriangulation:
    """G_n: the zigzag strip on 1..n (edges i,i+1 and i,i+2) coned from g."""
    if n < 3:
        raise ValueError("G_n needs n >= 3")
    faces: List[Face] = []
    # odd vertices run along the bottom, even ones along the top
    for i in range(1, n - 1):
        if i % 2:
            faces.append((i, i + 2, i + 1))
        else:
            faces.append((i, i + 1, i + 2))
    bottom = list(range(1, n + 1, 2))
    top = list(range(2, n + 1, 2))
    ring = bottom + top[::-1]
    faces += _cone(ring)
    return from_left_faces(faces, 0)


def sun_graph() -> PlaneTriangulation:
    """J: the 3-sun (a triangle with an ear on each side) coned from g."""
    a, b, c, s1, s2, s3 = 1, 3, 5, 2, 4, 6
    faces = [(a, b, c), (a, s1, b), (b, s2, c), (c, s3, a)]
    faces += _cone([a, s1, b, s2, c, s3])
    return from_left_faces(faces, 0)


def path_graph(n: int) -> PlaneTriangulation:
    """F_n: a top-level path p_1..p_n wrapped by one ring of 2n - 2 vertices (n >= 3).

    F_1 is the triangular bipyramid and F_2 has six vertices; both are the
    degenerate ends of the same shape.
    """
    if n < 1:
        raise ValueError("F_n needs n >= 1")
    if n == 1:
        faces = [(1, 2, 4), (2, 3, 4), (3, 1, 4)] + _cone([1, 2, 3])
        return from_left_faces(faces, 0)
    if n == 2:
        x1, x3, x4, p1, p2 = 1, 2, 3, 4, 5
        faces = [(x1, p1, p2), (x1, x3, p1), (p1, x3, p2), (x3, x4, p2), (x4, x1, p2)]
        faces += _cone([x1, x3, x4])
        return from_left_faces(faces, 0)
    p = list(range(1, n + 1))
    top = list(range(n + 1, 2 * n))          # t_j over the edge p_j p_{j+1}
    bot = list(range(2 * n, 3 * n - 1))      # b_j under the same edge
    faces = []
    for j in range(n - 1):
        faces.append((p[j], bot[j], p[j + 1]))
        faces.append((p[j], p[j + 1], top[j]))
        if j + 1 < n - 1:
            faces.append((p[j + 1], bot[j], bot[j + 1]))
            faces.append((p[j + 1], top[j + 1], top[j]))
    faces.append((p[0], top[0], bot[0]))
    faces.append((p[-1], bot[-1], top[-1]))
    ring = bot + top[::-1]
    faces += _cone(ring)
    return from_left_faces(faces, 0)

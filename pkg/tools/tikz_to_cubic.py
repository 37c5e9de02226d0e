"""Turn a TikZ line drawing of a plane cubic graph into a ``cubic v1`` file.

Vertices are segment ends and points where one segment ends on another.
The rotation at each vertex is the counterclockwise order of its edges.

    python3 tools/tikz_to_cubic.py drawing.tex > graph.cubic
"""

from __future__ import annotations

import math
import re
import sys
from typing import Dict, List, Tuple

from barnette.dualize import format_cubic
from barnette.planar_core import CubicPlaneGraph

Point = Tuple[float, float]

COORD = re.compile(r"\\coordinate\s*\((\w+)\)\s*at\s*\(\$\(([-\d.]+),([-\d.]+)\)\s*\+\s*\(([-\d.]+):([-\d.]+)cm\)\$\)\s*;")
DRAW = re.compile(r"\\draw\s*(.*?);", re.S)
NODE = re.compile(r"\(([^()]*)\)|(cycle)")


def _round(p: Point) -> Point:
    return (round(p[0], 3) + 0.0, round(p[1], 3) + 0.0)


def parse_segments(text: str) -> List[Tuple[Point, Point]]:
    named: Dict[str, Point] = {}
    for name, x, y, ang, r in COORD.findall(text):
        a = math.radians(float(ang))
        named[name] = _round((float(x) + float(r) * math.cos(a), float(y) + float(r) * math.sin(a)))
    segs = []
    for body in DRAW.findall(text):
        pts: List[Point] = []
        for inner, cyc in NODE.findall(body):
            if cyc:
                pts.append(pts[0])
            elif inner in named:
                pts.append(named[inner])
            else:
                x, y = inner.split(",")
                pts.append(_round((float(x), float(y))))
        segs += list(zip(pts, pts[1:]))
    return segs


def _on(p: Point, a: Point, b: Point) -> bool:
    cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    if abs(cross) > 1e-6:
        return False
    dot = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])
    return 1e-9 < dot < (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2 - 1e-9


def build(segs: List[Tuple[Point, Point]]) -> CubicPlaneGraph:
    points = sorted({p for s in segs for p in s})
    ids = {p: k for k, p in enumerate(points)}
    nbrs: Dict[int, set] = {k: set() for k in ids.values()}
    for a, b in segs:
        inner = sorted((p for p in points if _on(p, a, b)), key=lambda p: (p[0] - a[0]) ** 2 + (p[1] - a[1]) ** 2)
        chain = [a] + inner + [b]
        for p, q in zip(chain, chain[1:]):
            nbrs[ids[p]].add(ids[q])
            nbrs[ids[q]].add(ids[p])
    rot = {}
    for p, k in ids.items():
        rot[k] = sorted(nbrs[k], key=lambda j: math.atan2(points[j][1] - p[1], points[j][0] - p[0]))
    G = CubicPlaneGraph(rot)
    if not G.is_cubic():
        bad = [points[k] for k, ns in rot.items() if len(ns) != 3]
        raise SystemExit(f"not cubic at {bad}")
    return G


def main(argv) -> int:
    text = open(argv[0]).read() if argv else sys.stdin.read()
    G = build(parse_segments(text))
    sys.stdout.write(format_cubic(G))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

"""Rotation-system plane triangulations with a distinguished vertex.

A triangulation is stored as a map from vertex to its neighbours in
counterclockwise order.  Faces are traced with the rule: the successor of the
directed edge (u, v) is (v, w), where w immediately follows u in the rotation
at v.  With this rule a traced face lies on the right of each of its darts, so
bounded faces of a drawing come out clockwise.

Throughout the package the *left* face of a dart u->v is also used; its third
vertex is ``rotation[u]`` at the position after ``v``.
"""

from __future__ import annotations

from array import array
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Vertex = int
Dart = Tuple[int, int]


class EmbeddingError(ValueError):
    """Raised when a rotation system is not a valid simple plane triangulation.

    ``kind`` is a short machine-readable tag (``syntax``, ``asymmetric``,
    ``not-triangle``, ``not-planar``, ``outer-face``, ``g-not-outer``,
    ``not-3-connected``, ``too-small``, ``not-simple``).
    """

    def __init__(self, kind: str, message: str, line: Optional[int] = None, col: Optional[int] = None):
        self.kind = kind
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(f"{where}{message}")


# --------------------------------------------------------------------------
# Core type
# --------------------------------------------------------------------------


class PlaneTriangulation:
    """Immutable simple plane triangulation with fixed vertex ``g``.

    Use :meth:`from_rotation` or :func:`from_left_faces` to build one; both
    validate every structural invariant unless ``check=False`` is passed by
    trusted internal code.
    """

    __slots__ = ("_rot", "_pos", "g", "outer_face", "_cache")

    def __init__(self, rotation: Mapping[int, Sequence[int]], g: int, outer_face: Sequence[int], check: bool = True):
        self._rot: Dict[int, Tuple[int, ...]] = {v: tuple(ns) for v, ns in rotation.items()}
        self._pos: Dict[int, Dict[int, int]] = {v: {u: k for k, u in enumerate(ns)} for v, ns in self._rot.items()}
        self.g = g
        self.outer_face = tuple(outer_face)
        self._cache: dict = {}
        if check:
            _validate(self)

    # -- basic accessors -------------------------------------------------
    @classmethod
    def from_rotation(cls, rotation: Mapping[int, Sequence[int]], g: int, outer_face: Optional[Sequence[int]] = None, check: bool = True) -> "PlaneTriangulation":
        if outer_face is None:
            outer_face = default_outer_face(rotation, g)
        return cls(rotation, g, outer_face, check=check)

    @property
    def rotation(self) -> Dict[int, Tuple[int, ...]]:
        return self._rot

    @property
    def vertices(self) -> List[int]:
        return sorted(self._rot)

    def __len__(self) -> int:
        return len(self._rot)

    def __contains__(self, v: object) -> bool:
        return v in self._rot

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._rot[v]

    def degree(self, v: int) -> int:
        return len(self._rot[v])

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._pos[u]

    def succ(self, v: int, u: int) -> int:
        """Neighbour of ``v`` immediately after ``u`` in counterclockwise order."""
        ns = self._rot[v]
        return ns[(self._pos[v][u] + 1) % len(ns)]

    def pred(self, v: int, u: int) -> int:
        ns = self._rot[v]
        return ns[(self._pos[v][u] - 1) % len(ns)]

    def left_apex(self, u: int, v: int) -> int:
        """Third vertex of the face on the left of the dart u->v."""
        return self.succ(u, v)

    def right_apex(self, u: int, v: int) -> int:
        """Third vertex of the face on the right of the dart u->v (traced face)."""
        return self.succ(v, u)

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((u, v) for u, ns in self._rot.items() for v in ns if u < v)

    def num_edges(self) -> int:
        return sum(len(ns) for ns in self._rot.values()) // 2

    def max_id(self) -> int:
        return max(self._rot)

    def outer_cycle(self) -> Tuple[int, ...]:
        """c(G): the neighbours of g in the counterclockwise order of the outer cycle of G - g.

        This is the rotation at g read backwards.  The starting vertex is the
        neighbour of g following it on the declared outer face.
        """
        cached = self._cache.get("outer_cycle")
        if cached is None:
            ring = tuple(reversed(self._rot[self.g]))
            start = self._outer_start()
            k = ring.index(start)
            cached = ring[k:] + ring[:k]
            self._cache["outer_cycle"] = cached
        return cached

    def _outer_start(self) -> int:
        a, b, c = self.outer_face
        seq = (a, b, c, a, b)
        k = seq.index(self.g)
        return seq[k + 1]

    def __repr__(self) -> str:
        return f"PlaneTriangulation(|V|={len(self)}, g={self.g})"

    def with_outer(self, outer_face: Sequence[int]) -> "PlaneTriangulation":
        return PlaneTriangulation(self._rot, self.g, outer_face, check=True)


# --------------------------------------------------------------------------
# Construction helpers
# --------------------------------------------------------------------------


def rotation_from_left_faces(faces: Iterable[Sequence[int]]) -> Dict[int, List[int]]:
    """Rotation system of a closed triangulated sphere given its faces.

    Each face (a, b, c) is listed so that it lies on the left of a->b->c
    (counterclockwise in a drawing where the face is bounded).
    """
    nxt: Dict[int, Dict[int, int]] = {}
    for face in faces:
        a, b, c = face
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            slot = nxt.setdefault(x, {})
            if y in slot:
                raise EmbeddingError("not-planar", f"directed edge {x}->{y} appears in two faces")
            slot[y] = z
    rot: Dict[int, List[int]] = {}
    for v, slot in nxt.items():
        start = min(slot)
        order = [start]
        cur = slot[start]
        while cur != start:
            if cur not in slot or len(order) > len(slot):
                raise EmbeddingError("not-planar", f"faces around vertex {v} do not close into a disc")
            order.append(cur)
            cur = slot[cur]
        if len(order) != len(slot):
            raise EmbeddingError("not-planar", f"vertex {v} is a pinch point")
        rot[v] = order
    return rot


def default_outer_face(rotation: Mapping[int, Sequence[int]], g: int) -> Tuple[int, int, int]:
    """The traced face through the dart g -> (first neighbour of g)."""
    ns = rotation[g]
    x = ns[0]
    pos = list(rotation[x])
    w = pos[(pos.index(g) + 1) % len(pos)]
    return (g, x, w)


def from_left_faces(faces: Iterable[Sequence[int]], g: int, outer_face: Optional[Sequence[int]] = None, check: bool = True) -> PlaneTriangulation:
    rot = rotation_from_left_faces(faces)
    return PlaneTriangulation.from_rotation(rot, g, outer_face, check=check)


def relabel(G: PlaneTriangulation, mapping: Mapping[int, int]) -> PlaneTriangulation:
    rot = {mapping[v]: [mapping[u] for u in ns] for v, ns in G.rotation.items()}
    return PlaneTriangulation(rot, mapping[G.g], [mapping[x] for x in G.outer_face], check=False)


def compact_labels(G: PlaneTriangulation, start: int = 1) -> PlaneTriangulation:
    """Relabel vertices as consecutive integers, g first, then the rest in id order."""
    order = [G.g] + [v for v in G.vertices if v != G.g]
    return relabel(G, {v: start + k for k, v in enumerate(order)})


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------


def _validate(G: PlaneTriangulation) -> None:
    rot = G.rotation
    n = len(rot)
    if n < 4:
        raise EmbeddingError("too-small", f"a triangulation needs at least 4 vertices, got {n}")
    for v, ns in rot.items():
        if v in ns:
            raise EmbeddingError("not-simple", f"loop at vertex {v}")
        if len(set(ns)) != len(ns):
            raise EmbeddingError("not-simple", f"repeated neighbour in rotation of {v}")
        for u in ns:
            if u not in rot:
                raise EmbeddingError("asymmetric", f"vertex {v} lists unknown neighbour {u}")
            if v not in G._pos[u]:
                raise EmbeddingError("asymmetric", f"{u} is a neighbour of {v} but not conversely")
    m = G.num_edges()
    faces = _trace_all(G)
    for f in faces:
        if len(f) != 3:
            raise EmbeddingError("not-triangle", f"face trace does not close as triangle: {' '.join(map(str, f[:8]))}")
    if m != 3 * n - 6 or len(faces) != 2 * n - 4:
        raise EmbeddingError("not-planar", f"Euler check failed: |V|={n}, |E|={m}, |F|={len(faces)}")
    if G.g not in rot:
        raise EmbeddingError("g-not-outer", f"g={G.g} is not a vertex")
    if len(G.outer_face) != 3 or G.g not in G.outer_face:
        raise EmbeddingError("g-not-outer", "g must lie on the declared outer face")
    if _face_index(faces, G.outer_face) is None:
        raise EmbeddingError("outer-face", f"declared outer face {G.outer_face} is not a traced face")
    if n <= 40 and not _three_connected(G):
        raise EmbeddingError("not-3-connected", "graph is not 3-connected")


def _trace_all(G: PlaneTriangulation) -> List[Tuple[int, ...]]:
    seen = set()
    faces = []
    for u in sorted(G.rotation):
        for v in G.rotation[u]:
            if (u, v) in seen:
                continue
            face = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                if len(face) > 2 * len(G.rotation) + 2:
                    raise EmbeddingError("not-triangle", "face trace does not close")
                a, b = b, G.succ(b, a)
            if (a, b) != (u, v):
                raise EmbeddingError("not-triangle", "face trace does not close as triangle")
            faces.append(tuple(face))
    return faces


def _face_index(faces: Sequence[Sequence[int]], triple: Sequence[int]) -> Optional[int]:
    t = tuple(triple)
    rots = {t, t[1:] + t[:1], t[2:] + t[:2]}
    for k, f in enumerate(faces):
        if tuple(f) in rots:
            return k
    return None


def _three_connected(G: PlaneTriangulation) -> bool:
    """Check that removing any two vertices leaves the graph connected."""
    vs = G.vertices
    for i, a in enumerate(vs):
        for b in vs[i + 1:]:
            rest = [v for v in vs if v != a and v != b]
            seen = {rest[0]}
            stack = [rest[0]]
            while stack:
                x = stack.pop()
                for y in G.rotation[x]:
                    if y != a and y != b and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != len(rest):
                return False
    return True


# --------------------------------------------------------------------------
# Faces and duality
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FaceSet:
    faces: Tuple[Tuple[int, int, int], ...]
    outer_index: int

    def face_of_dart(self) -> Dict[Dart, int]:
        out = {}
        for k, (a, b, c) in enumerate(self.faces):
            out[(a, b)] = k
            out[(b, c)] = k
            out[(c, a)] = k
        return out


def trace_faces(G: PlaneTriangulation) -> FaceSet:
    """Trace every face once; face ids follow the sorted order of their first dart."""
    cached = G._cache.get("faces")
    if cached is None:
        faces = tuple(tuple(f) for f in _trace_all(G))
        idx = _face_index(faces, G.outer_face)
        if idx is None:
            raise EmbeddingError("outer-face", "declared outer face not found")
        cached = FaceSet(faces, idx)  # type: ignore[arg-type]
        G._cache["faces"] = cached
    return cached


class CubicPlaneGraph:
    """Plane cubic graph given by a rotation system (dual of a triangulation)."""

    def __init__(self, rotation: Mapping[int, Sequence[int]]):
        self.rotation: Dict[int, Tuple[int, ...]] = {v: tuple(ns) for v, ns in rotation.items()}
        self._pos = {v: {u: k for k, u in enumerate(ns)} for v, ns in self.rotation.items()}
        self.faces = self._trace()
        self.face_sizes = {k: len(f) for k, f in enumerate(self.faces)}

    def _trace(self) -> List[Tuple[int, ...]]:
        seen = set()
        faces = []
        for u in sorted(self.rotation):
            for v in self.rotation[u]:
                if (u, v) in seen:
                    continue
                face = []
                a, b = u, v
                while (a, b) not in seen:
                    seen.add((a, b))
                    face.append(a)
                    ns = self.rotation[b]
                    a, b = b, ns[(self._pos[b][a] + 1) % len(ns)]
                faces.append(tuple(face))
        return faces

    def is_cubic(self) -> bool:
        return all(len(ns) == 3 and len(set(ns)) == 3 for ns in self.rotation.values())

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._pos[u]

    def __len__(self) -> int:
        return len(self.rotation)


def dual_graph(G: PlaneTriangulation) -> CubicPlaneGraph:
    """Dual cubic graph; dual vertex k is face k of :func:`trace_faces`.

    The rotation at a dual vertex lists the faces across the edges of its
    triangle in traced order, which makes each dual face trace around exactly
    one primal vertex.
    """
    fs = trace_faces(G)
    fod = fs.face_of_dart()
    rot = {}
    for k, (a, b, c) in enumerate(fs.faces):
        rot[k] = [fod[(b, a)], fod[(c, b)], fod[(a, c)]]
    dual = CubicPlaneGraph(rot)
    return dual


def dual_face_of_vertex(G: PlaneTriangulation) -> Dict[int, int]:
    """Map primal vertex -> index of the dual face surrounding it."""
    dual = dual_graph(G)
    fs = trace_faces(G)
    members = {}
    for k, f in enumerate(dual.faces):
        common = set(fs.faces[f[0]])
        for x in f[1:]:
            common &= set(fs.faces[x])
        (v,) = common if len(common) == 1 else (None,)
        members[v] = k
    return members


# --------------------------------------------------------------------------
# Mirror, canonical form, op-equivalence
# --------------------------------------------------------------------------


def mirror_reflect(G: PlaneTriangulation) -> PlaneTriangulation:
    rot = {v: tuple(reversed(ns)) for v, ns in G.rotation.items()}
    a, b, c = G.outer_face
    return PlaneTriangulation(rot, G.g, (a, c, b), check=False)


def _bfs_code(G: PlaneTriangulation, first: int, best: Optional[List[int]]) -> Optional[Tuple[List[int], Dict[int, int]]]:
    """Code of the BFS labelling rooted at the dart g->first.

    Returns None as soon as the code exceeds ``best`` lexicographically.
    """
    rot = G.rotation
    pos = G._pos
    label = {G.g: 1}
    ref = {G.g: first}
    order = [G.g]
    code: List[int] = []
    nxt = 2
    k = 0
    bi = 0
    smaller = best is None
    while k < len(order):
        v = order[k]
        k += 1
        ns = rot[v]
        d = len(ns)
        s = pos[v][ref[v]]
        for t in range(d):
            u = ns[(s + t) % d]
            lab = label.get(u)
            if lab is None:
                lab = nxt
                nxt += 1
                label[u] = lab
                ref[u] = v
                order.append(u)
            code.append(lab)
            if not smaller:
                b = best[bi]
                if lab > b:
                    return None
                if lab < b:
                    smaller = True
                bi += 1
        code.append(0)
        if not smaller:
            b = best[bi]
            if b > 0:
                return None
            bi += 1
    return code, label


def canonical_form(G: PlaneTriangulation) -> Tuple[Tuple[int, ...], Dict[int, int]]:
    """Lexicographically least BFS code over all darts leaving g, with its labelling."""
    cached = G._cache.get("canon")
    if cached is not None:
        return cached
    best: Optional[List[int]] = None
    best_label: Dict[int, int] = {}
    for x in G.rotation[G.g]:
        res = _bfs_code(G, x, best)
        if res is not None:
            code, label = res
            if best is None or code < best:
                best, best_label = code, label
    out = (tuple(best), best_label)  # type: ignore[arg-type]
    G._cache["canon"] = out
    return out


def canonical_code(G: PlaneTriangulation) -> bytes:
    cached = G._cache.get("code")
    if cached is None:
        code, _ = canonical_form(G)
        cached = array("H", code).tobytes() if max(code) < 65536 else array("L", code).tobytes()
        G._cache["code"] = cached
    return cached


def op_isomorphism(G1: PlaneTriangulation, G2: PlaneTriangulation) -> Optional[Dict[int, int]]:
    """An orientation-preserving isomorphism G1 -> G2 sending g1 to g2, or None."""
    if len(G1) != len(G2):
        return None
    c1, l1 = canonical_form(G1)
    c2, l2 = canonical_form(G2)
    if c1 != c2:
        return None
    inv2 = {lab: v for v, lab in l2.items()}
    return {v: inv2[lab] for v, lab in l1.items()}


def op_equivalent(G1: PlaneTriangulation, G2: PlaneTriangulation) -> bool:
    return len(G1) == len(G2) and canonical_code(G1) == canonical_code(G2)


def canonical_labels(G: PlaneTriangulation) -> Dict[int, int]:
    return canonical_form(G)[1]


def canonical_relabel(G: PlaneTriangulation) -> PlaneTriangulation:
    """Copy of G with vertices renamed by their canonical BFS labels (g becomes 1)."""
    labels = canonical_labels(G)
    H = relabel(G, labels)
    # normalise the declared outer face to the one through the canonical root dart
    H2 = PlaneTriangulation(H.rotation, H.g, _outer_through(H, H.g, 2), check=False)
    return H2


def _outer_through(G: PlaneTriangulation, g: int, x: int) -> Tuple[int, int, int]:
    return (g, x, G.succ(x, g))


# --------------------------------------------------------------------------
# Text formats
# --------------------------------------------------------------------------


def parse_triangulation(text: str) -> PlaneTriangulation:
    """Parse the ``triangulation v1`` graph file format."""
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((no, body))
    if not lines or lines[0][1] != "triangulation v1":
        no = lines[0][0] if lines else 1
        raise EmbeddingError("syntax", "expected header 'triangulation v1'", no, 1)
    g: Optional[int] = None
    outer: Optional[List[int]] = None
    rot: Dict[int, List[int]] = {}
    for no, body in lines[1:]:
        if body.startswith("g="):
            g = _parse_int(body[2:].strip(), no, 3)
        elif body.startswith("outer="):
            parts = body[6:].split()
            if len(parts) != 3:
                raise EmbeddingError("syntax", "outer= needs exactly three identifiers", no, 7)
            outer = [_parse_int(p, no, 7) for p in parts]
        elif ":" in body:
            head, tail = body.split(":", 1)
            v = _parse_int(head.strip(), no, 1)
            if v in rot:
                raise EmbeddingError("syntax", f"vertex {v} listed twice", no, 1)
            col = len(head) + 2
            rot[v] = [_parse_int(p, no, col) for p in tail.split()]
        else:
            raise EmbeddingError("syntax", f"unrecognised line {body!r}", no, 1)
    if g is None:
        raise EmbeddingError("syntax", "missing g= line")
    if outer is None:
        raise EmbeddingError("syntax", "missing outer= line")
    if g not in rot:
        raise EmbeddingError("g-not-outer", f"g={g} has no rotation line")
    return PlaneTriangulation(rot, g, outer, check=True)


def _parse_int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise EmbeddingError("syntax", f"expected an integer, got {tok!r}", line, col) from None


def format_triangulation(G: PlaneTriangulation, comment: Optional[str] = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append("triangulation v1")
    out.append(f"g={G.g}")
    out.append("outer=" + " ".join(map(str, G.outer_face)))
    for v in G.vertices:
        out.append(f"{v}: " + " ".join(map(str, G.rotation[v])))
    return "\n".join(out) + "\n"


def to_dot(G: PlaneTriangulation, marked: Iterable[int] = (), name: str = "G") -> str:
    marked = set(marked)
    out = [f"graph {name} {{", "  node [shape=circle];"]
    for v in G.vertices:
        attrs = []
        if v == G.g:
            attrs.append('style=filled fillcolor="lightgrey"')
        if v in marked:
            attrs.append("shape=doublecircle")
        out.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for u, v in G.edges():
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"

"""Pattern matching and replacement on plane triangulations.

A pattern is a semi-triangulation: a 2-connected plane graph whose faces are
triangles except for one distinguished face bounded by the cycle ``sigma``.
``sigma`` is always listed with the proper (triangulated) region on its left.
At a boundary vertex s with successor q and predecessor p on sigma, the
rotation of s therefore reads ``[q, ...interior..., p]``.

Operations A, B, C, Bbar and Cbar, derivation traces, and the isomorph-free
enumerator are built on top of the single replacement routine
:func:`replace_patterns`.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .family import PeelError, bfs_levels, check_family_membership, is_member, layer_cycle, peel
from .planar_core import (
    PlaneTriangulation,
    canonical_code,
    default_outer_face,
    op_equivalent,
)

log = logging.getLogger(__name__)

EDGE_OPS = ("B", "C", "Bbar", "Cbar")


class RewriteError(ValueError):
    """A site precondition or a replacement invariant failed."""


class TraceError(ValueError):
    def __init__(self, message: str, step: Optional[int] = None):
        self.step = step
        super().__init__(message if step is None else f"step {step}: {message}")


# --------------------------------------------------------------------------
# Patterns
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Pattern:
    rotation: Mapping[int, Tuple[int, ...]]
    sigma: Tuple[int, ...]
    d: int
    D: FrozenSet[int] = frozenset()
    region: str = "bounded"
    name: str = ""

    @classmethod
    def from_left_faces(cls, faces: Iterable[Sequence[int]], sigma: Sequence[int], d: int,
                        D: Iterable[int] = (), region: str = "bounded", name: str = "") -> "Pattern":
        nxt: Dict[int, Dict[int, int]] = {}
        for a, b, c in faces:
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                slot = nxt.setdefault(x, {})
                if y in slot:
                    raise ValueError(f"directed edge {x}->{y} lies in two faces")
                slot[y] = z
        sig = tuple(sigma)
        on_sigma = {s: k for k, s in enumerate(sig)}
        rot: Dict[int, Tuple[int, ...]] = {}
        for v, slot in nxt.items():
            if v in on_sigma:
                k = on_sigma[v]
                start = sig[(k + 1) % len(sig)]
            else:
                start = min(slot)
            order = [start]
            cur = start
            while cur in slot and len(order) <= len(slot) + 1:
                cur = slot[cur]
                if cur == start:
                    break
                order.append(cur)
            rot[v] = tuple(order)
        p = cls(rot, sig, d, frozenset(D), region, name)
        p.validate()
        return p

    # -- structure ---------------------------------------------------
    @property
    def vertices(self) -> List[int]:
        return sorted(self.rotation)

    @property
    def interior(self) -> List[int]:
        s = set(self.sigma)
        return sorted(v for v in self.rotation if v not in s)

    def edges(self) -> Set[FrozenSet[int]]:
        return {frozenset((u, v)) for u, ns in self.rotation.items() for v in ns}

    def chords(self) -> Set[FrozenSet[int]]:
        m = len(self.sigma)
        ring = {frozenset((self.sigma[k], self.sigma[(k + 1) % m])) for k in range(m)}
        s = set(self.sigma)
        return {e for e in self.edges() if e <= s and e not in ring}

    def faces(self) -> List[Tuple[int, int, int]]:
        """Proper faces as left-oriented triples, each listed once from its least vertex."""
        out = set()
        s = set(self.sigma)
        for v, ns in self.rotation.items():
            k = len(ns)
            pairs = range(k - 1) if v in s else range(k)
            for t in pairs:
                f = (v, ns[t], ns[(t + 1) % k])
                j = f.index(min(f))
                out.add(f[j:] + f[:j])
        return sorted(out)

    def sector(self, s: int) -> Tuple[int, ...]:
        """Neighbours of a boundary vertex strictly inside the proper region."""
        return tuple(self.rotation[s][1:-1])

    def validate(self) -> None:
        sig = self.sigma
        m = len(sig)
        if m < 3 or len(set(sig)) != m:
            raise ValueError("sigma must be a cycle of at least 3 distinct vertices")
        if self.d not in sig:
            raise ValueError("anchor d must lie on sigma")
        if not set(self.D) <= set(self.rotation):
            raise ValueError("marked set contains unknown vertices")
        if self.region not in ("bounded", "unbounded"):
            raise ValueError("region must be bounded or unbounded")
        for k, s in enumerate(sig):
            rot = self.rotation.get(s)
            q, p = sig[(k + 1) % m], sig[k - 1]
            if not rot or rot[0] != q or rot[-1] != p:
                raise ValueError(f"rotation at boundary vertex {s} must run from {q} to {p}")
        pos = {v: {u: t for t, u in enumerate(ns)} for v, ns in self.rotation.items()}
        for v, ns in self.rotation.items():
            if len(set(ns)) != len(ns) or v in ns:
                raise ValueError(f"rotation at {v} is not simple")
            for u in ns:
                if v not in pos.get(u, {}):
                    raise ValueError(f"edge {v}-{u} is not symmetric")
        for a, b, c in self.faces():
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                ns = self.rotation[x]
                t = pos[x][y]
                if t + 1 >= len(ns) and x in set(sig):
                    raise ValueError("proper face runs past the boundary")
                if ns[(t + 1) % len(ns)] != z:
                    raise ValueError(f"face {a} {b} {c} is not a triangle")
        # Euler: V - E + F = 2 counting the distinguished face
        if len(self.rotation) - len(self.edges()) + len(self.faces()) + 1 != 2:
            raise ValueError("pattern is not a plane semi-triangulation")
        # 2-connected: removing any vertex leaves it connected
        vs = self.vertices
        for x in vs:
            rest = [v for v in vs if v != x]
            seen = {rest[0]}
            stack = [rest[0]]
            while stack:
                y = stack.pop()
                for z in self.rotation[y]:
                    if z != x and z not in seen:
                        seen.add(z)
                        stack.append(z)
            if len(seen) != len(rest):
                raise ValueError("pattern is not 2-connected")


def boundary_alignment(source: Pattern, target: Pattern) -> Optional[Dict[int, int]]:
    """Map sigma(source) onto sigma(target) preserving orientation and the anchor."""
    if len(source.sigma) != len(target.sigma):
        return None
    ks = source.sigma.index(source.d)
    kt = target.sigma.index(target.d)
    m = len(source.sigma)
    return {source.sigma[(ks + t) % m]: target.sigma[(kt + t) % m] for t in range(m)}


def sigma_compatible(new: Pattern, old: Pattern, old_marked: Optional[Iterable[int]] = None) -> bool:
    """Whether ``new`` may replace ``old``.

    The boundary map must respect orientation and anchor, every chord of
    ``new`` must be a chord of ``old``, and the marked boundary vertices must
    agree (``old_marked`` overrides ``old.D`` when the old side comes from a
    configuration with its own marking).
    """
    phi = boundary_alignment(new, old)
    if phi is None:
        return False
    old_chords = old.chords()
    for e in new.chords():
        x, y = tuple(e)
        if frozenset((phi[x], phi[y])) not in old_chords:
            return False
    marked = set(old.D if old_marked is None else old_marked)
    for s in new.sigma:
        if (s in new.D) != (phi[s] in marked):
            return False
    return True


# --------------------------------------------------------------------------
# Matching and replacement
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfigurationMatch:
    pattern: Pattern
    embedding: Mapping[int, int]
    proper_faces: FrozenSet[Tuple[int, int, int]] = field(default=frozenset())

    def image(self, v: int) -> int:
        return self.embedding[v]

    def interior_image(self) -> Set[int]:
        return {self.embedding[v] for v in self.pattern.interior}


def _norm(f: Tuple[int, int, int]) -> Tuple[int, int, int]:
    j = f.index(min(f))
    return f[j:] + f[:j]


def match_configuration(G: PlaneTriangulation, p: Pattern, seeds: Mapping[int, int]) -> Optional[ConfigurationMatch]:
    """Embed the pattern into G starting from a partial vertex map.

    The seeds must pin down at least one proper face edge; the rest follows
    face by face.  Returns None when the faces do not close up in G.
    """
    phi: Dict[int, int] = dict(seeds)
    for u in phi.values():
        if u not in G:
            return None
    faces = p.faces()
    todo = list(faces)
    progress = True
    while todo and progress:
        progress = False
        rest = []
        for f in todo:
            placed = False
            for t in range(3):
                a, b, c = f[t], f[(t + 1) % 3], f[(t + 2) % 3]
                if a in phi and b in phi:
                    ga, gb = phi[a], phi[b]
                    if not G.adjacent(ga, gb):
                        return None
                    gc = G.left_apex(ga, gb)
                    if c in phi and phi[c] != gc:
                        return None
                    phi[c] = gc
                    placed = True
                    break
            if placed:
                progress = True
            else:
                rest.append(f)
        todo = rest
    if todo or set(phi) != set(p.rotation):
        return None
    if len(set(phi.values())) != len(phi):
        return None
    for v in p.interior:
        if G.degree(phi[v]) != len(p.rotation[v]):
            return None
    images = frozenset(_norm((phi[a], phi[b], phi[c])) for a, b, c in faces)
    return ConfigurationMatch(p, phi, images)


def replace_patterns(G: PlaneTriangulation, W: Optional[Iterable[int]],
                     matches: Sequence[Tuple[ConfigurationMatch, Pattern]],
                     check: bool = True) -> Tuple[PlaneTriangulation, Optional[Set[int]]]:
    """Cut out each matched configuration and glue in its replacement.

    Returns the new triangulation and the updated marked set
    (W minus the configuration vertices, plus the images of each D).
    """
    Wset = None if W is None else set(W)
    if not matches:
        return G, Wset
    seen_faces: Set[Tuple[int, int, int]] = set()
    seen_inner: Set[int] = set()
    for m, new in matches:
        if seen_faces & m.proper_faces:
            raise RewriteError("configurations overlap")
        inner = m.interior_image()
        if seen_inner & inner:
            raise RewriteError("configurations share interior vertices")
        seen_faces |= m.proper_faces
        seen_inner |= inner
        if Wset is not None:
            marked = {v for v in m.pattern.rotation if m.embedding[v] in Wset}
        else:
            marked = new_marked_as_old(new, m.pattern)
        if not sigma_compatible(new, m.pattern, marked):
            raise RewriteError(f"pattern {new.name or '?'} is not sigma-compatible with the configuration")
    rot: Dict[int, List[int]] = {v: list(ns) for v, ns in G.rotation.items()}
    next_id = G.max_id() + 1
    out_W = None if Wset is None else set(Wset)
    for m, new in matches:
        old = m.pattern
        phi = m.embedding
        align = boundary_alignment(new, old)
        assert align is not None
        psi: Dict[int, int] = {s: phi[align[s]] for s in new.sigma}
        for v in new.interior:
            psi[v] = next_id
            next_id += 1
        for v in old.interior:
            del rot[phi[v]]
        for s in new.sigma:
            gs = psi[s]
            k = new.sigma.index(s)
            q = psi[new.sigma[(k + 1) % len(new.sigma)]]
            p = psi[new.sigma[k - 1]]
            cur = rot[gs]
            iq = cur.index(q)
            seq = cur[iq:] + cur[:iq]
            ip = seq.index(p)
            rot[gs] = [q] + [psi[u] for u in new.sector(s)] + seq[ip:]
        for v in new.interior:
            rot[psi[v]] = [psi[u] for u in new.rotation[v]]
        if out_W is not None:
            out_W -= set(phi.values())
            out_W |= {psi[v] for v in new.D}
    outer = G.outer_face if _still_face(rot, G.outer_face) else default_outer_face(rot, G.g)
    H = PlaneTriangulation(rot, G.g, outer, check=check)
    return H, out_W


def new_marked_as_old(new: Pattern, old: Pattern) -> Set[int]:
    """Marked set on ``old`` that agrees with ``new`` on the boundary (used when markings are irrelevant)."""
    phi = boundary_alignment(new, old) or {}
    return {phi[s] for s in new.sigma if s in new.D}


def _still_face(rot: Mapping[int, Sequence[int]], face: Sequence[int]) -> bool:
    a, b, c = face
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        ns = rot.get(y)
        if ns is None or x not in ns:
            return False
        if ns[(list(ns).index(x) + 1) % len(ns)] != z:
            return False
    return True


# --------------------------------------------------------------------------
# The edge-site patterns
# --------------------------------------------------------------------------

# pattern-local names: a = x_i, b = x_{i+1}, d = g, y1/y2 the next layer, v on the layer after
_A, _B, _D, _Y1, _Y2, _V, _W, _X = 1, 2, 3, 4, 5, 6, 7, 8


def _edge_patterns() -> Dict[str, Tuple[Pattern, Pattern]]:
    a, b, d, y1, y2, v, w, x = _A, _B, _D, _Y1, _Y2, _V, _W, _X
    pairs = {}
    pairs["B"] = (
        Pattern.from_left_faces([(a, d, b)], (a, d, b), d, name="B site"),
        Pattern.from_left_faces([(a, d, w), (d, b, w), (b, a, w)], (a, d, b), d, name="B replacement"),
    )
    pairs["C"] = (
        Pattern.from_left_faces([(a, d, b), (a, b, y1)], (a, d, b, y1), d, name="C site"),
        Pattern.from_left_faces([(a, d, w), (d, b, w), (b, y1, w), (y1, a, w)], (a, d, b, y1), d, name="C replacement"),
    )
    bar_site = [(a, d, b), (a, b, y1), (y1, b, y2)]
    bar_replacement = [(a, d, x), (x, d, b), (a, x, y1), (y1, x, w), (x, b, w), (w, b, y2)]
    pairs["Bbar"] = (
        Pattern.from_left_faces(bar_site, (a, d, b, y2, y1), d, name="Bbar site"),
        Pattern.from_left_faces(bar_replacement + [(y1, w, y2)], (a, d, b, y2, y1), d, name="Bbar replacement"),
    )
    pairs["Cbar"] = (
        Pattern.from_left_faces(bar_site + [(y1, y2, v)], (a, d, b, y2, v, y1), d, name="Cbar site"),
        Pattern.from_left_faces(bar_replacement + [(y2, v, w), (v, y1, w)], (a, d, b, y2, v, y1), d, name="Cbar replacement"),
    )
    return pairs


EDGE_PATTERNS = _edge_patterns()


def edge_site(G: PlaneTriangulation, kind: str, i: int) -> Dict[int, int]:
    """Resolve and check the site of an edge operation at outer edge index ``i``.

    Returns the pattern-local seed map.  Raises RewriteError naming the failed
    condition.
    """
    if kind not in EDGE_OPS:
        raise RewriteError(f"unknown operation {kind!r}")
    c = layer_cycle(G, 1).vertices
    m = len(c)
    if not 0 <= i < m:
        raise RewriteError(f"edge index {i} outside 0..{m - 1}")
    lv = bfs_levels(G).level
    xa, xb = c[i], c[(i + 1) % m]
    seeds = {_A: xa, _B: xb, _D: G.g}
    if kind == "B":
        for z in (xa, xb):
            if G.degree(z) > 4:
                raise RewriteError(f"B needs outer degrees <= 4, vertex {z} has degree {G.degree(z)}")
        return seeds
    y1 = G.left_apex(xa, xb)
    if lv[y1] != 2:
        raise RewriteError(f"{kind} needs the inner apex {y1} of edge {xa}-{xb} on level 2")
    if kind != "Cbar" and G.degree(y1) > 5:
        raise RewriteError(f"{kind} needs degree <= 5 at {y1}, found {G.degree(y1)}")
    seeds[_Y1] = y1
    if kind == "C":
        return seeds
    y2 = G.left_apex(y1, xb)
    if lv[y2] != 2 or y2 == y1:
        raise RewriteError(f"{kind} needs the second apex {y2} on level 2")
    if kind == "Bbar" and G.degree(y2) > 5:
        raise RewriteError(f"{kind} needs degree <= 5 at {y2}, found {G.degree(y2)}")
    seeds[_Y2] = y2
    if kind == "Bbar":
        return seeds
    v = G.left_apex(y1, y2)
    if lv[v] != 3:
        raise RewriteError(f"Cbar needs the apex {v} of {y1}-{y2} on level 3")
    if G.degree(v) > 5:
        raise RewriteError(f"Cbar needs degree <= 5 at {v}, found {G.degree(v)}")
    seeds[_V] = v
    return seeds


def apply_edge_operation(G: PlaneTriangulation, kind: str, i: int, check: bool = True) -> PlaneTriangulation:
    seeds = edge_site(G, kind, i)
    gamma, delta = EDGE_PATTERNS[kind]
    m = match_configuration(G, gamma, seeds)
    if m is None:
        raise RewriteError(f"{kind} site at edge {i} does not have the required faces")
    H, _ = replace_patterns(G, None, [(m, delta)], check=check)
    if check and not is_member(H):
        raise RewriteError(f"{kind} at edge {i} left the family")
    return H


def edge_operation_sites(G: PlaneTriangulation, kind: str) -> List[int]:
    out = []
    for i in range(len(layer_cycle(G, 1).vertices)):
        try:
            seeds = edge_site(G, kind, i)
        except RewriteError:
            continue
        if match_configuration(G, EDGE_PATTERNS[kind][0], seeds) is not None:
            out.append(i)
    return out


def apply_A(G: PlaneTriangulation, check: bool = True) -> PlaneTriangulation:
    """Wrap G in a new outer layer: one new vertex per edge of c(G), all joined to g."""
    c = layer_cycle(G, 1).vertices
    m = len(c)
    g = G.g
    base = G.max_id() + 1
    xs = [base + k for k in range(m)]
    rot: Dict[int, List[int]] = {}
    for v, ns in G.rotation.items():
        if v == g:
            continue
        if v in c:
            k = c.index(v)
            t = ns.index(g)
            rot[v] = list(ns[:t]) + [xs[k], xs[(k + 1) % m]] + list(ns[t + 1:])
        else:
            rot[v] = list(ns)
    for k in range(m):
        rot[xs[k]] = [xs[k - 1], g, xs[(k + 1) % m], c[k], c[k - 1]]
    rot[g] = xs[::-1]
    H = PlaneTriangulation(rot, g, (g, xs[0], xs[1 % m]), check=check)
    return H


# --------------------------------------------------------------------------
# Derivation traces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    kind: str
    site: Optional[int] = None

    def text(self) -> str:
        return f"step {self.kind}" + ("" if self.site is None else f" {self.site}")


@dataclass(frozen=True)
class DerivationTrace:
    start: str
    param: Optional[int]
    steps: Tuple[Step, ...] = ()

    def serialize(self) -> str:
        head = f"start {self.start}" + ("" if self.param is None else f" {self.param}")
        return "\n".join([head] + [s.text() for s in self.steps]) + "\n"

    def extended(self, step: Step) -> "DerivationTrace":
        return DerivationTrace(self.start, self.param, self.steps + (step,))

    def without(self, k: int) -> "DerivationTrace":
        return DerivationTrace(self.start, self.param, self.steps[:k] + self.steps[k + 1:])


def parse_trace(text: str) -> DerivationTrace:
    start = None
    param = None
    steps = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "start":
            if start is not None or len(parts) not in (2, 3):
                raise TraceError(f"line {no}: malformed start line")
            start = parts[1]
            param = int(parts[2]) if len(parts) == 3 else None
        elif parts[0] == "step":
            if start is None:
                raise TraceError(f"line {no}: step before start")
            kind = parts[1] if len(parts) > 1 else ""
            if kind == "A" and len(parts) == 2:
                steps.append(Step("A"))
            elif kind in EDGE_OPS and len(parts) == 3:
                steps.append(Step(kind, int(parts[2])))
            else:
                raise TraceError(f"line {no}: malformed step {line!r}")
        else:
            raise TraceError(f"line {no}: unrecognised line {line!r}")
    if start is None:
        raise TraceError("trace has no start line")
    return DerivationTrace(start, param, tuple(steps))


def start_graph(name: str, param: Optional[int]) -> PlaneTriangulation:
    from .bases import path_graph, strip_graph, sun_graph

    if name == "G" and param is not None and param >= 3:
        return strip_graph(param)
    if name == "F" and param is not None and param >= 1:
        return path_graph(param)
    if name == "J" and param is None:
        return sun_graph()
    raise TraceError(f"unknown starting graph {name} {param if param is not None else ''}".strip())


def apply_step(G: PlaneTriangulation, step: Step, check: bool = True) -> PlaneTriangulation:
    if step.kind == "A":
        return apply_A(G, check=check)
    return apply_edge_operation(G, step.kind, step.site if step.site is not None else -1, check=check)


def replay(trace: DerivationTrace) -> PlaneTriangulation:
    G = start_graph(trace.start, trace.param)
    for k, step in enumerate(trace.steps):
        try:
            G = apply_step(G, step)
        except (RewriteError, ValueError) as exc:
            raise TraceError(str(exc), k) from None
    return G


# --------------------------------------------------------------------------
# Enumeration
# --------------------------------------------------------------------------


@dataclass
class Enumeration:
    graphs: Dict[bytes, PlaneTriangulation]
    traces: Dict[bytes, DerivationTrace]

    def codes(self) -> List[bytes]:
        return sorted(self.graphs)


def children(G: PlaneTriangulation, max_vertices: int, ops: Sequence[str] = ("A", "B", "C")) -> List[Tuple[Step, PlaneTriangulation]]:
    out = []
    m = len(layer_cycle(G, 1).vertices)
    if "A" in ops and len(G) + m <= max_vertices:
        out.append((Step("A"), apply_A(G, check=False)))
    if len(G) + 1 <= max_vertices:
        for kind in ("B", "C", "Bbar", "Cbar"):
            if kind not in ops:
                continue
            for i in edge_operation_sites(G, kind):
                out.append((Step(kind, i), apply_edge_operation(G, kind, i, check=False)))
    return out


def _expand(args):
    rot, g, outer, max_vertices, ops = args
    G = PlaneTriangulation(rot, g, outer, check=False)
    res = []
    for step, H in children(G, max_vertices, ops):
        res.append((step, canonical_code(H), H.rotation, H.outer_face))
    return res


def close_under(starts: Sequence[Tuple[DerivationTrace, PlaneTriangulation]], max_vertices: int,
                ops: Sequence[str] = ("A", "B", "C"), jobs: int = 1) -> Enumeration:
    """Isomorph-free closure of ``starts`` under ``ops`` up to ``max_vertices``.

    Graphs are expanded in order of vertex count; the first trace reaching a
    class (in sorted code order within a round) is kept, so results do not
    depend on ``jobs``.
    """
    graphs: Dict[bytes, PlaneTriangulation] = {}
    traces: Dict[bytes, DerivationTrace] = {}
    pending: Dict[int, List[bytes]] = {}
    for tr, G in starts:
        if len(G) > max_vertices:
            continue
        code = canonical_code(G)
        if code not in graphs:
            graphs[code] = G
            traces[code] = tr
            pending.setdefault(len(G), []).append(code)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while pending:
            n = min(pending)
            batch = sorted(pending.pop(n))
            args = [(graphs[c].rotation, graphs[c].g, graphs[c].outer_face, max_vertices, tuple(ops)) for c in batch]
            if pool is not None:
                results = list(pool.map(_expand, args, chunksize=max(1, len(args) // (4 * jobs))))
            else:
                results = [_expand(a) for a in args]
            for parent, res in zip(batch, results):
                g = graphs[parent].g
                for step, code, rot, outer in res:
                    if code in graphs:
                        continue
                    H = PlaneTriangulation(rot, g, outer, check=False)
                    H._cache["code"] = code
                    graphs[code] = H
                    traces[code] = traces[parent].extended(step)
                    pending.setdefault(len(H), []).append(code)
            log.debug("expanded %d graphs on %d vertices; %d classes so far", len(batch), n, len(graphs))
    finally:
        if pool is not None:
            pool.shutdown()
    return Enumeration(graphs, traces)


def starting_graphs(max_vertices: int) -> List[Tuple[DerivationTrace, PlaneTriangulation]]:
    from .bases import path_graph, strip_graph

    out = [(DerivationTrace("G", 3), strip_graph(3))]
    n = 1
    while True:
        F = path_graph(n)
        if len(F) > max_vertices:
            break
        out.append((DerivationTrace("F", n), F))
        n += 1
    return out


def enumerate_family(max_vertices: int, height: Optional[int] = None, jobs: int = 1) -> Enumeration:
    """Every class of the family with at most ``max_vertices`` vertices, via A, B and C."""
    res = close_under(starting_graphs(max_vertices), max_vertices, ("A", "B", "C"), jobs)
    if height is not None:
        keep = {c for c, G in res.graphs.items() if bfs_levels(G).height == height}
        res = Enumeration({c: res.graphs[c] for c in keep}, {c: res.traces[c] for c in keep})
    return res


# --------------------------------------------------------------------------
# Decomposition
# --------------------------------------------------------------------------


def _remove_outer_vertex(G: PlaneTriangulation, w: int) -> Optional[PlaneTriangulation]:
    """Inverse of B or C at an outer vertex w of degree 3 or 4."""
    ns = list(G.rotation[w])
    g = G.g
    t = ns.index(g)
    seq = ns[t:] + ns[:t]     # g, b, [y], a
    b, a = seq[1], seq[-1]
    inner = seq[2:-1]
    if len(inner) > 1 or G.adjacent(a, b) != (not inner):
        return None
    rot = {v: list(r) for v, r in G.rotation.items() if v != w}
    if inner:
        # undo C: at a, w becomes b; at b, w becomes a
        ra = rot[a]
        ra[ra.index(w)] = b
        rb = rot[b]
        rb[rb.index(w)] = a
    else:
        # undo B: a-b is still an edge, w just goes
        rot[a].remove(w)
        rot[b].remove(w)
    for y in inner:
        rot[y].remove(w)
    rot[g].remove(w)
    if len(rot) < 4:
        return None
    try:
        H = PlaneTriangulation.from_rotation(rot, g, None, check=True)
    except ValueError:
        return None
    return H if is_member(H) else None


def _base_trace(G: PlaneTriangulation) -> Optional[DerivationTrace]:
    from .bases import path_graph, strip_graph

    levels = bfs_levels(G)
    if len(G) == 4:
        return DerivationTrace("G", 3)
    if levels.height == 2:
        top = layer_cycle(G, 2, canonical_start=False)
        if top.kind == "path":
            n = len(top.vertices)
            F = path_graph(n)
            if len(F) == len(G) and op_equivalent(F, G):
                return DerivationTrace("F", n)
    return None


def _site_of(parent: PlaneTriangulation, kind: str, target: bytes) -> Optional[int]:
    for i in edge_operation_sites(parent, kind):
        if canonical_code(apply_edge_operation(parent, kind, i, check=False)) == target:
            return i
    return None


def decompose(G: PlaneTriangulation) -> DerivationTrace:
    """A trace from G_3 or some F_n that rebuilds G using A, B and C."""
    fc = check_family_membership(G)
    if not fc.member:
        raise RewriteError(f"not in the family: {fc.reason}")
    memo: Dict[bytes, Optional[DerivationTrace]] = {}

    def solve(H: PlaneTriangulation) -> Optional[DerivationTrace]:
        code = canonical_code(H)
        if code in memo:
            return memo[code]
        memo[code] = None
        base = _base_trace(H)
        if base is not None:
            memo[code] = base
            return base
        found = None
        c = layer_cycle(H, 1).vertices
        for w in sorted(c, key=lambda v: (H.degree(v), layer_cycle(H, 1).vertices.index(v))):
            if H.degree(w) > 4:
                break
            P = _remove_outer_vertex(H, w)
            if P is None:
                continue
            kind = "B" if H.degree(w) == 3 else "C"
            i = _site_of(P, kind, code)
            if i is None:
                continue
            sub = solve(P)
            if sub is not None:
                found = sub.extended(Step(kind, i))
                break
        if found is None and bfs_levels(H).height >= 2:
            try:
                P = peel(H)
            except PeelError:
                P = None
            if P is not None and canonical_code(apply_A(P, check=False)) == code:
                sub = solve(P)
                if sub is not None:
                    found = sub.extended(Step("A"))
        memo[code] = found
        return found

    tr = solve(G)
    if tr is None:
        raise RewriteError("no decomposition found")
    return tr


def verify_trace(trace: DerivationTrace, target: PlaneTriangulation) -> Tuple[bool, Optional[int], str]:
    try:
        H = replay(trace)
    except TraceError as exc:
        return False, exc.step, str(exc)
    if not op_equivalent(H, target):
        return False, None, "replayed graph is not op-equivalent to the target"
    return True, None, ""


"""Hamiltonian sets for family members, built by induction on height.

Low graphs (height <= 2 with a cyclic top layer, height <= 3 otherwise) are
solved directly: by catalog lookup for the special graphs and otherwise by
the exact frontier search of :mod:`barnette.treedp`.  Higher graphs are
peeled twice, solved recursively for a compatible set U, and lifted: the two
outer layers are added back with U held fixed.  A compatible set is the
mirror image of a (-)compatible set of the mirrored graph.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .catalog import Catalog, default_catalog
from .family import PeelError, bfs_levels, check_family_membership, layer_cycle, peel
from .oracle import flavor_clauses, has_set
from .planar_core import PlaneTriangulation, canonical_code, mirror_reflect, op_isomorphism, trace_faces
from .rewrite import DerivationTrace, RewriteError, apply_A, decompose, match_configuration, replace_patterns
from .treedp import find_tree_set
from .verifier import FLAVORS, verify_hamiltonian_set

log = logging.getLogger(__name__)

__all__ = [
    "ConstructionError",
    "ConstructionResult",
    "SiteClassification",
    "LiftResult",
    "SiteReplacement",
    "construct_hamiltonian_set",
    "base_case_lookup",
    "lift_level2",
    "apply_omega",
    "n_sets",
    "m_sets",
    "omega_bound",
    "decompose",
]

# the exceptional graphs: no compatible set exists
EXCEPTIONAL = ("P", "Q")
# oracle confirmation of an impossibility is attempted up to this size
ORACLE_CONFIRM_LIMIT = 40


class ConstructionError(RuntimeError):
    """kind is one of not-in-family, impossible, recognition."""

    def __init__(self, kind: str, message: str, certified: bool = False):
        self.kind = kind
        self.certified = certified
        super().__init__(message)


@dataclass(frozen=True)
class SiteClassification:
    """Sites of one lift: N-sets over c(K) positions, M-sets over c^2(H) positions."""

    n_sets: Tuple[Tuple[int, ...], ...] = ((), (), (), ())
    m_sets: Tuple[Tuple[int, ...], ...] = ((), (), (), ())
    chosen: Mapping[str, Mapping[int, int]] = field(default_factory=dict)

    def lines(self, prefix: str = "") -> List[str]:
        out = []
        for k, s in enumerate(self.n_sets, start=1):
            out.append(f"{prefix}N{k}=" + " ".join(map(str, s)))
        for k, s in enumerate(self.m_sets, start=1):
            if s:
                out.append(f"{prefix}M{k}=" + " ".join(map(str, s)))
        for name in sorted(self.chosen):
            pairs = " ".join(f"{i}:{j}" for i, j in sorted(self.chosen[name].items()))
            out.append(f"{prefix}{name}={pairs}")
        return out


@dataclass(frozen=True)
class ConstructionResult:
    set: FrozenSet[int]
    flavor: Optional[str]
    requested: str
    trace: Optional[DerivationTrace] = None
    exception: Optional[str] = None
    steps: Tuple[str, ...] = ()

    def lines(self) -> List[str]:
        out = [
            "set=" + " ".join(map(str, sorted(self.set))),
            f"flavor={self.flavor or 'none'}",
            f"requested={self.requested}",
            f"exception={self.exception or 'none'}",
        ]
        out += [f"step={s}" for s in self.steps]
        if self.trace is not None:
            out.append("trace=" + "; ".join(self.trace.serialize().strip().splitlines()))
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


# --------------------------------------------------------------------------
# Helpers
# --------------------------------------------------------------------------


def _catalog_index(cat: Catalog) -> Dict[bytes, Tuple[str, object]]:
    idx = getattr(cat, "_code_index", None)
    if idx is None:
        idx = {}
        for (name, param), entry in cat.base_graphs.items():
            idx.setdefault(canonical_code(entry.graph), (name, entry))
        cat._code_index = idx  # type: ignore[attr-defined]
    return idx


def _lookup(G: PlaneTriangulation, cat: Catalog):
    """(name, entry, iso entry->G) when G is op-equivalent to a catalog base graph."""
    hit = _catalog_index(cat).get(canonical_code(G))
    if hit is None:
        return None
    name, entry = hit
    iso = op_isomorphism(entry.graph, G)
    if iso is None:
        return None
    return name, entry, iso


def exceptional_name(G: PlaneTriangulation, cat: Optional[Catalog] = None) -> Optional[str]:
    cat = cat or default_catalog()
    hit = _lookup(G, cat)
    if hit and hit[0] in EXCEPTIONAL:
        return hit[0]
    return None


def _satisfies(stored: Optional[str], wanted: str) -> bool:
    if stored is None:
        return False
    if wanted == "any":
        return True
    return stored == wanted or stored == "pm"


def _search(G: PlaneTriangulation, flavor: str, fixed: Iterable[int] = (), free: Optional[Iterable[int]] = None):
    fixed = frozenset(fixed)
    if free is None:
        free = [v for v in G.vertices if v != G.g and v not in fixed]
    clauses = list(trace_faces(G).faces) + flavor_clauses(G, flavor)
    return find_tree_set(G, list(free), fixed, clauses)


def is_base_regime(G: PlaneTriangulation) -> bool:
    fc = check_family_membership(G)
    h = bfs_levels(G).height
    return (fc.stratum == 0 and h <= 2) or (fc.stratum != 0 and h <= 3)


# --------------------------------------------------------------------------
# Base cases
# --------------------------------------------------------------------------


def base_case_lookup(G: PlaneTriangulation, flavor: str = "minus", catalog: Optional[Catalog] = None) -> ConstructionResult:
    """A set for a graph of low height: catalog entry if one fits, exact search otherwise."""
    cat = catalog or default_catalog()
    hit = _lookup(G, cat)
    if hit is not None:
        name, entry, iso = hit
        if _satisfies(entry.flavor, flavor):
            S = frozenset(iso[v] for v in entry.marked)
            return ConstructionResult(S, verify_hamiltonian_set(G, S).best_flavor(), flavor,
                                      steps=(f"base-catalog {name}" + ("" if entry.param is None else f" {entry.param}"),))
    S = _search(G, flavor)
    if S is None:
        raise ConstructionError("impossible", f"no {flavor} hamiltonian set exists", certified=True)
    h = bfs_levels(G).height
    return ConstructionResult(S, verify_hamiltonian_set(G, S).best_flavor(), flavor, steps=(f"base-search height={h}",))


# --------------------------------------------------------------------------
# The two-layer lift
# --------------------------------------------------------------------------


def n_sets(K: PlaneTriangulation, U: Iterable[int]) -> Tuple[Tuple[int, ...], ...]:
    """N1..N4 over positions of c(K), 0-based."""
    S = set(U)
    v = layer_cycle(K, 1).vertices
    m = len(v)
    n1 = tuple(i for i in range(m) if v[i] in S and v[(i + 1) % m] not in S)
    n2 = tuple(i for i in range(m) if v[i] in S and v[(i + 1) % m] in S)
    n3 = tuple(i for i in range(m) if v[i] not in S and v[(i + 2) % m] in S)
    n4 = tuple(i for i in range(m) if v[i] not in S and v[(i + 2) % m] not in S)
    return n1, n2, n3, n4


def double_wrap(K: PlaneTriangulation, U: Iterable[int]) -> Tuple[PlaneTriangulation, FrozenSet[int]]:
    """A^2(K) and the set W that U determines in it.

    With c(K) = v_0..v_{m-1}, the middle layer y_i is adjacent to v_{i-1} and
    v_i, and the outer layer x_i to y_{i-1} and y_i.  W adds y_{i+1} for i in
    N1 and x_{i+1} for every other i.
    """
    S = set(U)
    A1 = apply_A(K, check=False)
    A2 = apply_A(A1, check=False)
    v = layer_cycle(K, 1).vertices
    m = len(v)
    y = [K.max_id() + 1 + k for k in range(m)]
    x = [next(z for z in A2.rotation[y[k]] if z > A1.max_id() and A2.adjacent(z, y[k - 1])) for k in range(m)]
    n1 = set(n_sets(K, S)[0])
    W = set(S)
    for i in range(m):
        W.add(y[(i + 1) % m] if i in n1 else x[(i + 1) % m])
    return A2, frozenset(W)


@dataclass(frozen=True)
class LiftResult:
    graph: PlaneTriangulation
    set: FrozenSet[int]
    sites: SiteClassification
    via: str                      # "identity" when the target is A^2(K) itself, else "band"


def lift_level2(Gm2: PlaneTriangulation, U: Iterable[int], target: Optional[PlaneTriangulation] = None) -> LiftResult:
    """Extend a hamiltonian set of Gm2 to a (-)compatible set of a graph two layers higher.

    Without a target the result is A^2(Gm2) with W.  With a target that is
    op-equivalent to A^2(Gm2), W is carried over.  Otherwise the two outer
    layers of the target are filled in by exact search with U held fixed.
    """
    U = frozenset(U)
    A2, W = double_wrap(Gm2, U)
    sites = SiteClassification(n_sets=n_sets(Gm2, U))
    if not verify_hamiltonian_set(A2, W).holds("minus"):
        raise ConstructionError("recognition", "the lifted set W is not a (-)compatible hamiltonian set")
    for z in layer_cycle(A2, 1).vertices:
        if A2.degree(z) != 5:
            raise ConstructionError("recognition", f"outer vertex {z} of A^2 has degree {A2.degree(z)}")
    if target is None:
        return LiftResult(A2, W, sites, "identity")
    iso = op_isomorphism(A2, target)
    if iso is not None:
        return LiftResult(target, frozenset(iso[w] for w in W), sites, "identity")
    try:
        inner = peel(peel(target))
    except PeelError as exc:
        raise ConstructionError("recognition", f"target cannot be peeled twice: {exc}") from None
    if set(inner.rotation) != set(Gm2.rotation) or any(tuple(inner.rotation[v]) != tuple(Gm2.rotation[v]) for v in Gm2.rotation if v != Gm2.g):
        phi = op_isomorphism(Gm2, inner)
        if phi is None:
            raise ConstructionError("recognition", "the target does not peel to the given graph")
        U = frozenset(phi[u] for u in U)
    lv = bfs_levels(target).level
    free = [v for v in target.vertices if lv[v] in (1, 2)]
    X = _search(target, "minus", fixed=U, free=free)
    if X is None:
        raise ConstructionError("recognition", "no (-)compatible completion of the lifted set")
    return LiftResult(target, X, sites, "band")


# --------------------------------------------------------------------------
# Outer-layer site replacement
# --------------------------------------------------------------------------

# largest allowed index per site kind and degree of t (starred variant for kind 1)
_OMEGA_BOUNDS = {
    1: {4: 3, 5: 1},
    2: {3: 6, 4: 3, 5: 1},
    3: {4: 5, 5: 2},
    4: {4: 2, 5: 1},
}


def omega_bound(kind: int, degree_t: int, star: bool = False) -> int:
    bound = _OMEGA_BOUNDS[kind].get(degree_t, -1)
    if star and kind == 1 and degree_t == 4:
        bound = min(bound, 2)
    return bound


@dataclass(frozen=True)
class MSites:
    """Sites of the outer-layer replacement.  ``where[i]`` is the c(H) position j(i)."""

    sets: Tuple[Tuple[int, ...], ...]
    where: Mapping[int, int]
    kind: Mapping[int, int]
    disjoint: bool


def m_sets(H: PlaneTriangulation, X: Iterable[int]) -> MSites:
    """M1..M4 over positions of c^2(H) for a (-)compatible hamiltonian set X."""
    S = set(X)
    z = layer_cycle(H, 1).vertices
    t = layer_cycle(H, 2).vertices
    m = len(z)
    deg = H.degree
    faces_of: Dict[int, List[int]] = {}
    for j in range(m):
        apex = H.left_apex(z[j], z[(j + 1) % m])
        faces_of.setdefault(apex, []).append(j)
    sets: List[List[int]] = [[], [], [], []]
    where: Dict[int, int] = {}
    kind: Dict[int, int] = {}
    member_count: Dict[int, int] = {}
    for i, ti in enumerate(t):
        if ti in S or deg(ti) > 5:
            continue
        js = faces_of.get(ti, [])

        def za(j):
            return z[j], z[(j + 1) % m]

        found: Dict[int, List[int]] = {1: [], 2: [], 3: [], 4: []}
        for j in js:
            a, b = za(j)
            if a in S and b not in S and deg(a) == 5 and deg(b) == 5:
                found[1].append(j)
            if a in S and b in S and deg(a) in (4, 5) and deg(b) in (4, 5):
                found[2].append(j)
            if a not in S and b in S and deg(a) == 5 and deg(b) == 5:
                found[4].append(j)
            prev = (j - 1) % m
            if prev in js:
                p, mid = z[prev], a
                if p in S and b in S and mid not in S and deg(mid) == 4 and deg(p) == 5 and deg(b) == 5:
                    found[3].append(j)
        count = 0
        for k in (1, 2, 3, 4):
            if k != 2 and deg(ti) < 4:
                continue
            if len(found[k]) == 1:
                sets[k - 1].append(i)
                where.setdefault(i, found[k][0])
                kind.setdefault(i, k)
                count += 1
        member_count[i] = count
    disjoint = all(c <= 1 for c in member_count.values())
    return MSites(tuple(tuple(s) for s in sets), where, kind, disjoint)


@dataclass(frozen=True)
class SiteReplacement:
    graph: PlaneTriangulation
    set: FrozenSet[int]
    choices: Mapping[int, int]
    sites: MSites


def _omega_apply(H: PlaneTriangulation, X: FrozenSet[int], sites: MSites, choices: Mapping[int, int], cat: Catalog):
    z = layer_cycle(H, 1).vertices
    t = layer_cycle(H, 2).vertices
    m = len(z)
    matches = []
    for i, j in sorted(choices.items()):
        if j == 0:
            continue
        k = sites.kind[i]
        pos = sites.where[i]
        zero = cat.pattern("site", k, 0)
        if k == 3:
            seeds = {1: z[(pos - 1) % m], 2: z[(pos + 1) % m], 3: H.g, 4: t[i]}
        else:
            seeds = {1: z[pos], 2: z[(pos + 1) % m], 3: H.g, 4: t[i]}
        mt = match_configuration(H, zero, seeds)
        if mt is None:
            raise ConstructionError("recognition", f"site {i} does not have the shape of its zero pattern")
        matches.append((mt, cat.pattern("site", k, j)))
    try:
        return replace_patterns(H, X, matches, check=True)
    except (RewriteError, ValueError) as exc:
        raise ConstructionError("recognition", f"site replacement failed: {exc}") from None


def apply_omega(H: PlaneTriangulation, X: Iterable[int], target: Optional[PlaneTriangulation] = None,
                star: bool = False, choices: Optional[Mapping[int, int]] = None,
                catalog: Optional[Catalog] = None, limit: int = 200_000) -> SiteReplacement:
    """Replace outer-layer sites of H by catalog patterns.

    With ``choices`` the given indices are applied after checking their
    bounds.  With a ``target`` the lexicographically least admissible choice
    reproducing the target is searched for.  With neither, the identity.
    """
    cat = catalog or default_catalog()
    X = frozenset(X)
    sites = m_sets(H, X)
    if not sites.disjoint:
        raise ConstructionError("recognition", "site sets M1..M4 are not pairwise disjoint")
    t = layer_cycle(H, 2).vertices
    order = sorted(sites.kind)
    bounds = {i: omega_bound(sites.kind[i], H.degree(t[i]), star) for i in order}
    if choices is not None:
        for i, j in choices.items():
            if i not in sites.kind:
                raise ConstructionError("recognition", f"position {i} is not a replacement site")
            if not 0 <= j <= bounds[i]:
                raise ConstructionError("recognition", f"index {j} at site {i} exceeds the bound {bounds[i]}")
        G2, X2 = _omega_apply(H, X, sites, choices, cat)
        return SiteReplacement(G2, frozenset(X2), dict(choices), sites)
    if target is None:
        return SiteReplacement(H, X, {}, sites)
    want = canonical_code(target)
    total = 1
    for i in order:
        total *= bounds[i] + 1
    if total > limit:
        raise ConstructionError("recognition", f"{total} index assignments exceed the search limit")
    extra = len(target) - len(H)
    for combo in itertools.product(*[range(bounds[i] + 1) for i in order]):
        ch = dict(zip(order, combo))
        added = sum(len(cat.pattern("site", sites.kind[i], j).interior) - len(cat.pattern("site", sites.kind[i], 0).interior)
                    for i, j in ch.items())
        if added != extra:
            continue
        G2, X2 = _omega_apply(H, X, sites, ch, cat)
        if canonical_code(G2) == want:
            return SiteReplacement(G2, frozenset(X2), ch, sites)
    raise ConstructionError("recognition", "no admissible site replacement reproduces the target")


# --------------------------------------------------------------------------
# Driver
# --------------------------------------------------------------------------


class _Builder:
    def __init__(self, cat: Catalog):
        self.cat = cat
        self.steps: List[str] = []

    def minus(self, G: PlaneTriangulation) -> FrozenSet[int]:
        if is_base_regime(G):
            res = base_case_lookup(G, "minus", self.cat)
            self.steps.extend(res.steps)
            return res.set
        try:
            K = peel(peel(G))
        except PeelError as exc:
            self.steps.append(f"peel-failed {exc.kind}")
            S = _search(G, "minus")
            if S is None:
                raise ConstructionError("impossible", "no (-)compatible hamiltonian set exists", certified=True)
            return S
        exc_name = exceptional_name(K, self.cat)
        if exc_name is not None:
            _, entry, iso = _lookup(K, self.cat)
            U = frozenset(iso[v] for v in entry.marked)
            self.steps.append(f"inner-exceptional {exc_name}")
        else:
            U = self.compatible(K)
        lift = lift_level2(K, U, G)
        n1, n2, n3, n4 = lift.sites.n_sets
        self.steps.append(f"lift via={lift.via} vertices={len(G)} N1={len(n1)} N2={len(n2)} N3={len(n3)} N4={len(n4)}")
        return lift.set

    def compatible(self, G: PlaneTriangulation) -> FrozenSet[int]:
        # a compatible set of G is a (-)compatible set of its mirror image, same vertex names
        return self.minus(mirror_reflect(G))


def _confirm_impossible(G: PlaneTriangulation, flavor: str) -> bool:
    if len(G) > ORACLE_CONFIRM_LIMIT:
        return False
    return has_set(G, flavor) is False


def construct_hamiltonian_set(G: PlaneTriangulation, flavor: str = "compatible",
                              catalog: Optional[Catalog] = None, with_trace: bool = False) -> ConstructionResult:
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    fc = check_family_membership(G)
    if not fc.member:
        raise ConstructionError("not-in-family", f"not in the family: {fc.reason}")
    cat = catalog or default_catalog()
    trace = decompose(G) if with_trace else None
    b = _Builder(cat)
    exc_name = exceptional_name(G, cat)
    if exc_name is not None and flavor in ("compatible", "any"):
        _, entry, iso = _lookup(G, cat)
        S = frozenset(iso[v] for v in entry.marked)
        return ConstructionResult(S, verify_hamiltonian_set(G, S).best_flavor(), flavor, trace,
                                  exc_name if flavor == "compatible" else None, (f"base-catalog {exc_name}",))
    if flavor in ("compatible", "any"):
        S = b.compatible(G)
    elif flavor == "minus":
        if exc_name is not None:
            raise ConstructionError("impossible", f"exceptional graph {exc_name} has no (-)compatible set",
                                    certified=_confirm_impossible(G, flavor))
        S = b.minus(G)
    else:
        S = _search(G, "pm")
        b.steps.append("pm-search")
        if S is None:
            raise ConstructionError("impossible", "no (±)compatible hamiltonian set exists",
                                    certified=_confirm_impossible(G, "pm"))
    report = verify_hamiltonian_set(G, S)
    if not report.holds(flavor):
        raise ConstructionError("recognition", f"constructed set fails the verifier: {report.failure or 'orientation'}")
    return ConstructionResult(S, report.best_flavor(), flavor, trace, None, tuple(b.steps))

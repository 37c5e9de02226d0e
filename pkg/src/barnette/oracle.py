"""Brute-force ground truth for hamiltonian sets and family membership.

``enumerate_hamiltonian_sets`` is a branch and bound over vertex inclusion.
Its cuts only discard branches that provably contain no solution: a face with
every vertex excluded, a violated compatibility clause, an induced cycle, or
an included vertex that can no longer reach the others.  ``naive_scan``
checks every subset with the verifier and exists to cross-check the search.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Tuple

from .census import CENSUS_CAP, CensusLimitError, exhaustive_family_census
from .family import layer_cycle
from .planar_core import PlaneTriangulation, trace_faces
from .verifier import FLAVORS, verify_hamiltonian_set

__all__ = [
    "SearchConstraint",
    "SearchResult",
    "BudgetExhausted",
    "enumerate_hamiltonian_sets",
    "naive_scan",
    "exhaustive_family_census",
    "CensusLimitError",
    "CENSUS_CAP",
    "flavor_clauses",
]

DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class SearchConstraint:
    flavor: str = "any"
    limit: int = 0
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.limit < 0:
            raise ValueError("limit must be >= 0")


@dataclass(frozen=True)
class SearchResult:
    sets: Tuple[FrozenSet[int], ...]
    exhausted: bool
    nodes: int

    def lines(self) -> List[str]:
        out = [f"exhausted={str(self.exhausted).lower()}", f"count={len(self.sets)}", f"nodes={self.nodes}"]
        out += ["set=" + " ".join(map(str, sorted(s))) for s in self.sets]
        return out


class BudgetExhausted(RuntimeError):
    pass


def flavor_clauses(G: PlaneTriangulation, flavor: str) -> List[Tuple[int, int]]:
    """Pairs (x_i, x_{i+-2}) of which at least one must be in the set."""
    c = layer_cycle(G, 1).vertices
    m = len(c)
    steps = {"any": (), "compatible": (2,), "minus": (-2,), "pm": (2, -2)}[flavor]
    out = []
    for i, x in enumerate(c):
        if G.degree(x) <= 4:
            for s in steps:
                out.append((x, c[(i + s) % m]))
    return out


def _order(G: PlaneTriangulation) -> List[int]:
    """BFS order of G - g starting next to g, so decided vertices stay clustered."""
    c = layer_cycle(G, 1).vertices
    seen = {G.g, c[0]}
    order = [c[0]]
    q = deque([c[0]])
    while q:
        v = q.popleft()
        for u in G.rotation[v]:
            if u not in seen:
                seen.add(u)
                order.append(u)
                q.append(u)
    return order


def enumerate_hamiltonian_sets(G: PlaneTriangulation, constraint: SearchConstraint = SearchConstraint()) -> SearchResult:
    order = _order(G)
    n = len(order)
    idx = {v: k for k, v in enumerate(order)}
    g = G.g
    nbrs = [[idx[u] for u in G.rotation[v] if u != g] for v in order]
    faces = []
    for f in trace_faces(G).faces:
        faces.append([idx[x] for x in f if x != g])
    clauses = [(idx[a], idx[b]) for a, b in flavor_clauses(G, constraint.flavor)]
    # a face or clause is checked once its last member has been decided
    due: List[List[List[int]]] = [[] for _ in range(n)]
    for members in faces + [list(c) for c in clauses]:
        due[max(members)].append(members)

    state = [0] * n          # 0 undecided, 1 in, -1 out
    uf = list(range(n))
    solutions: List[FrozenSet[int]] = []
    nodes = 0
    limit = constraint.limit
    budget = constraint.budget

    def find(x):
        while uf[x] != x:
            x = uf[x]
        return x

    def reachable_ok() -> bool:
        """All included vertices must lie in one component of the non-excluded graph."""
        start = next((k for k in range(n) if state[k] == 1), None)
        if start is None:
            return True
        seen = [False] * n
        seen[start] = True
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if not seen[y] and state[y] != -1:
                    seen[y] = True
                    stack.append(y)
        return all(seen[k] for k in range(n) if state[k] == 1)

    def rec(k: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExhausted
        if k == n:
            S = frozenset(order[j] for j in range(n) if state[j] == 1)
            if verify_hamiltonian_set(G, S).holds(constraint.flavor):
                solutions.append(S)
                if limit and len(solutions) >= limit:
                    return True
            return False
        for choice in (1, -1):
            if choice == 1:
                roots = {find(j) for j in nbrs[k] if state[j] == 1}
                count = sum(1 for j in nbrs[k] if state[j] == 1)
                if count != len(roots):
                    continue  # two neighbours already joined: induced cycle
                state[k] = 1
                merged = []
                for r in roots:
                    uf[r] = k
                    merged.append(r)
            else:
                state[k] = -1
                merged = []
            ok = all(any(state[j] == 1 for j in members) for members in due[k])
            if ok and choice == -1:
                ok = reachable_ok()
            if ok and rec(k + 1):
                return True
            for r in merged:
                uf[r] = r
            state[k] = 0
        return False

    try:
        rec(0)
        exhausted = not (limit and len(solutions) >= limit)
    except BudgetExhausted:
        exhausted = False
    sets = tuple(sorted(solutions, key=lambda s: (len(s), sorted(s))))
    return SearchResult(sets, exhausted, nodes)


def naive_scan(G: PlaneTriangulation, flavor: str = "any", max_vertices: int = 14) -> Tuple[FrozenSet[int], ...]:
    """Check every subset of V(G) - g with the verifier."""
    if len(G) > max_vertices:
        raise ValueError(f"naive scan is limited to {max_vertices} vertices")
    vs = [v for v in G.vertices if v != G.g]
    out = []
    for r in range(1, len(vs) + 1):
        for combo in combinations(vs, r):
            if verify_hamiltonian_set(G, combo).holds(flavor):
                out.append(frozenset(combo))
    return tuple(sorted(out, key=lambda s: (len(s), sorted(s))))


def has_set(G: PlaneTriangulation, flavor: str, budget: int = DEFAULT_BUDGET) -> Optional[bool]:
    """True/False when decided within the budget, None otherwise."""
    res = enumerate_hamiltonian_sets(G, SearchConstraint(flavor, 1, budget))
    if res.sets:
        return True
    return False if res.exhausted else None


def classes_without(graphs: Dict[bytes, PlaneTriangulation], flavor: str) -> List[bytes]:
    return sorted(code for code, G in graphs.items() if has_set(G, flavor) is False)


"""Definition-level checks for hamiltonian sets and derivation traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .family import layer_cycle
from .planar_core import PlaneTriangulation, trace_faces

FLAVORS = ("any", "compatible", "minus", "pm")


@dataclass(frozen=True)
class CompatibilityReport:
    """Outcome of checking one vertex set.

    The three compatibility flags only test the implications on c(G); use
    :meth:`holds` to ask for a hamiltonian set of a given flavor.
    ``positions`` index c(G) from 0 in its canonical starting order.
    """

    is_hamiltonian: bool
    failure: str
    compatible: bool
    minus_compatible: bool
    pm: bool
    witnesses: Dict[str, Tuple] = field(default_factory=dict)
    cycle: Tuple[int, ...] = ()

    def holds(self, flavor: str) -> bool:
        if flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {flavor!r}")
        if not self.is_hamiltonian:
            return False
        return {"any": True, "compatible": self.compatible, "minus": self.minus_compatible, "pm": self.pm}[flavor]

    def best_flavor(self) -> Optional[str]:
        if not self.is_hamiltonian:
            return None
        if self.pm:
            return "pm"
        if self.compatible:
            return "compatible"
        if self.minus_compatible:
            return "minus"
        return "any"

    def lines(self) -> List[str]:
        out = [
            f"is_hamiltonian={str(self.is_hamiltonian).lower()}",
            f"failure={self.failure or 'none'}",
            f"compatible={str(self.compatible).lower()}",
            f"minus_compatible={str(self.minus_compatible).lower()}",
            f"pm={str(self.pm).lower()}",
        ]
        for key in sorted(self.witnesses):
            out.append(f"witness.{key}=" + " ".join(map(str, self.witnesses[key])))
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


def induced_edges(G: PlaneTriangulation, U: Iterable[int]) -> List[Tuple[int, int]]:
    S = set(U)
    return sorted((u, v) for u in S for v in G.rotation[u] if v in S and u < v)


def _components(G: PlaneTriangulation, S: FrozenSet[int]) -> List[List[int]]:
    seen = set()
    comps = []
    for s in sorted(S):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in G.rotation[x]:
                if y in S and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def compatibility_witnesses(G: PlaneTriangulation, U: Iterable[int], step: int) -> List[int]:
    """Positions i where x_i is missing, has degree <= 4, and x_{i+step} is missing too."""
    S = set(U)
    c = layer_cycle(G, 1).vertices
    m = len(c)
    return [i for i, x in enumerate(c) if x not in S and G.degree(x) <= 4 and c[(i + step) % m] not in S]


def verify_hamiltonian_set(G: PlaneTriangulation, U: Iterable[int]) -> CompatibilityReport:
    S = frozenset(U)
    witnesses: Dict[str, Tuple] = {}
    failure = ""
    unknown = sorted(v for v in S if v not in G)
    if unknown:
        failure = "unknown-vertex"
        witnesses["unknown"] = tuple(unknown)
    elif G.g in S:
        failure = "contains-g"
        witnesses["contains_g"] = (G.g,)
    else:
        fs = trace_faces(G)
        missing = [k for k, f in enumerate(fs.faces) if not S.intersection(f)]
        if missing:
            failure = "missing-face"
            witnesses["missing_face"] = tuple(fs.faces[missing[0]])
        elif not S:
            failure = "disconnected"
        else:
            e = len(induced_edges(G, S))
            comps = _components(G, S)
            if len(comps) > 1:
                failure = "disconnected"
                witnesses["disconnected"] = (comps[0][0], comps[1][0])
            elif e != len(S) - 1:
                failure = "cycle-in-induced"
                witnesses["cycle"] = tuple(_find_cycle(G, S))
    fwd = compatibility_witnesses(G, S, 2) if not unknown else [-1]
    back = compatibility_witnesses(G, S, -2) if not unknown else [-1]
    if fwd:
        witnesses["compatible"] = tuple(fwd)
    if back:
        witnesses["minus_compatible"] = tuple(back)
    return CompatibilityReport(
        is_hamiltonian=not failure,
        failure=failure,
        compatible=not fwd,
        minus_compatible=not back,
        pm=not fwd and not back,
        witnesses=witnesses,
        cycle=layer_cycle(G, 1).vertices,
    )


def _find_cycle(G: PlaneTriangulation, S: FrozenSet[int]) -> List[int]:
    parent: Dict[int, Optional[int]] = {}
    for root in sorted(S):
        if root in parent:
            continue
        parent[root] = None
        stack = [(root, None)]
        while stack:
            x, via = stack.pop()
            for y in G.rotation[x]:
                if y not in S or y == via:
                    continue
                if y in parent:
                    # walk both ends up to their common ancestor
                    a, b = [x], [y]
                    while a[-1] is not None:
                        a.append(parent[a[-1]])
                    while b[-1] is not None:
                        b.append(parent[b[-1]])
                    a, b = a[:-1], b[:-1]
                    common = next(z for z in a if z in b)
                    return a[:a.index(common) + 1] + b[:b.index(common)][::-1]
                parent[y] = x
                stack.append((y, x))
    return []


def verify_derivation(trace, target: PlaneTriangulation) -> Tuple[bool, Optional[int], str]:
    """Replay ``trace`` and compare with ``target`` up to op-equivalence.

    Returns (ok, failing step index or None, diagnostic).
    """
    from .rewrite import verify_trace

    return verify_trace(trace, target)

"""Frontier dynamic programme for induced trees that hit a family of clauses.

Free vertices are decided one at a time.  A decided vertex stays on the
frontier while it still has an undecided free neighbour or an unresolved
clause.  The state records, for each frontier vertex, whether it is out or
which component of the chosen set it belongs to.  An optional fixed inner set
(already known to induce a tree) is contracted to a single node with label 0
that never closes.

The programme is exact: it returns a set whenever one exists.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .planar_core import PlaneTriangulation

OUT = -1
TAU = 0


def _greedy_order(G: PlaneTriangulation, free: Sequence[int], related: Dict[int, Set[int]]) -> List[int]:
    """Order free vertices so the frontier stays narrow."""
    remaining = set(free)
    order: List[int] = []
    done: Set[int] = set()
    rank = {v: k for k, v in enumerate(free)}
    while remaining:
        best = None
        for v in remaining:
            near = related[v]
            key = (-len(near & done), len(near - done), rank[v])
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        order.append(v)
        done.add(v)
        remaining.discard(v)
    return order


def _induces_tree(G: PlaneTriangulation, S: FrozenSet[int]) -> bool:
    if not S:
        return True
    edges = sum(1 for u in S for w in G.rotation[u] if w in S) // 2
    if edges != len(S) - 1:
        return False
    start = next(iter(S))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in G.rotation[x]:
            if y in S and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(S)


def find_tree_set(G: PlaneTriangulation, free: Iterable[int], fixed_in: Iterable[int] = (),
                  clauses: Iterable[Iterable[int]] = (), prefer_out: bool = True) -> Optional[FrozenSet[int]]:
    """A set S with fixed_in ⊆ S ⊆ fixed_in ∪ free inducing a tree and meeting every clause.

    Vertices that are neither free nor fixed_in are treated as excluded.
    Returns None when no such set exists.
    """
    free_l = [v for v in free]
    free_s = set(free_l)
    fin = frozenset(fixed_in)
    if fin & free_s:
        raise ValueError("a vertex cannot be both free and fixed")
    if not _induces_tree(G, fin):
        return None
    # reduce clauses to their free members
    reduced: List[Tuple[int, ...]] = []
    for cl in clauses:
        cl = tuple(cl)
        if fin.intersection(cl):
            continue
        members = tuple(sorted(set(v for v in cl if v in free_s)))
        if not members:
            return None
        reduced.append(members)
    if not free_l:
        return fin if fin else None

    related: Dict[int, Set[int]] = {v: set() for v in free_l}
    for v in free_l:
        related[v].update(u for u in G.rotation[v] if u in free_s)
    for cl in reduced:
        for a in cl:
            related[a].update(b for b in cl if b != a)
    order = _greedy_order(G, free_l, related)
    pos = {v: k for k, v in enumerate(order)}
    tau_edges = {v: sum(1 for u in G.rotation[v] if u in fin) for v in order}
    has_tau = bool(fin)

    # the frontier slot of v is released after step last_use[v]
    last_use = {v: pos[v] for v in order}
    for v in order:
        for u in G.rotation[v]:
            if u in free_s:
                last_use[v] = max(last_use[v], pos[u])
    due: List[List[Tuple[int, ...]]] = [[] for _ in order]
    for cl in reduced:
        k = max(pos[v] for v in cl)
        due[k].append(cl)
        for v in cl:
            last_use[v] = max(last_use[v], k)

    frontier: List[int] = []
    # state: (labels tuple aligned with frontier, done flag)
    layers: List[Dict[Tuple[Tuple[int, ...], bool], Tuple[Tuple[Tuple[int, ...], bool], int]]] = []
    states: Dict[Tuple[Tuple[int, ...], bool], Optional[Tuple]] = {((), False): None}
    choices = (OUT, 1) if prefer_out else (1, OUT)

    for k, v in enumerate(order):
        nbr_slots = [t for t, u in enumerate(frontier) if u in G._pos[v]]
        new_frontier = frontier + [v]
        keep = [t for t, u in enumerate(new_frontier) if last_use[u] > k]
        kept_frontier = [new_frontier[t] for t in keep]
        clause_slots = [[new_frontier.index(u) for u in cl] for cl in due[k]]
        nxt: Dict[Tuple[Tuple[int, ...], bool], Tuple] = {}
        for (labels, done) in states:
            for choice in choices:
                if choice == OUT:
                    new_labels = list(labels) + [OUT]
                else:
                    if done or tau_edges[v] >= 2:
                        continue
                    touching = [labels[t] for t in nbr_slots if labels[t] != OUT]
                    if tau_edges[v] == 1:
                        touching.append(TAU)
                    if len(set(touching)) != len(touching):
                        continue  # would close a cycle
                    if TAU in touching:
                        target = TAU
                    elif touching:
                        target = min(touching)
                    else:
                        target = max([lb for lb in labels] + [0]) + 1
                    merge = set(touching)
                    new_labels = [target if lb in merge else lb for lb in labels] + [target]
                if any(all(new_labels[t] == OUT for t in slots) for slots in clause_slots):
                    continue
                # release slots and check that no non-inner component is stranded
                remaining = [new_labels[t] for t in keep]
                released = {new_labels[t] for t in range(len(new_labels)) if t not in keep and new_labels[t] > 0}
                new_done = done
                ok = True
                live = set(lb for lb in remaining if lb != OUT)
                for lb in released:
                    if lb in live:
                        continue
                    if has_tau or new_done or any(x > 0 for x in live):
                        ok = False
                        break
                    new_done = True
                if not ok:
                    continue
                key = (_normalise(remaining), new_done)
                if key not in nxt:
                    nxt[key] = ((labels, done), choice)
        layers.append(nxt)
        states = {s: None for s in nxt}
        frontier = kept_frontier
        if not states:
            return None

    finals = [s for s in states if (has_tau or s[1])]
    if not finals:
        return None
    chosen: Set[int] = set(fin)
    key = finals[0]
    for k in range(len(order) - 1, -1, -1):
        prev, choice = layers[k][key]
        if choice != OUT:
            chosen.add(order[k])
        key = prev
    return frozenset(chosen)


def _normalise(labels: Sequence[int]) -> Tuple[int, ...]:
    ren: Dict[int, int] = {}
    out = []
    for lb in labels:
        if lb <= 0:
            out.append(lb)
            continue
        if lb not in ren:
            ren[lb] = len(ren) + 1
        out.append(ren[lb])
    return tuple(out)

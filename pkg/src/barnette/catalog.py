"""Catalog of base graphs and pattern families, with their validators.

A catalog is a directory of ``*.cat`` files.  Each file is a sequence of
sections::

    [base <name> <param?>]
    triangulation v1
    g=...
    outer=...
    <v>: <rotation>
    marked=<ids>
    flavor=<any|compat|minus|pm>

    [pattern <family> <k> <j>]
    <v>: <rotation, starting at the successor on sigma for boundary vertices>
    sigma=<cycle with the proper region on its left>
    d=<anchor>
    D=<marked ids>
    region=<bounded|unbounded>

Families and their index ranges are fixed in :data:`FAMILY_RANGES`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .family import check_family_membership
from .planar_core import EmbeddingError, PlaneTriangulation, op_equivalent, parse_triangulation
from .rewrite import EDGE_PATTERNS, Pattern, sigma_compatible
from .verifier import verify_hamiltonian_set

# family -> k -> largest j
FAMILY_RANGES: Dict[str, Dict[int, int]] = {
    # operation patterns: j = 0 is the site, j = 1 its replacement (B, C, Bbar, Cbar)
    "edge": {1: 1, 2: 1, 3: 1, 4: 1},
    # outer-layer site replacements used after the two-layer lift
    "site": {1: 3, 2: 6, 3: 5, 4: 2},
    # replacements at the lift sites of the second and third layer
    "lift": {1: 3, 2: 6, 3: 6},
    # tail replacements of the strip graphs
    "tail": {5: 1, 6: 1},
}

# families whose patterns carry a marked set (the operation patterns do not)
MARKED_FAMILIES = ("site", "lift", "tail")

FLAVOR_NAMES = {"any": "any", "compat": "compatible", "compatible": "compatible", "minus": "minus", "pm": "pm"}

EDGE_KINDS = {1: "B", 2: "C", 3: "Bbar", 4: "Cbar"}


class CatalogError(ValueError):
    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = ""
        if path:
            where = f"{path}:{line}: " if line else f"{path}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class BaseEntry:
    name: str
    param: Optional[int]
    graph: PlaneTriangulation
    marked: Optional[FrozenSet[int]] = None
    flavor: Optional[str] = None
    source: str = ""


@dataclass
class Catalog:
    base_graphs: Dict[Tuple[str, Optional[int]], BaseEntry] = field(default_factory=dict)
    families: Dict[str, Dict[int, Dict[int, Pattern]]] = field(default_factory=dict)
    sources: Dict[str, str] = field(default_factory=dict)

    def base(self, name: str, param: Optional[int] = None) -> BaseEntry:
        try:
            return self.base_graphs[(name, param)]
        except KeyError:
            raise KeyError(f"no base graph {name}{'' if param is None else ' ' + str(param)} in the catalog") from None

    def pattern(self, family: str, k: int, j: int) -> Pattern:
        return self.families[family][k][j]

    def family(self, family: str, k: int) -> List[Pattern]:
        members = self.families.get(family, {}).get(k, {})
        return [members[j] for j in sorted(members)]


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------


def _ints(text: str, path: str, line: int) -> List[int]:
    try:
        return [int(t) for t in text.split()]
    except ValueError:
        raise CatalogError(f"expected integers, got {text!r}", path, line) from None


def _parse_base(header: List[str], body: List[Tuple[int, str]], path: str, line: int) -> BaseEntry:
    if len(header) not in (2, 3):
        raise CatalogError("base header is [base <name> <param?>]", path, line)
    name = header[1]
    param = None
    if len(header) == 3:
        param = _ints(header[2], path, line)[0]
    graph_lines = []
    marked = None
    flavor = None
    for no, text in body:
        if text.startswith("marked="):
            marked = frozenset(_ints(text[7:], path, no))
        elif text.startswith("flavor="):
            raw = text[7:].strip()
            if raw not in FLAVOR_NAMES:
                raise CatalogError(f"unknown flavor {raw!r}", path, no)
            flavor = FLAVOR_NAMES[raw]
        else:
            graph_lines.append(text)
    try:
        G = parse_triangulation("\n".join(graph_lines))
    except EmbeddingError as exc:
        raise CatalogError(f"graph body of {name}: {exc}", path, line) from None
    if (marked is None) != (flavor is None):
        raise CatalogError("marked= and flavor= must be given together", path, line)
    return BaseEntry(name, param, G, marked, flavor, path)


def _parse_pattern(header: List[str], body: List[Tuple[int, str]], path: str, line: int) -> Tuple[str, int, int, Pattern]:
    if len(header) != 4:
        raise CatalogError("pattern header is [pattern <family> <k> <j>]", path, line)
    family = header[1]
    k, j = _ints(" ".join(header[2:]), path, line)
    rot: Dict[int, Tuple[int, ...]] = {}
    sigma = d = None
    D: FrozenSet[int] = frozenset()
    region = "bounded"
    for no, text in body:
        if text.startswith("sigma="):
            sigma = tuple(_ints(text[6:], path, no))
        elif text.startswith("d="):
            d = _ints(text[2:], path, no)[0]
        elif text.startswith("D="):
            D = frozenset(_ints(text[2:], path, no))
        elif text.startswith("region="):
            region = text[7:].strip()
        elif ":" in text:
            head, tail = text.split(":", 1)
            v = _ints(head, path, no)[0]
            if v in rot:
                raise CatalogError(f"vertex {v} listed twice", path, no)
            rot[v] = tuple(_ints(tail, path, no))
        else:
            raise CatalogError(f"unrecognised line {text!r}", path, no)
    if sigma is None or d is None:
        raise CatalogError("pattern needs sigma= and d=", path, line)
    p = Pattern(rot, sigma, d, D, region, f"{family} {k} {j}")
    try:
        p.validate()
    except ValueError as exc:
        raise CatalogError(f"pattern {family} {k} {j}: {exc}", path, line) from None
    return family, k, j, p


def _sections(text: str, path: str):
    header = None
    start = 0
    body: List[Tuple[int, str]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise CatalogError("unterminated section header", path, no)
            if header is not None:
                yield header, body, start
            header = line[1:-1].split()
            start = no
            body = []
        else:
            if header is None:
                raise CatalogError("content before the first section", path, no)
            body.append((no, line))
    if header is not None:
        yield header, body, start


def load_catalog(files: Iterable[os.PathLike | str]) -> Catalog:
    """Parse catalog files and check index ranges; does not run the validators."""
    cat = Catalog()
    paths: List[Path] = []
    for f in files:
        p = Path(f)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.cat")))
        else:
            paths.append(p)
    for p in paths:
        text = p.read_text()
        families_here = set()
        for header, body, line in _sections(text, str(p)):
            kind = header[0] if header else ""
            if kind == "base":
                entry = _parse_base(header, body, str(p), line)
                key = (entry.name, entry.param)
                if key in cat.base_graphs:
                    raise CatalogError(f"base graph {entry.name} {entry.param} defined twice", str(p), line)
                cat.base_graphs[key] = entry
            elif kind == "pattern":
                family, k, j, pat = _parse_pattern(header, body, str(p), line)
                if family not in FAMILY_RANGES:
                    raise CatalogError(f"unknown pattern family {family!r}", str(p), line)
                if family in cat.sources and cat.sources[family] != str(p):
                    raise CatalogError(f"family {family!r} already defined in {cat.sources[family]}", str(p), line)
                ranges = FAMILY_RANGES[family]
                if k not in ranges:
                    raise CatalogError(f"family {family!r} has no index k={k}", str(p), line)
                if not 0 <= j <= ranges[k]:
                    raise CatalogError(f"family {family!r} k={k} allows j in 0..{ranges[k]}, got {j}", str(p), line)
                slot = cat.families.setdefault(family, {}).setdefault(k, {})
                if j in slot:
                    raise CatalogError(f"pattern {family} {k} {j} defined twice", str(p), line)
                slot[j] = pat
                families_here.add(family)
            else:
                raise CatalogError(f"unknown section kind {kind!r}", str(p), line)
        for fam in families_here:
            cat.sources[fam] = str(p)
    for fam, by_k in cat.families.items():
        for k, slot in by_k.items():
            if 0 not in slot:
                raise CatalogError(f"family {fam!r} k={k} lacks its zero pattern")
    return cat


def default_catalog_dir() -> Path:
    env = os.environ.get("BARNETTE_CATALOG")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


@lru_cache(maxsize=4)
def _cached(path: str) -> Catalog:
    return load_catalog([path])


def default_catalog() -> Catalog:
    return _cached(str(default_catalog_dir()))


# --------------------------------------------------------------------------
# Base graphs
# --------------------------------------------------------------------------

PARAMETRIC = {"G": 3, "F": 1}


def instantiate_base_graph(c: Catalog, name: str, n: Optional[int] = None) -> BaseEntry:
    """A catalog base graph, building parametric families beyond the stored instances."""
    if (name, n) in c.base_graphs:
        return c.base_graphs[(name, n)]
    if name in PARAMETRIC:
        if n is None or n < PARAMETRIC[name]:
            raise ValueError(f"{name}_n needs n >= {PARAMETRIC[name]}")
        from .bases import path_graph, strip_graph

        G = strip_graph(n) if name == "G" else path_graph(n)
        return BaseEntry(name, n, G)
    known = sorted({k[0] for k in c.base_graphs})
    raise KeyError(f"unknown base graph {name!r}{'' if n is None else ' ' + str(n)}; known: {', '.join(known)}")


# --------------------------------------------------------------------------
# Validators
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    check: str
    subject: str
    status: str          # pass | fail | skip
    detail: str = ""


@dataclass
class ValidationReport:
    results: List[CheckResult] = field(default_factory=list)

    def add(self, check: str, subject: str, ok: Optional[bool], detail: str = "") -> None:
        status = "skip" if ok is None else ("pass" if ok else "fail")
        self.results.append(CheckResult(check, subject, status, detail))

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> List[str]:
        out = []
        for r in self.results:
            tail = f" {r.detail}" if r.detail else ""
            out.append(f"{r.status} {r.check} {r.subject}{tail}")
        n_pass = sum(r.status == "pass" for r in self.results)
        n_skip = sum(r.status == "skip" for r in self.results)
        out.append(f"summary pass={n_pass} fail={len(self.failures)} skip={n_skip}")
        return out


def induced_edge_count(p: Pattern, S: Iterable[int]) -> int:
    s = set(S)
    return sum(1 for u in s for v in p.rotation.get(u, ()) if v in s) // 2


def _components(p: Pattern, S: Iterable[int]) -> List[FrozenSet[int]]:
    s = set(S)
    seen = set()
    comps = []
    for v in sorted(s):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in p.rotation[x]:
                if y in s and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(frozenset(comp))
    return comps


def anchor_path(p: Pattern) -> List[int]:
    """Neighbours of d inside the proper region, in rotation order around d."""
    return [p.sigma[(p.sigma.index(p.d) + 1) % len(p.sigma)]] + list(p.sector(p.d)) + [p.sigma[p.sigma.index(p.d) - 1]]


def check_sigma_compatible(p: Pattern, zero: Pattern) -> bool:
    return sigma_compatible(p, zero)


def check_domination(p: Pattern) -> Tuple[bool, str]:
    if p.d in p.D:
        return False, "anchor is marked"
    for f in p.faces():
        if not p.D.intersection(f):
            return False, "face " + " ".join(map(str, f)) + " not dominated"
    return True, ""


def check_tree_arithmetic(p: Pattern, zero: Pattern) -> Tuple[bool, str]:
    a = len(p.D) - induced_edge_count(p, p.D)
    b = len(zero.D) - induced_edge_count(zero, zero.D)
    return a == b, f"{a} vs {b}"


def check_linked_to_boundary(p: Pattern) -> Tuple[bool, str]:
    marked_boundary = set(p.sigma) & set(p.D)
    for comp in _components(p, p.D):
        if not comp & marked_boundary:
            return False, "component " + " ".join(map(str, sorted(comp))) + " misses the marked boundary"
    return True, ""


def check_boundary_partition(p: Pattern, zero: Pattern) -> Tuple[bool, str]:
    """The marked boundary vertices must be joined inside the pattern exactly as in the zero pattern."""
    phi = {s: z for s, z in zip(_from_anchor(p), _from_anchor(zero))}

    def parts(q, mapping=None):
        out = set()
        for comp in _components(q, q.D):
            b = set(q.sigma) & comp
            out.add(frozenset(mapping[x] for x in b) if mapping else frozenset(b))
        return out

    return parts(p, phi) == parts(zero), ""


def _from_anchor(p: Pattern) -> List[int]:
    k = p.sigma.index(p.d)
    return list(p.sigma[k:] + p.sigma[:k])


def check_outer_path(p: Pattern) -> Tuple[bool, str]:
    """Along the path of d-neighbours: an unmarked vertex of degree <= 4 needs the vertex two back marked.

    Degrees of interior vertices are their pattern degrees; boundary vertices
    are skipped because their host degree is not fixed by the pattern.
    """
    path = anchor_path(p)[::-1]
    sig = set(p.sigma)
    for i, s in enumerate(path):
        if s in sig or s in p.D or len(p.rotation[s]) > 4 or i < 2:
            continue
        if path[i - 2] not in p.D:
            return False, f"vertex {s} unmarked with degree {len(p.rotation[s])}, {path[i - 2]} unmarked"
    return True, ""


def validate_catalog(c: Catalog) -> ValidationReport:
    rep = ValidationReport()
    for (name, param), entry in sorted(c.base_graphs.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0)):
        subject = f"base {name}" + ("" if param is None else f" {param}")
        fc = check_family_membership(entry.graph)
        rep.add("membership", subject, fc.member, fc.reason or "")
        if entry.marked is not None:
            r = verify_hamiltonian_set(entry.graph, entry.marked)
            rep.add("marked-set", subject, r.holds(entry.flavor), f"flavor={entry.flavor} failure={r.failure or 'none'}")
        if name in PARAMETRIC and param is not None:
            built = instantiate_base_graph(Catalog(), name, param).graph
            rep.add("recurrence", subject, op_equivalent(built, entry.graph))
    for fam in sorted(c.families):
        for k in sorted(c.families[fam]):
            members = c.families[fam][k]
            zero = members[0]
            for j in sorted(members):
                p = members[j]
                subject = f"pattern {fam} {k} {j}"
                rep.add("a-sigma-compatible", subject, check_sigma_compatible(p, zero))
                if fam in MARKED_FAMILIES:
                    ok, why = check_domination(p)
                    rep.add("b-domination", subject, ok, why)
                    ok, why = check_tree_arithmetic(p, zero)
                    rep.add("c-tree-arithmetic", subject, ok, why)
                if fam in ("site", "lift"):
                    ok, why = check_linked_to_boundary(p)
                    rep.add("e-linked-to-boundary", subject, ok, why)
                    ok, why = check_boundary_partition(p, zero)
                    rep.add("e-boundary-partition", subject, ok, why)
                    ok, why = check_outer_path(p)
                    rep.add("f-outer-path", subject, ok, why)
                if fam == "edge" and j == 1:
                    built = EDGE_PATTERNS[EDGE_KINDS[k]]
                    same = _same_pattern(p, built[1]) and _same_pattern(zero, built[0])
                    rep.add("edge-matches-operation", subject, same)
            # replacements within one family must be told apart by their interiors
            if fam == "site":
                keys = [_shape_key(members[j]) for j in sorted(members)]
                rep.add("distinct-interiors", f"pattern {fam} {k}", len(set(keys)) == len(keys))
    if "lift" not in c.families:
        rep.add("d-sub-configurations", "family lift", None, "family not in catalog")
    if "snake" not in c.families:
        rep.add("g-snake-shape", "family snake", None, "family not in catalog")
    return rep


def _same_pattern(p: Pattern, q: Pattern) -> bool:
    return p.sigma == q.sigma and p.d == q.d and {v: tuple(r) for v, r in p.rotation.items()} == {v: tuple(r) for v, r in q.rotation.items()}


def _shape_key(p: Pattern) -> Tuple:
    """Relabel interior vertices by discovery from the anchored boundary."""
    order = _from_anchor(p)
    lab = {s: k for k, s in enumerate(order)}
    queue = list(order)
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for u in p.rotation[v]:
            if u not in lab:
                lab[u] = len(lab)
                queue.append(u)
    return tuple(sorted((lab[v], tuple(lab[u] for u in r)) for v, r in p.rotation.items()))


def format_pattern(family: str, k: int, j: int, p: Pattern) -> str:
    out = [f"[pattern {family} {k} {j}]"]
    for v in sorted(p.rotation):
        out.append(f"{v}: " + " ".join(map(str, p.rotation[v])))
    out.append("sigma=" + " ".join(map(str, p.sigma)))
    out.append(f"d={p.d}")
    out.append("D=" + " ".join(map(str, sorted(p.D))))
    out.append(f"region={p.region}")
    return "\n".join(out) + "\n"


def format_base(entry: BaseEntry) -> str:
    from .planar_core import format_triangulation

    head = f"[base {entry.name}" + ("" if entry.param is None else f" {entry.param}") + "]"
    body = format_triangulation(entry.graph)
    out = head + "\n" + body
    if entry.marked is not None:
        short = {"compatible": "compat"}.get(entry.flavor, entry.flavor)
        out += "marked=" + " ".join(map(str, sorted(entry.marked))) + "\n"
        out += f"flavor={short}\n"
    return out

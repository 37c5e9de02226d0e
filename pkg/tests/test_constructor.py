import pytest

from barnette.catalog import instantiate_base_graph
from barnette.constructor import (
    ConstructionError,
    apply_omega,
    base_case_lookup,
    construct_hamiltonian_set,
    double_wrap,
    is_base_regime,
    lift_level2,
    m_sets,
    n_sets,
    omega_bound,
)
from barnette.family import bfs_levels, layer_cycle, peel_twice
from barnette.oracle import SearchConstraint, enumerate_hamiltonian_sets
from barnette.planar_core import canonical_code, mirror_reflect, op_equivalent
from barnette.rewrite import apply_A, apply_edge_operation, edge_operation_sites
from barnette.verifier import verify_hamiltonian_set
from helpers import icosahedron_with_degree_seven


def _compatible_sets(members, limit=40):
    out = []
    for G in members.graphs.values():
        res = enumerate_hamiltonian_sets(G, SearchConstraint("compatible", 3))
        out += [(G, S) for S in res.sets]
        if len(out) >= limit:
            break
    return out


def test_n_sets_partition_the_cycle(small_members):
    for G, U in _compatible_sets(small_members):
        m = len(layer_cycle(G, 1).vertices)
        n1, n2, n3, n4 = n_sets(G, U)
        assert not set(n1) & set(n2)
        assert not set(n3) & set(n4)
        assert set(n1) | set(n2) | set(n3) | set(n4) == set(range(m))


def test_n_sets_follow_membership(k4):
    c = layer_cycle(k4, 1).vertices
    n1, n2, n3, n4 = n_sets(k4, {c[0], c[1]})
    assert 0 in n2 and 1 in n1


def test_double_wrap_gives_minus_compatible_set(small_members):
    for G, U in _compatible_sets(small_members, 80):
        A2, W = double_wrap(G, U)
        assert verify_hamiltonian_set(A2, W).holds("minus")
        assert all(A2.degree(z) == 5 for z in layer_cycle(A2, 1).vertices)


def test_lift_onto_double_wrap_is_identity(k4):
    target = apply_A(apply_A(k4))
    res = lift_level2(k4, {1, 2}, target)
    assert res.via == "identity"
    assert verify_hamiltonian_set(target, res.set).holds("minus")


def test_lift_onto_modified_target_searches(k4):
    A2 = apply_A(apply_A(k4))
    target = apply_edge_operation(A2, "Cbar", edge_operation_sites(A2, "Cbar")[0])
    res = lift_level2(peel_twice(target), {1, 2}, target)
    assert res.via == "band"
    assert {1, 2} <= res.set
    assert verify_hamiltonian_set(target, res.set).holds("minus")


def test_lift_rejects_unrelated_target(k4, ico):
    with pytest.raises(ConstructionError) as exc:
        lift_level2(k4, {1, 2}, ico)
    assert exc.value.kind == "recognition"


def test_omega_bounds_table():
    assert omega_bound(2, 3) == 6
    assert omega_bound(3, 4) == 5
    assert omega_bound(1, 4) == 3 and omega_bound(1, 4, star=True) == 2
    assert omega_bound(3, 5) == 2 and omega_bound(4, 4) == 2
    assert all(omega_bound(k, 5) == 1 for k in (1, 2, 4))


def _sites(members, want=None):
    for G in members.graphs.values():
        if bfs_levels(G).height < 2:
            continue
        for X in enumerate_hamiltonian_sets(G, SearchConstraint("minus", 10)).sets:
            ms = m_sets(G, X)
            if not ms.disjoint:
                continue
            for i, k in ms.kind.items():
                if want is None or want(G, ms, i):
                    yield G, X, ms, i


def test_empty_site_set_is_identity(k4):
    A2 = apply_A(apply_A(k4))
    X = lift_level2(k4, {1, 2}).set
    res = apply_omega(A2, X)
    assert res.graph is A2 and res.set == X and not res.sites.kind


def test_index_above_bound_is_rejected(small_members):
    t = lambda G, ms, i: ms.kind[i] == 1 and G.degree(layer_cycle(G, 2).vertices[i]) == 5
    G, X, ms, i = next(_sites(small_members, t))
    with pytest.raises(ConstructionError, match="bound"):
        apply_omega(G, X, choices={i: 2})


def test_single_site_replacement_keeps_the_set(small_members):
    seen = set()
    for G, X, ms, i in _sites(small_members):
        k = ms.kind[i]
        d = G.degree(layer_cycle(G, 2).vertices[i])
        for j in range(1, omega_bound(k, d) + 1):
            res = apply_omega(G, X, choices={i: j})
            assert verify_hamiltonian_set(res.graph, res.set).holds("minus")
            assert all(res.graph.degree(t) <= 6 for t in layer_cycle(res.graph, 2).vertices)
            seen.add((k, j))
    assert {k for k, _ in seen} == {1, 2, 3, 4}


def test_target_inference_recovers_the_graph(small_members):
    n = 0
    for G, X, ms, i in _sites(small_members):
        k = ms.kind[i]
        res = apply_omega(G, X, choices={i: 1})
        back = apply_omega(G, X, target=res.graph)
        assert canonical_code(back.graph) == canonical_code(res.graph)
        n += 1
        if n > 30:
            break
    assert n > 0


def test_target_not_reachable(small_members, ico):
    G, X, ms, i = next(_sites(small_members))
    with pytest.raises(ConstructionError, match="reproduces"):
        apply_omega(G, X, target=ico)


def test_base_lookup_uses_catalog(catalog):
    J = instantiate_base_graph(catalog, "J").graph
    res = base_case_lookup(J, "minus", catalog)
    assert res.steps[0].startswith("base-catalog J")
    assert verify_hamiltonian_set(J, res.set).holds("minus")


def test_construct_all_flavors_small(small_members, catalog):
    for G in small_members.graphs.values():
        res = construct_hamiltonian_set(G, "compatible", catalog)
        rep = verify_hamiltonian_set(G, res.set)
        if res.exception:
            assert res.exception in ("P", "Q") and rep.is_hamiltonian
        else:
            assert rep.holds("compatible")


def test_compatible_is_mirror_of_minus(small_members):
    for G in list(small_members.graphs.values())[:60]:
        res = construct_hamiltonian_set(G, "minus")
        assert verify_hamiltonian_set(mirror_reflect(G), res.set).holds("compatible")


def test_exceptional_graph_reports_exception(catalog):
    P = instantiate_base_graph(catalog, "P").graph
    res = construct_hamiltonian_set(P, "compatible", catalog)
    assert res.exception == "P"
    assert verify_hamiltonian_set(P, res.set).is_hamiltonian
    assert construct_hamiltonian_set(P, "any", catalog).exception is None
    with pytest.raises(ConstructionError) as exc:
        construct_hamiltonian_set(P, "minus", catalog)
    assert exc.value.kind == "impossible" and exc.value.certified


def test_pm_impossible_is_certified(catalog):
    A4 = instantiate_base_graph(catalog, "A", 4).graph
    with pytest.raises(ConstructionError) as exc:
        construct_hamiltonian_set(A4, "pm", catalog)
    assert exc.value.certified


def test_non_member_rejected():
    with pytest.raises(ConstructionError) as exc:
        construct_hamiltonian_set(icosahedron_with_degree_seven())
    assert exc.value.kind == "not-in-family"


def test_icosahedron(ico):
    res = construct_hamiltonian_set(ico, "compatible", with_trace=True)
    assert verify_hamiltonian_set(ico, res.set).holds("compatible")
    assert res.trace is not None
    text = res.render()
    assert text.startswith("set=") and "trace=start" in text


def test_high_graph_uses_recursion():
    from barnette.bases import strip_graph

    G = apply_A(apply_A(apply_A(apply_A(strip_graph(4)))))
    assert not is_base_regime(G)
    res = construct_hamiltonian_set(G, "compatible")
    assert any(s.startswith("lift") for s in res.steps)
    assert verify_hamiltonian_set(G, res.set).holds("compatible")


def test_many_sites_at_once(small_members):
    import random

    rnd = random.Random(7)
    applied = 0
    for G, X, ms, i in _sites(small_members):
        if len(ms.kind) < 2:
            continue
        t = layer_cycle(G, 2).vertices
        star = rnd.random() < 0.5
        choices = {s: rnd.randint(0, omega_bound(k, G.degree(t[s]), star)) for s, k in ms.kind.items()}
        res = apply_omega(G, X, choices=choices, star=star)
        rep = verify_hamiltonian_set(res.graph, res.set)
        assert rep.holds("minus")
        if star and verify_hamiltonian_set(G, X).pm:
            assert rep.pm
        applied += sum(1 for j in choices.values() if j) > 1
    assert applied > 10
